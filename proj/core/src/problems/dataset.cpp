#include "ncvr/problems/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>

#include "ncvr/errors.hpp"
#include "ncvr/rng.hpp"

namespace ncvr {

namespace {

struct SparseRow {
  int label = 0;
  std::vector<std::pair<std::size_t, double>> entries;
};

double parse_double(const std::string& token, std::size_t line) {
  try {
    std::size_t used = 0;
    const double value = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    if (!std::isfinite(value)) {
      throw ParseError("non-finite value '" + token + "'", line);
    }
    return value;
  } catch (const std::logic_error&) {
    throw ParseError("expected a number, got '" + token + "'", line);
  }
}

int parse_label(const std::string& token, std::size_t line) {
  const double value = parse_double(token, line);
  if (value != std::floor(value) || std::fabs(value) > 1e9) {
    throw ParseError("label must be an integer, got '" + token + "'", line);
  }
  return static_cast<int>(value);
}

}  // namespace

Dataset parse_libsvm(std::istream& in, const LibsvmOptions& options) {
  std::vector<SparseRow> rows;
  std::size_t max_index = 0;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (const auto hash = text.find('#'); hash != std::string::npos) {
      text.erase(hash);
    }
    std::istringstream tokens(text);
    std::string token;
    if (!(tokens >> token)) continue;

    SparseRow row;
    row.label = parse_label(token, line_no);
    std::size_t previous = 0;
    while (tokens >> token) {
      const auto colon = token.find(':');
      if (colon == std::string::npos || colon == 0 ||
          colon + 1 == token.size()) {
        throw ParseError("expected idx:value, got '" + token + "'", line_no);
      }
      std::size_t index = 0;
      const auto* first = token.data();
      const auto [ptr, ec] = std::from_chars(first, first + colon, index);
      if (ec != std::errc() || ptr != first + colon || index == 0) {
        throw ParseError("bad feature index in '" + token + "'", line_no);
      }
      if (index <= previous) {
        throw ParseError("feature indices must be strictly increasing",
                         line_no);
      }
      previous = index;
      row.entries.emplace_back(index, parse_double(token.substr(colon + 1),
                                                   line_no));
      max_index = std::max(max_index, index);
    }
    rows.push_back(std::move(row));
  }
  require(!rows.empty(), "libsvm input contains no examples");

  std::size_t d = max_index;
  if (options.dimension > 0) {
    require(options.dimension >= max_index,
            "libsvm feature index exceeds the requested dimension");
    d = options.dimension;
  }
  require(d > 0, "libsvm input has no features");

  Dataset data;
  data.features = Matrix::Zero(static_cast<Eigen::Index>(rows.size()),
                               static_cast<Eigen::Index>(d));
  data.labels.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    data.labels.push_back(rows[r].label);
    for (const auto& [index, value] : rows[r].entries) {
      data.features(static_cast<Eigen::Index>(r),
                    static_cast<Eigen::Index>(index - 1)) = value;
    }
  }
  if (options.normalize) normalize_unit_interval(data);
  return data;
}

Dataset load_libsvm(const std::filesystem::path& path,
                    const LibsvmOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_libsvm(in, options);
}

void write_libsvm(const Dataset& data, std::ostream& out) {
  const auto old_precision = out.precision(17);
  for (std::size_t r = 0; r < data.size(); ++r) {
    out << data.labels[r];
    for (Eigen::Index j = 0; j < data.features.cols(); ++j) {
      const double v = data.features(static_cast<Eigen::Index>(r), j);
      if (v != 0.0) out << ' ' << (j + 1) << ':' << v;
    }
    out << '\n';
  }
  out.precision(old_precision);
}

void write_csv(const Dataset& data, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << "label";
  for (std::size_t j = 1; j <= data.dimension(); ++j) out << ",x" << j;
  out << '\n';
  for (std::size_t r = 0; r < data.size(); ++r) {
    out << data.labels[r];
    for (Eigen::Index j = 0; j < data.features.cols(); ++j) {
      out << ',' << data.features(static_cast<Eigen::Index>(r), j);
    }
    out << '\n';
  }
  out.precision(old_precision);
}

void normalize_unit_interval(Dataset& data) {
  for (Eigen::Index j = 0; j < data.features.cols(); ++j) {
    auto column = data.features.col(j);
    const double lo = column.minCoeff();
    const double hi = column.maxCoeff();
    if (lo >= 0.0 && hi <= 1.0) continue;
    if (hi == lo) {
      column.setZero();
    } else {
      column = (column.array() - lo) / (hi - lo);
    }
  }
}

Dataset make_synthetic_classification(std::size_t n, std::size_t d,
                                      std::size_t classes, std::uint64_t seed,
                                      double separation) {
  require(classes >= 2, "synthetic classification needs at least 2 classes");
  require(n >= classes, "synthetic classification needs n >= classes");
  require(d >= 1, "dimension must be at least 1");
  require(separation >= 0.0, "separation must be nonnegative");

  RngStream rng(seed);
  const auto rows = static_cast<Eigen::Index>(n);
  const auto cols = static_cast<Eigen::Index>(d);
  // E||c_k - c_l||^2 = 2 d s^2 = separation^2.
  const double center_scale = separation / std::sqrt(2.0 * static_cast<double>(d));
  Matrix centers(static_cast<Eigen::Index>(classes), cols);
  for (Eigen::Index k = 0; k < centers.rows(); ++k) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      centers(k, j) = center_scale * rng.normal();
    }
  }

  Dataset data;
  data.features.resize(rows, cols);
  data.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto label = static_cast<int>(i % classes);
    data.labels[i] = label;
    for (Eigen::Index j = 0; j < cols; ++j) {
      data.features(static_cast<Eigen::Index>(i), j) =
          centers(label, j) + rng.normal();
    }
  }
  return data;
}

}  // namespace ncvr
