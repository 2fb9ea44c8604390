#include "ncvr/bench/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "ncvr/errors.hpp"

namespace ncvr {

namespace {

double quantile(std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::string real_cell(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string eps_label(double eps) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", eps);
  return buf;
}

}  // namespace

double median(std::vector<double> values) {
  require(!values.empty(), "median of an empty set");
  std::sort(values.begin(), values.end());
  return quantile(values, 0.5);
}

double interquartile_range(std::vector<double> values) {
  require(!values.empty(), "interquartile range of an empty set");
  std::sort(values.begin(), values.end());
  return quantile(values, 0.75) - quantile(values, 0.25);
}

RateFit fit_rate(std::span<const double> passes, std::span<const double> values,
                 const RateWindow& window) {
  require(passes.size() == values.size(), "fit_rate: series lengths differ");
  std::vector<double> lx;
  std::vector<double> ly;
  double running = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < passes.size(); ++k) {
    if (std::isfinite(values[k])) running = std::min(running, values[k]);
    if (!(passes[k] > 0.0) || passes[k] < window.min_passes || passes[k] > window.max_passes) {
      continue;
    }
    if (!(running > 0.0) || !std::isfinite(running)) continue;
    lx.push_back(std::log(passes[k]));
    ly.push_back(std::log(running));
  }
  if (lx.size() < 5) {
    throw ContractViolation("fit_rate needs at least 5 checkpoints in the window, got " +
                            std::to_string(lx.size()));
  }
  const double k = static_cast<double>(lx.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t j = 0; j < lx.size(); ++j) {
    mx += lx[j];
    my += ly[j];
  }
  mx /= k;
  my /= k;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t j = 0; j < lx.size(); ++j) {
    sxy += (lx[j] - mx) * (ly[j] - my);
    sxx += (lx[j] - mx) * (lx[j] - mx);
  }
  require(sxx > 0.0, "fit_rate: all checkpoints share one effective-pass value");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.points = lx.size();
  return fit;
}

RateFit fit_rate(const std::vector<Checkpoint>& checkpoints, const RateWindow& window) {
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& c : checkpoints) {
    x.push_back(c.effective_passes);
    y.push_back(c.grad_norm_sq);
  }
  return fit_rate(x, y, window);
}

std::vector<Checkpoint> read_run_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty run CSV", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::string header = "effective_passes,ifo_calls,f_value,grad_norm_sq";
  const bool with_status = line == header + ",status";
  if (line != header && !with_status) {
    throw ParseError("unexpected header '" + line + "'", 1);
  }
  std::vector<Checkpoint> out;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::vector<std::string> cells;
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != (with_status ? 5u : 4u)) {
      throw ParseError("expected " + std::to_string(with_status ? 5 : 4) + " fields", number);
    }
    Checkpoint cp;
    try {
      cp.effective_passes = std::stod(cells[0]);
      cp.ifo_count = std::stoull(cells[1]);
      cp.f_value = std::stod(cells[2]);
      cp.grad_norm_sq = std::stod(cells[3]);
    } catch (const std::exception&) {
      throw ParseError("malformed number", number);
    }
    if (with_status && cells[4] == "diverged") break;
    cp.min_grad_norm_sq =
        out.empty() ? cp.grad_norm_sq : std::min(out.back().min_grad_norm_sq, cp.grad_norm_sq);
    cp.update_index = out.size();
    out.push_back(cp);
  }
  return out;
}

std::vector<Checkpoint> read_run_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ContractViolation("cannot open " + path.string());
  return read_run_csv(in);
}

std::vector<RunSeries> load_runs(const std::filesystem::path& dir) {
  const auto manifest_path = dir / "manifest.json";
  std::ifstream in(manifest_path);
  if (!in) throw ContractViolation("no manifest.json in " + dir.string());
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(manifest_path.string() + ": " + e.what(), 0);
  }
  std::vector<RunSeries> out;
  try {
    const std::string problem = manifest.at("problem").at("descriptor").get<std::string>();
    for (const auto& run : manifest.at("runs")) {
      RunSeries s;
      s.algorithm = run.at("algorithm").get<std::string>();
      s.seed = run.at("seed").get<std::uint64_t>();
      s.status = run.at("status").get<std::string>();
      s.problem = problem;
      s.checkpoints = read_run_csv(dir / run.at("file").get<std::string>());
      out.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(manifest_path.string() + ": " + e.what(), 0);
  }
  return out;
}

std::vector<double> default_epsilon_ladder() {
  return {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
}

ComparisonTable compare(const std::vector<RunSeries>& runs,
                        const std::vector<double>& ladder, const RateWindow& window) {
  require(!runs.empty(), "compare needs at least one run");
  ComparisonTable table;
  table.problem = runs.front().problem;
  table.ladder = ladder;
  std::vector<std::string> order;
  std::map<std::string, std::vector<const RunSeries*>> groups;
  for (const auto& r : runs) {
    if (r.problem != table.problem) {
      throw ContractViolation("compare: runs mix problems '" + table.problem + "' and '" +
                              r.problem + "'; tables are per problem");
    }
    require(!r.checkpoints.empty(),
            "compare: run " + r.algorithm + " seed " + std::to_string(r.seed) +
                " has no checkpoints");
    if (!groups.count(r.algorithm)) order.push_back(r.algorithm);
    groups[r.algorithm].push_back(&r);
  }
  for (const auto& name : order) {
    const auto& group = groups[name];
    ComparisonRow row;
    row.algorithm = name;
    row.runs = group.size();
    std::vector<double> finals;
    std::vector<double> mins;
    std::vector<double> slopes;
    for (const auto* r : group) {
      if (r->status != "ok" && r->status != "warning") ++row.partial_runs;
      finals.push_back(r->checkpoints.back().grad_norm_sq);
      double m = std::numeric_limits<double>::infinity();
      for (const auto& c : r->checkpoints) m = std::min(m, c.grad_norm_sq);
      mins.push_back(m);
      try {
        slopes.push_back(fit_rate(r->checkpoints, window).slope);
      } catch (const ContractViolation&) {
      }
    }
    row.final_median = median(finals);
    row.final_iqr = interquartile_range(finals);
    row.min_median = median(mins);
    row.min_iqr = interquartile_range(mins);
    if (!slopes.empty()) row.slope_median = median(slopes);
    for (double eps : ladder) {
      std::vector<double> hits;
      std::size_t reached = 0;
      for (const auto* r : group) {
        double ifo = std::numeric_limits<double>::infinity();
        for (const auto& c : r->checkpoints) {
          if (c.grad_norm_sq <= eps) {
            ifo = static_cast<double>(c.ifo_count);
            ++reached;
            break;
          }
        }
        hits.push_back(ifo);
      }
      if (2 * reached > group.size()) {
        row.ifo_to_reach.push_back(median(hits));
      } else {
        row.ifo_to_reach.push_back(std::nullopt);
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string ComparisonTable::to_csv() const {
  std::ostringstream out;
  out << "algorithm,runs,partial_runs,final_median,final_iqr,min_median,min_iqr";
  for (double eps : ladder) out << ",ifo_to_" << eps_label(eps);
  out << ",slope_median\n";
  for (const auto& r : rows) {
    out << r.algorithm << ',' << r.runs << ',' << r.partial_runs << ','
        << real_cell(r.final_median) << ',' << real_cell(r.final_iqr) << ','
        << real_cell(r.min_median) << ',' << real_cell(r.min_iqr);
    for (const auto& v : r.ifo_to_reach) out << ',' << (v ? real_cell(*v) : "not reached");
    out << ',' << (r.slope_median ? real_cell(*r.slope_median) : "n/a") << '\n';
  }
  return out.str();
}

std::string ComparisonTable::to_text() const {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> head{"algorithm", "runs", "final med", "final IQR",
                                "min med",   "min IQR"};
  for (double eps : ladder) head.push_back("IFO@" + eps_label(eps));
  head.push_back("slope");
  cells.push_back(head);
  for (const auto& r : rows) {
    std::vector<std::string> line{r.algorithm,
                                  std::to_string(r.runs) +
                                      (r.partial_runs ? " (" + std::to_string(r.partial_runs) +
                                                            " partial)"
                                                      : ""),
                                  real_cell(r.final_median), real_cell(r.final_iqr),
                                  real_cell(r.min_median), real_cell(r.min_iqr)};
    for (const auto& v : r.ifo_to_reach) line.push_back(v ? real_cell(*v) : "not reached");
    line.push_back(r.slope_median ? real_cell(*r.slope_median) : "n/a");
    cells.push_back(std::move(line));
  }
  std::vector<std::size_t> width(head.size(), 0);
  for (const auto& line : cells) {
    for (std::size_t j = 0; j < line.size(); ++j) width[j] = std::max(width[j], line[j].size());
  }
  std::ostringstream out;
  out << "problem: " << problem << '\n';
  for (const auto& line : cells) {
    for (std::size_t j = 0; j < line.size(); ++j) {
      if (j > 0) out << "  ";
      out << (j == 0 ? std::left : std::right) << std::setw(static_cast<int>(width[j]))
          << line[j];
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace ncvr
