#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "ncvr/vector.hpp"

namespace ncvr {

/// Dense labelled examples: one row of `features` per example.
struct Dataset {
  Matrix features;          // n x d
  std::vector<int> labels;  // n entries

  std::size_t size() const { return labels.size(); }
  std::size_t dimension() const {
    return static_cast<std::size_t>(features.cols());
  }
};

struct LibsvmOptions {
  /// Rescale features to [0, 1] after parsing (see normalize_unit_interval).
  bool normalize = true;
  /// Force the feature dimension; inferred from the largest index otherwise.
  std::size_t dimension = 0;
};

/// Parses "label idx:val idx:val ..." lines (1-based indices, '#' comments).
/// Throws ParseError with the 1-based line number on malformed input and
/// ContractViolation when the input holds no examples.
Dataset parse_libsvm(std::istream& in, const LibsvmOptions& options = {});
Dataset load_libsvm(const std::filesystem::path& path,
                    const LibsvmOptions& options = {});

/// Writes the libsvm text form with round-trip precision, skipping zeros.
void write_libsvm(const Dataset& data, std::ostream& out);

/// Writes a CSV dump with header `label,x1,...,xd`.
void write_csv(const Dataset& data, std::ostream& out);

/// Per-feature affine rescaling to [0, 1]. Features whose observed values
/// already lie inside [0, 1] are left untouched; a constant feature outside
/// [0, 1] maps to 0.
void normalize_unit_interval(Dataset& data);

/// Balanced Gaussian blobs: example i belongs to class i % classes, and each
/// class is a unit-variance isotropic cloud around a random center. Centers
/// are drawn so the expected distance between two centers is `separation`.
Dataset make_synthetic_classification(std::size_t n, std::size_t d,
                                      std::size_t classes, std::uint64_t seed,
                                      double separation = 6.0);

}  // namespace ncvr
