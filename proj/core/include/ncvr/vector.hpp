#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <string>

namespace ncvr {

/// Dense parameter vector in R^d. All arithmetic is double precision.
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline bool all_finite(const Vector& x) { return x.allFinite(); }

/// Throws ContractViolation when `x` does not have dimension `d`.
void require_dimension(const Vector& x, std::size_t d, const char* what);

}  // namespace ncvr
