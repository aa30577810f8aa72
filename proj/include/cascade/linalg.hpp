#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cascade/matrix.hpp"

namespace cascade {

struct SymmetricEigen {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column k pairs with values[k]
};

/// Cyclic Jacobi rotations. Stops once the off-diagonal Frobenius norm drops
/// below rel_tol * ||A||_F; throws NumericalError if that takes more than
/// max_sweeps sweeps. The input must be symmetric (not checked here).
[[nodiscard]] SymmetricEigen jacobi_eigen(const Matrix& a, double rel_tol = 1e-12,
                                          int max_sweeps = 100);

/// Lower Cholesky factor of a symmetric positive definite matrix, or nullopt
/// when a pivot is not strictly positive.
[[nodiscard]] std::optional<Matrix> cholesky(const Matrix& a);

/// Solves (L L^T) x = b given the lower factor L.
[[nodiscard]] std::vector<double> cholesky_solve(const Matrix& lower, std::span<const double> b);

}  // namespace cascade
