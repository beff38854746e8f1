#pragma once

#include <Eigen/Core>

#include <cstddef>

namespace mstcov {

struct PdProjectionInfo {
  std::size_t clipped = 0;      // eigenvalues raised to the floor
  double floor = 0.0;           // 1e-8 * mean diagonal
  bool used_fallback = false;   // Eigen solver used instead of LAPACK
};

/// Eigenvalue floor used by nearest_pd: 1e-8 times the mean diagonal.
/// Throws NumericalError if the mean diagonal is not positive.
double pd_floor(const Eigen::MatrixXd& sym);

/// Nearest positive definite matrix in the Frobenius norm, up to the floor:
/// symmetrize (A + A^T) / 2, raise every eigenvalue below the floor to the
/// floor and reconstruct. Matrices whose eigenvalues already exceed the floor
/// are returned symmetrized and otherwise untouched (checked by a Cholesky
/// of A - floor * I). Only the eigenpairs below the floor are computed.
///
/// Throws ValidationError for non-square input and NumericalError for
/// non-finite entries or a failed eigendecomposition.
Eigen::MatrixXd nearest_pd(const Eigen::MatrixXd& matrix, PdProjectionInfo* info = nullptr);

/// Whether the LAPACK eigensolver passed its start-up self-check. When it
/// fails, nearest_pd uses Eigen's dense solver (correct but much slower).
bool lapack_eigensolver_ok();

} // namespace mstcov
