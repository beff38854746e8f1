#include "mstcov/nearest_pd.hpp"

#include "mstcov/error.hpp"
#include "mstcov/rng.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <lapacke.h>

#include <cmath>
#include <iostream>
#include <limits>
#include <mutex>
#include <random>
#include <vector>

namespace mstcov {

namespace {

struct LowSpectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

// Eigenpairs with eigenvalue <= upper, via dsyevr's value range. Returns
// false if LAPACK reports an error.
bool lapack_low_spectrum(const Eigen::MatrixXd& sym, double upper, LowSpectrum& out) {
  const auto n = static_cast<lapack_int>(sym.rows());
  Eigen::MatrixXd work = sym;
  Eigen::VectorXd w(n);
  Eigen::MatrixXd z(n, n);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  const double lower = -(sym.cwiseAbs().rowwise().sum().maxCoeff() + 1.0);
  lapack_int found = 0;
  const lapack_int status =
      LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'V', 'L', n, work.data(), n, lower, upper, 0, 0,
                     0.0, &found, w.data(), z.data(), n, support.data());
  if (status != 0) return false;
  out.values = w.head(found);
  out.vectors = z.leftCols(found);
  return true;
}

LowSpectrum eigen_low_spectrum(const Eigen::MatrixXd& sym, double upper) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  const Eigen::VectorXd& values = solver.eigenvalues();
  Eigen::Index count = 0;
  while (count < values.size() && values(count) <= upper) ++count;
  return {values.head(count), solver.eigenvectors().leftCols(count)};
}

// Known spectrum -99..100 on a random orthogonal basis.
bool run_self_check() {
  const Eigen::Index n = 200;
  Rng rng(12345);
  std::normal_distribution<double> normal;
  const Eigen::MatrixXd gauss = Eigen::MatrixXd::NullaryExpr(n, n, [&] { return normal(rng); });
  const Eigen::MatrixXd basis = Eigen::HouseholderQR<Eigen::MatrixXd>(gauss).householderQ();
  Eigen::VectorXd spectrum(n);
  for (Eigen::Index k = 0; k < n; ++k) spectrum(k) = static_cast<double>(k) - 99.0;
  const Eigen::MatrixXd sym = basis * spectrum.asDiagonal() * basis.transpose();
  LowSpectrum low;
  if (!lapack_low_spectrum(sym, 0.5, low)) return false;
  if (low.values.size() != 100) return false;
  for (Eigen::Index k = 0; k < low.values.size(); ++k) {
    if (std::abs(low.values(k) - spectrum(k)) > 1e-8) return false;
    const double residual =
        (sym * low.vectors.col(k) - low.values(k) * low.vectors.col(k)).norm();
    if (!(residual < 1e-8)) return false;
  }
  return true;
}

} // namespace

bool lapack_eigensolver_ok() {
  static std::once_flag once;
  static bool ok = false;
  std::call_once(once, [] {
    ok = run_self_check();
    if (!ok) {
      std::cerr << "warning: LAPACK eigensolver failed its self-check; using the slower Eigen "
                   "solver (for OpenBLAS, try OPENBLAS_CORETYPE=Haswell)\n";
    }
  });
  return ok;
}

double pd_floor(const Eigen::MatrixXd& sym) {
  const double mean_diag = sym.diagonal().mean();
  if (!(mean_diag > 0.0)) {
    throw NumericalError("nearest_pd: mean diagonal is not positive");
  }
  return 1e-8 * mean_diag;
}

Eigen::MatrixXd nearest_pd(const Eigen::MatrixXd& matrix, PdProjectionInfo* info) {
  if (matrix.rows() != matrix.cols()) throw ValidationError("nearest_pd: matrix is not square");
  if (!matrix.allFinite()) throw NumericalError("nearest_pd: matrix has non-finite entries");
  Eigen::MatrixXd sym = 0.5 * (matrix + matrix.transpose());
  const double floor = pd_floor(sym);
  if (info) *info = {0, floor, false};

  {
    Eigen::MatrixXd shifted = sym;
    shifted.diagonal().array() -= floor;
    Eigen::LLT<Eigen::MatrixXd, Eigen::Lower> llt(shifted);
    if (llt.info() == Eigen::Success) return sym;
  }

  LowSpectrum low;
  bool fallback = !lapack_eigensolver_ok() || !lapack_low_spectrum(sym, floor, low);
  if (fallback) low = eigen_low_spectrum(sym, floor);
  if (info) {
    info->clipped = static_cast<std::size_t>(low.values.size());
    info->used_fallback = fallback;
  }
  // A + sum_k (floor - lambda_k) v_k v_k^T touches only the clipped part.
  const Eigen::VectorXd raise = (floor - low.values.array()).matrix();
  Eigen::MatrixXd scaled = low.vectors * raise.asDiagonal();
  sym.noalias() += scaled * low.vectors.transpose();
  Eigen::MatrixXd result = 0.5 * (sym + sym.transpose());
  return result;
}

} // namespace mstcov
