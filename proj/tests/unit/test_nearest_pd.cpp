#include "doctest.h"

#include "mstcov/error.hpp"
#include "mstcov/nearest_pd.hpp"
#include "mstcov/rng.hpp"

#include <Eigen/Dense>
#include <cmath>

using namespace mstcov;
using Eigen::MatrixXd;

namespace {

// Cyclic Jacobi eigendecomposition, independent of the library solvers.
void jacobi(MatrixXd A, Eigen::VectorXd& values, MatrixXd& vectors) {
  const Eigen::Index n = A.rows();
  vectors = MatrixXd::Identity(n, n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
    if (off < 1e-30) break;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (A(p, q) == 0.0) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        MatrixXd J = MatrixXd::Identity(n, n);
        J(p, p) = c;
        J(q, q) = c;
        J(p, q) = s;
        J(q, p) = -s;
        A = J.transpose() * A * J;
        vectors = vectors * J;
      }
  }
  values = A.diagonal();
}

MatrixXd clip_oracle(const MatrixXd& A, double floor) {
  Eigen::VectorXd w;
  MatrixXd V;
  jacobi((A + A.transpose()) / 2.0, w, V);
  for (Eigen::Index k = 0; k < w.size(); ++k) w(k) = std::max(w(k), floor);
  return V * w.asDiagonal() * V.transpose();
}

MatrixXd random_symmetric(Eigen::Index n, std::uint64_t seed) {
  auto rng = make_rng(seed);
  std::normal_distribution<double> g;
  MatrixXd A(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) A(i, j) = g(rng);
  return (A + A.transpose()) / 2.0 + 2.0 * MatrixXd::Identity(n, n);
}

// Q diag(spectrum) Q^T with a random orthogonal Q.
MatrixXd with_spectrum(const Eigen::VectorXd& spectrum, std::uint64_t seed) {
  const Eigen::Index n = spectrum.size();
  auto rng = make_rng(seed, {1});
  std::normal_distribution<double> g;
  MatrixXd G(n, n);
  for (Eigen::Index i = 0; i < n * n; ++i) G(i) = g(rng);
  MatrixXd Q = Eigen::HouseholderQR<MatrixXd>(G).householderQ();
  MatrixXd A = Q * spectrum.asDiagonal() * Q.transpose();
  return (A + A.transpose()) / 2.0;
}

} // namespace

TEST_CASE("lapack eigensolver passes its self-check") { CHECK(lapack_eigensolver_ok()); }

TEST_CASE("identity is unchanged") {
  MatrixXd I = MatrixXd::Identity(5, 5);
  PdProjectionInfo info;
  CHECK((nearest_pd(I, &info) - I).norm() == 0.0);
  CHECK(info.clipped == 0);
}

TEST_CASE("2x2 hand eigendecomposition") {
  MatrixXd A(2, 2);
  A << 1, 2, 2, 1;
  PdProjectionInfo info;
  MatrixXd X = nearest_pd(A, &info);
  const double d = 1e-8; // floor: 1e-8 times the mean diagonal
  // 3 v v^T + d w w^T with v = (1,1)/sqrt2, w = (1,-1)/sqrt2.
  MatrixXd expect(2, 2);
  expect << 1.5 + d / 2, 1.5 - d / 2, 1.5 - d / 2, 1.5 + d / 2;
  CHECK((X - expect).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(info.clipped == 1);
  CHECK(info.floor == doctest::Approx(d));
}

TEST_CASE("positive definite input is unchanged") {
  MatrixXd B = random_symmetric(6, 3);
  MatrixXd A = B * B.transpose() + MatrixXd::Identity(6, 6);
  CHECK((nearest_pd(A) - A).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("matches a brute-force projection on 4x4 matrices") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    Eigen::VectorXd spectrum(4);
    spectrum << 3.0, 1.0, -0.5, -1.5;
    spectrum *= 0.5 + static_cast<double>(seed) / 10.0;
    MatrixXd A = with_spectrum(spectrum, seed);
    PdProjectionInfo info;
    MatrixXd X = nearest_pd(A, &info);
    MatrixXd oracle = clip_oracle(A, info.floor);
    CHECK((X - oracle).cwiseAbs().maxCoeff() < 1e-10);
    // No competitor with eigenvalues >= floor is closer.
    auto rng = make_rng(seed, {9});
    std::normal_distribution<double> g;
    const double dist = (X - A).norm();
    for (int trial = 0; trial < 200; ++trial) {
      MatrixXd P(4, 4);
      for (Eigen::Index i = 0; i < 16; ++i) P(i) = 0.05 * g(rng);
      MatrixXd C = clip_oracle(X + (P + P.transpose()) / 2.0, info.floor);
      CHECK((C - A).norm() >= dist - 1e-12);
    }
  }
}

TEST_CASE("projection is idempotent") {
  // Slightly indefinite, like an estimated covariance. The floor follows the
  // mean diagonal, so a large clipped mass would move it between passes.
  MatrixXd A = with_spectrum(Eigen::VectorXd::LinSpaced(30, -0.02, 3.0), 5);
  MatrixXd X = nearest_pd(A);
  MatrixXd Y = nearest_pd(X);
  CHECK((X - Y).cwiseAbs().maxCoeff() < 1e-10);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(X);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("large indefinite matrix uses the partial eigensolver correctly") {
  MatrixXd A = random_symmetric(300, 7) - 2.0 * MatrixXd::Identity(300, 300);
  PdProjectionInfo info;
  MatrixXd X = nearest_pd(A, &info);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es((A + A.transpose()) / 2.0);
  Eigen::VectorXd w = es.eigenvalues();
  std::size_t below = 0;
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    if (w(k) < info.floor) ++below;
    w(k) = std::max(w(k), info.floor);
  }
  MatrixXd oracle = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().transpose();
  CHECK(info.clipped == below);
  CHECK((X - oracle).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("invalid input") {
  CHECK_THROWS_AS(nearest_pd(MatrixXd::Zero(2, 3)), ValidationError);
  MatrixXd A = MatrixXd::Identity(2, 2);
  A(0, 1) = std::nan("");
  CHECK_THROWS_AS(nearest_pd(A), NumericalError);
  CHECK_THROWS_AS(nearest_pd(-MatrixXd::Identity(2, 2)), NumericalError);
}
