#include "doctest.h"
#include "helpers.hpp"

#include "mstcov/error.hpp"
#include "mstcov/h0_cov.hpp"
#include "mstcov/simulate.hpp"

#include <Eigen/Dense>
#include <cmath>

using namespace mstcov;

namespace {

constexpr PropertyType kAll[] = {PropertyType::Vsym, PropertyType::Ssym, PropertyType::Tsym,
                                 PropertyType::VST,  PropertyType::SVT,  PropertyType::TVS,
                                 PropertyType::VS,   PropertyType::VT,   PropertyType::ST};

std::size_t pos(std::size_t n, std::size_t L, std::size_t i, std::size_t a, std::size_t t) {
  return (i * n + a) * L + t;
}

// Null covariance entry for lag u, written from the row definitions.
double oracle_entry(PropertyType prop, const EmpiricalCov& c, const RhoEstimates& r, std::size_t i,
                    std::size_t j, std::size_t a, std::size_t b, int u) {
  const std::size_t p = c.num_variables(), n = c.num_locations();
  auto S = [&](int lag) { return (c(i, j, a, a, lag) + c(i, j, b, b, lag)) / 2.0; };
  switch (prop) {
  case PropertyType::Vsym: return (c(i, j, a, b, u) + c(j, i, a, b, u)) / 2.0;
  case PropertyType::Ssym: return (c(i, j, a, b, u) + c(i, j, b, a, u)) / 2.0;
  case PropertyType::Tsym: return (c(i, j, a, b, u) + c(i, j, a, b, -u)) / 2.0;
  case PropertyType::VS: return r.rho4(a, b, u) * S(u);
  case PropertyType::VT: return r.rho5(a, b, u) * c(i, j, a, b, 0);
  case PropertyType::ST: return r.rho6(i, j, a, b) * S(u);
  case PropertyType::VST: {
    double v = 0.0;
    for (std::size_t k = 0; k < n; ++k) v += c(i, j, k, k, 0);
    return v / static_cast<double>(n) * r.rho1(a, b, u);
  }
  case PropertyType::SVT: {
    double t = 0.0;
    for (std::size_t k = 0; k < n; ++k) t += c(i, j, k, k, u);
    return r.rho2(a, b) * t / static_cast<double>(n);
  }
  case PropertyType::TVS: {
    const int au = std::abs(u);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t x = 0; x < p; ++x)
        for (std::size_t y = 0; y < p; ++y) {
          num += c(x, y, k, k, au) * c(x, y, k, k, 0);
          den += c(x, y, k, k, 0) * c(x, y, k, k, 0);
        }
    return c(i, j, a, b, 0) * (au == 0 ? 1.0 : num / den);
  }
  }
  return 0.0;
}

} // namespace

TEST_CASE("every row matches the oracle and is symmetric") {
  auto d = testing::correlated_dataset(2, 3, 400, 31);
  const std::size_t L = 5;
  auto cov = estimate_cross_cov(d, L - 1);
  auto rhos = estimate_rhos(cov, EstimatorMode::least_squares, {});
  for (PropertyType prop : kAll) {
    CAPTURE(to_string(prop));
    auto h = build_h0_cov(cov, rhos, prop, {L, H0Storage::dense});
    const Eigen::MatrixXd& M = h.matrix();
    REQUIRE(M.rows() == 2 * 3 * static_cast<Eigen::Index>(L));
    CHECK((M - M.transpose()).cwiseAbs().maxCoeff() == 0.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t a = 0; a < 3; ++a)
          for (std::size_t b = 0; b < 3; ++b)
            for (std::size_t t = 0; t < L; ++t)
              for (std::size_t t2 = 0; t2 < L; ++t2) {
                const double got = M(static_cast<Eigen::Index>(pos(3, L, i, a, t)),
                                      static_cast<Eigen::Index>(pos(3, L, j, b, t2)));
                const int u = static_cast<int>(t2) - static_cast<int>(t);
                worst = std::max(worst, std::abs(got - oracle_entry(prop, cov, rhos, i, j, a, b, u)));
              }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("Vsym row on variable-symmetric input reproduces direct assembly") {
  const std::size_t L = 4;
  auto cov = testing::cov_from(2, 3, L - 1, [](std::size_t i, std::size_t j, std::size_t a, std::size_t b, int u) {
    const double shift = static_cast<double>(u) + 0.3 * (static_cast<double>(b) - static_cast<double>(a));
    return (1.0 + 0.2 * static_cast<double>(i + j)) * std::exp(-0.2 * shift * shift);
  });
  auto rhos = estimate_rhos(cov, EstimatorMode::least_squares, {});
  auto M = build_h0_cov(cov, rhos, PropertyType::Vsym, {L, H0Storage::dense}).matrix();
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b)
          for (std::size_t t = 0; t < L; ++t)
            for (std::size_t t2 = 0; t2 < L; ++t2)
              CHECK(M(static_cast<Eigen::Index>(pos(3, L, i, a, t)),
                      static_cast<Eigen::Index>(pos(3, L, j, b, t2))) ==
                    cov(i, j, a, b, static_cast<int>(t2) - static_cast<int>(t)));
}

TEST_CASE("Kronecker forms assemble to the dense matrix") {
  auto d = testing::correlated_dataset(3, 4, 300, 5);
  const std::size_t L = 4;
  auto cov = estimate_cross_cov(d, L - 1);
  auto rhos = estimate_rhos(cov, EstimatorMode::least_squares, {});
  for (PropertyType prop : {PropertyType::VST, PropertyType::SVT, PropertyType::TVS}) {
    CAPTURE(to_string(prop));
    auto k = build_h0_cov(cov, rhos, prop, {L, H0Storage::kronecker});
    auto dense = build_h0_cov(cov, rhos, prop, {L, H0Storage::dense});
    REQUIRE(k.factored());
    CHECK((k.assemble() - dense.matrix()).cwiseAbs().maxCoeff() == 0.0);
    // The factored ordering really is outer (x) inner.
    Eigen::MatrixXd kron(k.dimension(), k.dimension());
    const auto ni = k.inner().rows();
    for (Eigen::Index r = 0; r < kron.rows(); ++r)
      for (Eigen::Index c = 0; c < kron.cols(); ++c)
        kron(r, c) = k.outer()(r / ni, c / ni) * k.inner()(r % ni, c % ni);
    double worst = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t t = 0; t < L; ++t)
          for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t b = 0; b < 4; ++b)
              for (std::size_t t2 = 0; t2 < L; ++t2) {
                const double x = kron(static_cast<Eigen::Index>(k.kronecker_index(i, a, t)),
                                      static_cast<Eigen::Index>(k.kronecker_index(j, b, t2)));
                const double y = dense.matrix()(static_cast<Eigen::Index>(pos(4, L, i, a, t)),
                                                static_cast<Eigen::Index>(pos(4, L, j, b, t2)));
                worst = std::max(worst, std::abs(x - y));
              }
    CHECK(worst == 0.0);
  }
}

TEST_CASE("VST assembly is variable matrix times spacetime correlation") {
  auto cov = testing::vst_cov(2, 3, 3);
  auto rhos = estimate_rhos(cov, EstimatorMode::least_squares, {});
  auto h = build_h0_cov(cov, rhos, PropertyType::VST, {4, H0Storage::kronecker});
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      CHECK(std::abs(h.outer()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                     cov(i, j, 0, 0, 0)) < 1e-14);
  // On exactly V|ST input the null covariance reproduces the input.
  auto M = h.assemble();
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b)
          for (std::size_t t = 0; t < 4; ++t)
            for (std::size_t t2 = 0; t2 < 4; ++t2)
              CHECK(std::abs(M(static_cast<Eigen::Index>(pos(3, 4, i, a, t)),
                               static_cast<Eigen::Index>(pos(3, 4, j, b, t2))) -
                             cov(i, j, a, b, static_cast<int>(t2) - static_cast<int>(t))) < 1e-12);
}

TEST_CASE("constructed null covariances satisfy their implied symmetry exactly") {
  auto d = simulate_model1({3, 2000, 1, 2, 17});
  const std::size_t L = 6, p = 2, n = 9;
  auto cov = estimate_cross_cov(d, L - 1);
  auto rhos = estimate_rhos(cov, EstimatorMode::least_squares, {});
  auto at = [&](const Eigen::MatrixXd& M, std::size_t i, std::size_t a, std::size_t t, std::size_t j,
                std::size_t b, std::size_t t2) {
    return M(static_cast<Eigen::Index>(pos(n, L, i, a, t)), static_cast<Eigen::Index>(pos(n, L, j, b, t2)));
  };
  auto scan = [&](PropertyType prop, auto&& partner) {
    auto M = build_h0_cov(cov, rhos, prop, {L, H0Storage::dense}).matrix();
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j)
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b)
            for (std::size_t t = 0; t < L; ++t)
              for (std::size_t t2 = 0; t2 < L; ++t2)
                if (at(M, i, a, t, j, b, t2) != partner(M, i, j, a, b, t, t2)) ++mismatches;
    return mismatches;
  };
  auto swap_vars = [&](const Eigen::MatrixXd& M, std::size_t i, std::size_t j, std::size_t a,
                       std::size_t b, std::size_t t, std::size_t t2) { return at(M, j, a, t, i, b, t2); };
  auto swap_locs = [&](const Eigen::MatrixXd& M, std::size_t i, std::size_t j, std::size_t a,
                       std::size_t b, std::size_t t, std::size_t t2) { return at(M, i, b, t, j, a, t2); };
  auto flip_time = [&](const Eigen::MatrixXd& M, std::size_t i, std::size_t j, std::size_t a,
                       std::size_t b, std::size_t t, std::size_t t2) { return at(M, i, a, t2, j, b, t); };
  CHECK(scan(PropertyType::Tsym, flip_time) == 0);
  CHECK(scan(PropertyType::Vsym, swap_vars) == 0);
  CHECK(scan(PropertyType::Ssym, swap_locs) == 0);
  CHECK(scan(PropertyType::VST, swap_vars) == 0);
  CHECK(scan(PropertyType::SVT, swap_locs) == 0);
  CHECK(scan(PropertyType::TVS, flip_time) == 0);
  // The raw estimate on asymmetric data is not time-symmetric.
  CHECK(scan(PropertyType::VS, flip_time) > 0);
}

TEST_CASE("validation of lags and storage") {
  auto d = testing::correlated_dataset(2, 3, 200, 1);
  auto cov = estimate_cross_cov(d, 3);
  auto rhos = estimate_rhos(cov, EstimatorMode::least_squares, {});
  CHECK_THROWS_AS(build_h0_cov(cov, rhos, PropertyType::Vsym, {5, H0Storage::dense}), ValidationError);
  CHECK_THROWS_AS(build_h0_cov(cov, rhos, PropertyType::VS, {4, H0Storage::kronecker}), ValidationError);
  auto only1 = estimate_rhos(cov, EstimatorMode::least_squares, {Rho::rho1});
  CHECK_THROWS_AS(build_h0_cov(cov, only1, PropertyType::VS, {4, H0Storage::dense}), ValidationError);
  // Long pooled lags come from a separate local estimate.
  auto local = estimate_local_cov(d, 9);
  auto h = build_h0_cov(cov, rhos, PropertyType::TVS, {10, H0Storage::kronecker}, &local);
  CHECK(h.dimension() == 60);
}

TEST_CASE("projection keeps the Kronecker structure") {
  auto d = testing::correlated_dataset(2, 3, 200, 3);
  auto cov = estimate_cross_cov(d, 5);
  auto rhos = estimate_rhos(cov, EstimatorMode::least_squares, {});
  auto h = build_h0_cov(cov, rhos, PropertyType::VST, {6, H0Storage::kronecker});
  std::size_t clipped = 0;
  auto pd = h.project_to_pd(&clipped);
  CHECK(pd.factored());
  Eigen::LLT<Eigen::MatrixXd> llt(pd.assemble());
  CHECK(llt.info() == Eigen::Success);
}
