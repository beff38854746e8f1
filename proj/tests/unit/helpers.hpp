#pragma once

#include "mstcov/cross_cov.hpp"
#include "mstcov/dataset.hpp"
#include "mstcov/rng.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace testing {

// Points on a line, distinct.
inline std::vector<mstcov::Point> line_coords(std::size_t n) {
  std::vector<mstcov::Point> c;
  for (std::size_t a = 0; a < n; ++a) c.push_back({static_cast<double>(a), 0.0});
  return c;
}

inline mstcov::MvstDataset gaussian_dataset(std::size_t p, std::size_t n, std::size_t l,
                                            std::uint64_t seed) {
  auto rng = mstcov::make_rng(seed);
  std::normal_distribution<double> g;
  std::vector<double> v(p * n * l);
  for (double& x : v) x = g(rng);
  return {p, line_coords(n), l, std::move(v)};
}

// Correlated series: each variable mixes a shared AR(1) driver with its own noise,
// so cross-covariances are far from zero and asymmetric in lag.
inline mstcov::MvstDataset correlated_dataset(std::size_t p, std::size_t n, std::size_t l,
                                              std::uint64_t seed) {
  auto rng = mstcov::make_rng(seed);
  std::normal_distribution<double> g;
  std::vector<double> driver(l + 8);
  double state = 0.0;
  for (double& d : driver) d = state = 0.6 * state + g(rng);
  std::vector<double> v(p * n * l);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t t = 0; t < l; ++t) {
        v[(i * n + a) * l + t] = (1.0 + 0.3 * static_cast<double>(i)) * driver[t + i + a % 3] +
                                 0.5 * g(rng);
      }
    }
  }
  return {p, line_coords(n), l, std::move(v)};
}

// Direct evaluation of the lag-u covariance, written independently of the library.
inline double brute_cov(const std::vector<double>& x, const std::vector<double>& y, std::size_t u) {
  const std::size_t w = x.size() - u;
  double mx = 0.0, my = 0.0;
  for (std::size_t t = 0; t < w; ++t) {
    mx += x[t];
    my += y[t + u];
  }
  mx /= static_cast<double>(w);
  my /= static_cast<double>(w);
  double s = 0.0;
  for (std::size_t t = 0; t < w; ++t) s += (x[t] - mx) * (y[t + u] - my);
  return s / static_cast<double>(w);
}

inline std::vector<double> series_of(const mstcov::MvstDataset& d, std::size_t i, std::size_t a) {
  auto s = d.series(i, a);
  return {s.begin(), s.end()};
}

// Oracle covariance for any signed lag: C^{ab}_{ij}(u) = cov(Z_i(a, t), Z_j(b, t + u)).
inline double brute_entry(const mstcov::MvstDataset& d, std::size_t i, std::size_t j,
                          std::size_t a, std::size_t b, int u) {
  if (u >= 0) return brute_cov(series_of(d, i, a), series_of(d, j, b), static_cast<std::size_t>(u));
  return brute_cov(series_of(d, j, b), series_of(d, i, a), static_cast<std::size_t>(-u));
}

// EmpiricalCov from a closed-form entry function; the caller keeps
// f(i, j, a, b, -u) == f(j, i, b, a, u).
template <class F>
mstcov::EmpiricalCov cov_from(std::size_t p, std::size_t n, std::size_t U, F&& f) {
  std::vector<double> e(p * p * n * n * (2 * U + 1));
  const int Ui = static_cast<int>(U);
  std::size_t k = 0;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          for (int u = -Ui; u <= Ui; ++u) e[k++] = f(i, j, a, b, u);
  return {p, n, U, std::move(e)};
}

// Fully separable: V_ij * rho(a, b) * r(|u|) with symmetric V and rho.
inline mstcov::EmpiricalCov separable_cov(std::size_t p, std::size_t n, std::size_t U) {
  auto V = [](std::size_t i, std::size_t j) {
    return i == j ? 2.0 + static_cast<double>(i) : 0.7 / static_cast<double>(1 + i + j);
  };
  auto rho = [](std::size_t a, std::size_t b) {
    return a == b ? 1.0 : 0.8 / (1.0 + std::abs(static_cast<double>(a) - static_cast<double>(b)));
  };
  return cov_from(p, n, U, [&](std::size_t i, std::size_t j, std::size_t a, std::size_t b, int u) {
    return V(i, j) * rho(a, b) * std::pow(0.6, std::abs(u));
  });
}

// Separable in variables only: V_ij * R(a, b, u) with R(a, b, -u) = R(b, a, u).
inline mstcov::EmpiricalCov vst_cov(std::size_t p, std::size_t n, std::size_t U) {
  auto V = [](std::size_t i, std::size_t j) {
    return i == j ? 1.5 + static_cast<double>(i) : 0.4 + 0.1 * static_cast<double>(i + j);
  };
  auto R = [](std::size_t a, std::size_t b, int u) {
    const double da = static_cast<double>(a), db = static_cast<double>(b);
    const double shift = static_cast<double>(u) + 0.5 * (db - da);
    return std::exp(-0.1 * shift * shift - 0.05 * (da + db));
  };
  return cov_from(p, n, U, [&](std::size_t i, std::size_t j, std::size_t a, std::size_t b, int u) {
    return V(i, j) * R(a, b, u) / std::sqrt(R(a, a, 0) * R(b, b, 0));
  });
}

} // namespace testing
