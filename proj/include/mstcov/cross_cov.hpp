#pragma once

#include "mstcov/dataset.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace mstcov {

/// Lag-u sample cross-covariance of two series: the average over
/// t = 0..l-u-1 of (x[t] - mean x[0..l-u)) * (y[t+u] - mean y[u..l)),
/// divided by l - u. Window means run over the lag-dependent windows.
double lagged_cross_cov(std::span<const double> x, std::span<const double> y, std::size_t u);

/// Empirical cross-covariances C^{a,b}_{ij}(u) = cov{Z_i(s_a, t), Z_j(s_b, t + u)}
/// for all variable pairs, location pairs and signed lags -U..U.
///
/// Negative lags are materialized through the identity
/// C^{a,b}_{ij}(-u) = C^{b,a}_{ji}(u), which therefore holds bit-exactly.
class EmpiricalCov {
public:
  EmpiricalCov(std::size_t p, std::size_t n, std::size_t max_lag, std::vector<double> entries);

  double operator()(std::size_t i, std::size_t j, std::size_t a, std::size_t b, int u) const {
    return entries_[index(i, j, a, b, u)];
  }

  std::size_t num_variables() const { return p_; }
  std::size_t num_locations() const { return n_; }
  std::size_t max_lag() const { return max_lag_; }
  std::span<const double> entries() const { return entries_; }

  std::size_t index(std::size_t i, std::size_t j, std::size_t a, std::size_t b, int u) const {
    return (((i * p_ + j) * n_ + a) * n_ + b) * (2 * max_lag_ + 1) +
           static_cast<std::size_t>(u + static_cast<int>(max_lag_));
  }

private:
  std::size_t p_;
  std::size_t n_;
  std::size_t max_lag_;
  std::vector<double> entries_;
};

/// Requires 1 <= max_lag <= l - 2 and l >= 3; throws ValidationError otherwise.
EmpiricalCov estimate_cross_cov(const MvstDataset& data, std::size_t max_lag);

/// Same-location cross-covariances C^{a,a}_{ij}(u), u = -K..K. Used where only
/// the zero-space-lag part is needed at long time lags (pooled time factors),
/// which would be wasteful to compute for every location pair.
class LocalCov {
public:
  LocalCov(std::size_t p, std::size_t n, std::size_t max_lag, std::vector<double> entries);

  /// Negative lags via C^{a,a}_{ij}(-u) = C^{a,a}_{ji}(u).
  double operator()(std::size_t i, std::size_t j, std::size_t a, int u) const {
    if (u < 0) return entries_[index(j, i, a, static_cast<std::size_t>(-u))];
    return entries_[index(i, j, a, static_cast<std::size_t>(u))];
  }

  std::size_t num_variables() const { return p_; }
  std::size_t num_locations() const { return n_; }
  std::size_t max_lag() const { return max_lag_; }

private:
  std::size_t index(std::size_t i, std::size_t j, std::size_t a, std::size_t u) const {
    return ((a * p_ + i) * p_ + j) * (max_lag_ + 1) + u;
  }

  std::size_t p_;
  std::size_t n_;
  std::size_t max_lag_;
  std::vector<double> entries_;
};

/// Same preconditions as estimate_cross_cov.
LocalCov estimate_local_cov(const MvstDataset& data, std::size_t max_lag);

/// The a = b slice of an already estimated EmpiricalCov.
LocalCov local_part(const EmpiricalCov& cov);

} // namespace mstcov
