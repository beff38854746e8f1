#include "mstcov/cross_cov.hpp"

#include "mstcov/error.hpp"
#include "mstcov/parallel.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <string>
#include <utility>

namespace mstcov {

double lagged_cross_cov(std::span<const double> x, std::span<const double> y, std::size_t u) {
  const std::size_t l = x.size();
  if (y.size() != l) throw ValidationError("series lengths differ");
  if (u >= l) throw ValidationError("lag exceeds series length");
  const std::size_t w = l - u;
  const double* xs = x.data();
  const double* ys = y.data() + u;
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t t = 0; t < w; ++t) {
    sx += xs[t];
    sy += ys[t];
  }
  const double mx = sx / static_cast<double>(w);
  const double my = sy / static_cast<double>(w);
  double acc = 0.0;
  for (std::size_t t = 0; t < w; ++t) acc += (ys[t] - my) * (xs[t] - mx);
  return acc / static_cast<double>(w);
}

namespace {

void check_lag_range(const MvstDataset& data, std::size_t max_lag) {
  const std::size_t l = data.num_times();
  if (l < 3) throw ValidationError("cross-covariance estimation needs at least 3 time points");
  if (max_lag < 1 || max_lag > l - 2) {
    throw ValidationError("max lag " + std::to_string(max_lag) + " outside [1, " +
                          std::to_string(l - 2) + "]");
  }
}

} // namespace

EmpiricalCov::EmpiricalCov(std::size_t p, std::size_t n, std::size_t max_lag,
                           std::vector<double> entries)
    : p_(p), n_(n), max_lag_(max_lag), entries_(std::move(entries)) {
  if (entries_.size() != p_ * p_ * n_ * n_ * (2 * max_lag_ + 1)) {
    throw ValidationError("EmpiricalCov entry count does not match dimensions");
  }
}

EmpiricalCov estimate_cross_cov(const MvstDataset& data, std::size_t max_lag) {
  check_lag_range(data, max_lag);
  const std::size_t p = data.num_variables();
  const std::size_t n = data.num_locations();
  const std::size_t l = data.num_times();
  const std::size_t width = 2 * max_lag + 1;
  const int U = static_cast<int>(max_lag);
  const std::size_t series = p * n;
  std::vector<double> entries(p * p * n * n * width, 0.0);
  auto at = [&](std::size_t first, std::size_t second, int u) -> double& {
    const std::size_t i = first / n, a = first % n;
    const std::size_t j = second / n, b = second % n;
    return entries[(((i * p + j) * n + a) * n + b) * width + static_cast<std::size_t>(u + U)];
  };

  // Column s of `all` is series s (first = (i, a) maps to s = i * n + a).
  const Eigen::Map<const Eigen::MatrixXd> all(data.values().data(), static_cast<Eigen::Index>(l),
                                              static_cast<Eigen::Index>(series));
  // For each lag the window means depend only on the series, so every pair
  // comes out of one product of the centered leading and trailing windows.
  parallel_for(max_lag + 1, [&](std::size_t u) {
    const auto w = static_cast<Eigen::Index>(l - u);
    Eigen::MatrixXd lead = all.topRows(w);
    Eigen::MatrixXd trail = all.bottomRows(w);
    lead.rowwise() -= lead.colwise().mean();
    trail.rowwise() -= trail.colwise().mean();
    const Eigen::MatrixXd prod = (lead.transpose() * trail) / static_cast<double>(w);
    const int ui = static_cast<int>(u);
    for (std::size_t first = 0; first < series; ++first) {
      for (std::size_t second = 0; second < series; ++second) {
        if (ui == 0 && first > second) continue;
        at(first, second, ui) = prod(static_cast<Eigen::Index>(first), static_cast<Eigen::Index>(second));
      }
    }
  });

  // Lag 0 from the first <= second half; negative lags by the identity.
  for (std::size_t first = 0; first < series; ++first) {
    for (std::size_t second = 0; second < series; ++second) {
      if (first > second) at(first, second, 0) = at(second, first, 0);
      for (int u = 1; u <= U; ++u) at(first, second, -u) = at(second, first, u);
    }
  }
  return EmpiricalCov(p, n, max_lag, std::move(entries));
}

LocalCov::LocalCov(std::size_t p, std::size_t n, std::size_t max_lag, std::vector<double> entries)
    : p_(p), n_(n), max_lag_(max_lag), entries_(std::move(entries)) {
  if (entries_.size() != n_ * p_ * p_ * (max_lag_ + 1)) {
    throw ValidationError("LocalCov entry count does not match dimensions");
  }
}

LocalCov estimate_local_cov(const MvstDataset& data, std::size_t max_lag) {
  check_lag_range(data, max_lag);
  const std::size_t p = data.num_variables();
  const std::size_t n = data.num_locations();
  const std::size_t l = data.num_times();
  std::vector<double> entries(n * p * p * (max_lag + 1), 0.0);
  parallel_for(n * p * p, [&](std::size_t k) {
    const std::size_t a = k / (p * p);
    const std::size_t i = (k / p) % p;
    const std::size_t j = k % p;
    // Lag 0 is symmetric in (i, j); compute it in the i <= j order.
    const auto x = data.series(std::min(i, j), a);
    const auto y = data.series(std::max(i, j), a);
    const auto xu = data.series(i, a);
    const auto yu = data.series(j, a);
    double* out = entries.data() + k * (max_lag + 1);
    for (std::size_t u = 0; u <= max_lag; ++u) {
      const auto w = static_cast<Eigen::Index>(l - u);
      const Eigen::Map<const Eigen::ArrayXd> lead(u == 0 ? x.data() : xu.data(), w);
      const Eigen::Map<const Eigen::ArrayXd> trail((u == 0 ? y.data() : yu.data()) + u, w);
      out[u] = ((lead - lead.mean()) * (trail - trail.mean())).sum() / static_cast<double>(w);
    }
  });
  return LocalCov(p, n, max_lag, std::move(entries));
}

LocalCov local_part(const EmpiricalCov& cov) {
  const std::size_t p = cov.num_variables();
  const std::size_t n = cov.num_locations();
  const std::size_t K = cov.max_lag();
  std::vector<double> entries(n * p * p * (K + 1), 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t u = 0; u <= K; ++u) {
          entries[((a * p + i) * p + j) * (K + 1) + u] = cov(i, j, a, a, static_cast<int>(u));
        }
      }
    }
  }
  return LocalCov(p, n, K, std::move(entries));
}

} // namespace mstcov
