#include "mstcov/simulate.hpp"

#include "mstcov/error.hpp"
#include "mstcov/nearest_pd.hpp"
#include "mstcov/rng.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <random>

namespace mstcov {

namespace {

void check_grid(std::size_t m, std::size_t l) {
  if (m < 2) throw ValidationError("grid side m must be at least 2");
  if (l < 2) throw ValidationError("number of time points l must be at least 2");
}

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

Eigen::MatrixXd lower_factor(const Eigen::MatrixXd& cov, std::vector<std::string>* warnings) {
  Eigen::LLT<Eigen::MatrixXd, Eigen::Lower> llt(cov);
  if (llt.info() != Eigen::Success) {
    if (warnings) warnings->push_back("covariance was not numerically positive definite; projected");
    llt.compute(nearest_pd(cov));
    if (llt.info() != Eigen::Success) throw NumericalError("Cholesky failed after projection");
  }
  Eigen::MatrixXd lower = llt.matrixL();
  return lower;
}

} // namespace

MvstDataset simulate_model1(const Model1Params& params) {
  check_grid(params.m, params.l);
  const std::size_t m = params.m;
  const std::size_t ext = m + params.shift;
  const std::size_t steps = params.l + params.lag;
  const double step = 1.0 / static_cast<double>(m - 1);

  std::vector<Point> big;
  big.reserve(ext * ext);
  for (std::size_t gx = 0; gx < ext; ++gx) {
    for (std::size_t gy = 0; gy < ext; ++gy) {
      big.push_back({static_cast<double>(gx) * step, static_cast<double>(gy) * step});
    }
  }
  const auto N = static_cast<Eigen::Index>(big.size());
  Eigen::MatrixXd sigma(N, N);
  for (Eigen::Index r = 0; r < N; ++r) {
    for (Eigen::Index c = 0; c < N; ++c) {
      sigma(r, c) = std::exp(-2.0 * distance(big[static_cast<std::size_t>(r)], big[static_cast<std::size_t>(c)]));
    }
  }
  const Eigen::MatrixXd lower = lower_factor(sigma, nullptr);

  Rng field_rng = make_rng(params.seed, {1});
  Rng noise_rng = make_rng(params.seed, {2});
  std::normal_distribution<double> normal;

  // Z2 on the extended grid, column t = time t.
  Eigen::MatrixXd z2(N, static_cast<Eigen::Index>(steps));
  const double innovation = std::sqrt(0.75);
  Eigen::VectorXd eps(N);
  for (std::size_t t = 0; t < steps; ++t) {
    for (Eigen::Index k = 0; k < N; ++k) eps(k) = normal(field_rng);
    const auto col = static_cast<Eigen::Index>(t);
    if (t == 0) {
      z2.col(col) = lower * eps;
    } else {
      z2.col(col) = 0.5 * z2.col(col - 1) + innovation * (lower * eps);
    }
  }

  const std::size_t n = m * m;
  const std::size_t l = params.l;
  const double half = std::sqrt(2.0) / 2.0;
  std::vector<double> values(2 * n * l);
  for (std::size_t gx = 0; gx < m; ++gx) {
    for (std::size_t gy = 0; gy < m; ++gy) {
      const std::size_t a = gx * m + gy;
      const auto own = static_cast<Eigen::Index>(gx * ext + gy);
      const auto shifted = static_cast<Eigen::Index>((gx + params.shift) * ext + gy + params.shift);
      for (std::size_t t = 0; t < l; ++t) {
        values[(0 * n + a) * l + t] =
            half * z2(shifted, static_cast<Eigen::Index>(t + params.lag)) + half * normal(noise_rng);
        values[(1 * n + a) * l + t] = z2(own, static_cast<Eigen::Index>(t));
      }
    }
  }
  return MvstDataset(2, unit_square_grid(m), l, std::move(values));
}

double model2_covariance(std::size_t i, std::size_t j, double h_norm, double u, double beta1,
                         double beta2) {
  const double var_gap = std::abs(static_cast<double>(i) - static_cast<double>(j)) + 1.0;
  const double time = std::abs(0.2 * u);
  return std::exp(-(time * time) / std::pow(var_gap, beta1) -
                  (h_norm * h_norm) / std::pow(time + 1.0, beta2)) /
         ((time + 1.0) * var_gap);
}

Eigen::MatrixXd model2_block_covariance(const std::vector<Point>& coords, std::size_t block,
                                        double beta1, double beta2) {
  const std::size_t p = 3;
  const std::size_t n = coords.size();
  const auto dim = static_cast<Eigen::Index>(p * n * block);
  Eigen::MatrixXd cov(dim, dim);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t t2 = 0; t2 < block; ++t2) {
        const auto col = static_cast<Eigen::Index>((j * n + b) * block + t2);
        for (std::size_t i = 0; i < p; ++i) {
          for (std::size_t a = 0; a < n; ++a) {
            const double h = distance(coords[a], coords[b]);
            for (std::size_t t1 = 0; t1 < block; ++t1) {
              const auto row = static_cast<Eigen::Index>((i * n + a) * block + t1);
              cov(row, col) = model2_covariance(
                  i, j, h, static_cast<double>(t2) - static_cast<double>(t1), beta1, beta2);
            }
          }
        }
      }
    }
  }
  return cov;
}

Model2Sampler::Model2Sampler(std::size_t m, std::size_t l, double beta1, double beta2,
                             std::size_t memory_limit)
    : m_(m), l_(l) {
  check_grid(m, l);
  if (!(beta1 >= 0.0) || !(beta2 >= 0.0)) throw ValidationError("beta1 and beta2 must be >= 0");
  coords_ = unit_square_grid(m);
  const std::size_t n = m * m;
  if (3 * n * l <= memory_limit) {
    block_ = l;
  } else {
    block_ = memory_limit / (3 * n);
    if (block_ < 2) {
      throw ValidationError("memory limit " + std::to_string(memory_limit) +
                            " is too small to sample Model 2 with n=" + std::to_string(n));
    }
    warnings_.push_back("Model 2 sampled in independent blocks of " + std::to_string(block_) +
                        " time points (3 n l exceeds the memory limit)");
  }
  lower_ = lower_factor(model2_block_covariance(coords_, block_, beta1, beta2), &warnings_);
}

MvstDataset Model2Sampler::sample(std::uint64_t seed) const {
  const std::size_t n = m_ * m_;
  const std::size_t series = 3 * n;
  const std::size_t blocks = (l_ + block_ - 1) / block_;
  Rng rng = make_rng(seed, {1});
  std::normal_distribution<double> normal;
  Eigen::MatrixXd z(lower_.rows(), static_cast<Eigen::Index>(blocks));
  for (Eigen::Index k = 0; k < z.size(); ++k) z.data()[k] = normal(rng);
  const Eigen::MatrixXd x = lower_.triangularView<Eigen::Lower>() * z;
  std::vector<double> values(series * l_);
  for (std::size_t k = 0; k < blocks; ++k) {
    const std::size_t start = k * block_;
    const std::size_t len = std::min(block_, l_ - start);
    for (std::size_t s = 0; s < series; ++s) {
      for (std::size_t t = 0; t < len; ++t) {
        values[s * l_ + start + t] = x(static_cast<Eigen::Index>(s * block_ + t), static_cast<Eigen::Index>(k));
      }
    }
  }
  return MvstDataset(3, coords_, l_, std::move(values));
}

MvstDataset simulate_model2(const Model2Params& params, std::vector<std::string>* warnings) {
  const Model2Sampler sampler(params.m, params.l, params.beta1, params.beta2, params.memory_limit);
  if (warnings) *warnings = sampler.warnings();
  return sampler.sample(params.seed);
}

} // namespace mstcov
