#pragma once

#include "mstcov/dataset.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace mstcov {

/// Bivariate AR(1) field with a shifted copy: Z2 is AR(1) in time with
/// coefficient 0.5 and spatial noise covariance exp(-2 ||s - s'||) (scaled
/// by 3/4 after the first step, so the marginal variance stays 1);
/// Z1(s, t) = Z2(s + shift * (1, 1) / (m - 1), t + lag) / sqrt(2) + e / sqrt(2).
struct Model1Params {
  std::size_t m = 4;        // grid side, n = m^2
  std::size_t l = 10000;
  std::size_t shift = 0;    // spatial shift in grid steps along the diagonal
  std::size_t lag = 0;      // time lag
  std::uint64_t seed = 0;
};

/// Trivariate field with covariance
/// C_ij(h, u) = exp(-(0.2u)^2 / (|i-j|+1)^beta1 - ||h||^2 / (|0.2u|+1)^beta2)
///              / ((|0.2u| + 1)(|i - j| + 1)).
struct Model2Params {
  std::size_t m = 4;
  std::size_t l = 10000;
  double beta1 = 0.0;
  double beta2 = 0.0;
  std::uint64_t seed = 0;
  std::size_t memory_limit = 3000; // sampled in one exact block if 3 n l <= M
};

/// Throws ValidationError unless m >= 2 and l >= 2.
MvstDataset simulate_model1(const Model1Params& params);

/// Model 2 covariance between variables i and j (zero-based) at spatial lag
/// h and time lag u.
double model2_covariance(std::size_t i, std::size_t j, double h_norm, double u, double beta1,
                         double beta2);

/// Joint covariance over (variable, location, time) for `block` consecutive
/// times, in the variable-major / location / time layout.
Eigen::MatrixXd model2_block_covariance(const std::vector<Point>& coords, std::size_t block,
                                        double beta1, double beta2);

/// Samples Model 2 repeatedly with one factorization. Exact (one block over
/// all l times) when 3 n l <= memory_limit, otherwise independent blocks of
/// floor(M / (3 n)) times, which is recorded in warnings().
class Model2Sampler {
public:
  Model2Sampler(std::size_t m, std::size_t l, double beta1, double beta2,
                std::size_t memory_limit = 3000);

  MvstDataset sample(std::uint64_t seed) const;

  std::size_t block_length() const { return block_; }
  bool exact() const { return block_ == l_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

private:
  std::size_t m_;
  std::size_t l_;
  std::size_t block_;
  std::vector<Point> coords_;
  Eigen::MatrixXd lower_;
  std::vector<std::string> warnings_;
};

/// One-shot convenience around Model2Sampler.
MvstDataset simulate_model2(const Model2Params& params, std::vector<std::string>* warnings = nullptr);

} // namespace mstcov
