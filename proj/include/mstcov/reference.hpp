#pragma once

#include "mstcov/dataset.hpp"
#include "mstcov/h0_cov.hpp"
#include "mstcov/rng.hpp"

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <cstdint>

namespace mstcov {

/// Largest block length b whose block covariance fits the memory cap M
/// (number of matrix rows/columns allowed), returned as min(b, l):
///   generic  p * n * min(b, l) <= M
///   V|ST     max(p, n * min(b, l)) <= M
///   S|VT     max(n, p * min(b, l)) <= M
///   T|VS     max(p * n, min(b, l)) <= M
/// Throws ValidationError if the cap allows b < 2 (and l >= 2).
std::size_t max_block_length(PropertyType property, std::size_t p, std::size_t n, std::size_t l,
                             std::size_t memory_limit);

/// Draws zero-mean Gaussian blocks with an H0Covariance (already projected
/// to positive definite). Factorizes once; each draw is independent.
class GaussianBlockSampler {
public:
  /// Throws NumericalError if a Cholesky factorization fails.
  explicit GaussianBlockSampler(const H0Covariance& h0);

  std::size_t num_variables() const { return p_; }
  std::size_t num_locations() const { return n_; }
  std::size_t block_length() const { return block_length_; }

  /// A dataset of l time points made of ceil(l / b) independent blocks,
  /// truncated to l.
  MvstDataset sample(std::size_t l, const std::vector<Point>& coords, Rng& rng) const;

private:
  std::size_t p_;
  std::size_t n_;
  std::size_t block_length_;
  bool factored_;
  KroneckerOrder order_;
  Eigen::MatrixXd lower_;       // dense factor
  Eigen::MatrixXd outer_lower_; // Kronecker factors
  Eigen::MatrixXd inner_lower_;
};

/// Dataset #1 (stream 1) and #2 (stream 2) below `seed`. Dataset #1 gives
/// the null test functions, dataset #2 the reference set.
std::array<MvstDataset, 2> generate_reference(const GaussianBlockSampler& sampler, std::size_t l,
                                              const std::vector<Point>& coords, std::uint64_t seed);

} // namespace mstcov
