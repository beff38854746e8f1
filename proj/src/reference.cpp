#include "mstcov/reference.hpp"

#include "mstcov/error.hpp"

#include <Eigen/Cholesky>

#include <random>
#include <string>

namespace mstcov {

std::size_t max_block_length(PropertyType property, std::size_t p, std::size_t n, std::size_t l,
                             std::size_t memory_limit) {
  const std::size_t M = memory_limit;
  std::size_t b = 0;
  switch (property) {
  case PropertyType::VST:
    b = p <= M ? M / n : 0;
    break;
  case PropertyType::SVT:
    b = n <= M ? M / p : 0;
    break;
  case PropertyType::TVS:
    b = p * n <= M ? M : 0;
    break;
  default:
    b = M / (p * n);
    break;
  }
  b = std::min(b, l);
  if (b < 2 && l >= 2) {
    throw ValidationError("memory limit " + std::to_string(M) + " is too small for " +
                          std::string(to_string(property)) + " with p=" + std::to_string(p) +
                          ", n=" + std::to_string(n) + " (block length would be " +
                          std::to_string(b) + " < 2)");
  }
  return b;
}

namespace {

Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& m, const char* what) {
  Eigen::LLT<Eigen::MatrixXd, Eigen::Lower> llt(m);
  if (llt.info() != Eigen::Success) {
    throw NumericalError(std::string("internal error: Cholesky factorization of the ") + what +
                         " failed after positive definite projection");
  }
  Eigen::MatrixXd lower = llt.matrixL();
  return lower;
}

} // namespace

GaussianBlockSampler::GaussianBlockSampler(const H0Covariance& h0)
    : p_(h0.num_variables()), n_(h0.num_locations()), block_length_(h0.block_length()),
      factored_(h0.factored()), order_(h0.order()) {
  if (factored_) {
    outer_lower_ = cholesky_lower(h0.outer(), "outer Kronecker factor");
    inner_lower_ = cholesky_lower(h0.inner(), "inner Kronecker factor");
  } else {
    lower_ = cholesky_lower(h0.matrix(), "H0 covariance");
  }
}

MvstDataset GaussianBlockSampler::sample(std::size_t l, const std::vector<Point>& coords, Rng& rng) const {
  if (coords.size() != n_) throw ValidationError("coordinate count does not match the sampler");
  const std::size_t L = block_length_;
  const std::size_t blocks = (l + L - 1) / L;
  const std::size_t dim = p_ * n_ * L;
  std::normal_distribution<double> normal;
  std::vector<double> values(p_ * n_ * l);

  // draws(:, k) holds block k in the (i, a, t) layout.
  Eigen::MatrixXd draws;
  if (!factored_) {
    Eigen::MatrixXd z(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(blocks));
    for (Eigen::Index k = 0; k < z.size(); ++k) z.data()[k] = normal(rng);
    draws = lower_.triangularView<Eigen::Lower>() * z;
  } else {
    const Eigen::Index inner_dim = inner_lower_.rows();
    const Eigen::Index outer_dim = outer_lower_.rows();
    Eigen::MatrixXd z(inner_dim, outer_dim * static_cast<Eigen::Index>(blocks));
    for (Eigen::Index k = 0; k < z.size(); ++k) z.data()[k] = normal(rng);
    const Eigen::MatrixXd left = inner_lower_.triangularView<Eigen::Lower>() * z;
    draws.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(blocks));
    for (std::size_t k = 0; k < blocks; ++k) {
      // vec(L_in Z L_out^T) has covariance L_out L_out^T (x) L_in L_in^T.
      const Eigen::MatrixXd y =
          left.middleCols(static_cast<Eigen::Index>(k) * outer_dim, outer_dim) *
          outer_lower_.transpose();
      for (std::size_t i = 0; i < p_; ++i) {
        for (std::size_t a = 0; a < n_; ++a) {
          for (std::size_t t = 0; t < L; ++t) {
            const std::size_t kron = order_ == KroneckerOrder::locations_x_vartime
                                         ? (a * p_ + i) * L + t
                                         : (i * n_ + a) * L + t;
            draws(static_cast<Eigen::Index>((i * n_ + a) * L + t), static_cast<Eigen::Index>(k)) =
                y.data()[kron];
          }
        }
      }
    }
  }

  for (std::size_t k = 0; k < blocks; ++k) {
    const std::size_t start = k * L;
    const std::size_t len = std::min(L, l - start);
    for (std::size_t s = 0; s < p_ * n_; ++s) {
      for (std::size_t t = 0; t < len; ++t) {
        values[s * l + start + t] =
            draws(static_cast<Eigen::Index>(s * L + t), static_cast<Eigen::Index>(k));
      }
    }
  }
  return MvstDataset(p_, coords, l, std::move(values));
}

std::array<MvstDataset, 2> generate_reference(const GaussianBlockSampler& sampler, std::size_t l,
                                              const std::vector<Point>& coords, std::uint64_t seed) {
  Rng first = make_rng(seed, {1});
  Rng second = make_rng(seed, {2});
  MvstDataset a = sampler.sample(l, coords, first);
  MvstDataset b = sampler.sample(l, coords, second);
  return {std::move(a), std::move(b)};
}

} // namespace mstcov
