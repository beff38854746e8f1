#include "mstcov/h0_cov.hpp"

#include "mstcov/error.hpp"
#include "mstcov/parallel.hpp"

#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

namespace mstcov {

H0Covariance H0Covariance::dense(PropertyType property, std::size_t p, std::size_t n,
                                 std::size_t block_length, Eigen::MatrixXd matrix) {
  const auto dim = static_cast<Eigen::Index>(p * n * block_length);
  if (matrix.rows() != dim || matrix.cols() != dim) {
    throw ValidationError("H0 covariance matrix does not match p * n * block_length");
  }
  H0Covariance h;
  h.property_ = property;
  h.p_ = p;
  h.n_ = n;
  h.block_length_ = block_length;
  h.matrix_ = std::move(matrix);
  return h;
}

H0Covariance H0Covariance::kronecker(PropertyType property, std::size_t p, std::size_t n,
                                     std::size_t block_length, KroneckerOrder order,
                                     Eigen::MatrixXd outer, Eigen::MatrixXd inner) {
  std::size_t outer_dim = 0;
  switch (order) {
  case KroneckerOrder::variables_x_spacetime: outer_dim = p; break;
  case KroneckerOrder::locations_x_vartime: outer_dim = n; break;
  case KroneckerOrder::varspace_x_time: outer_dim = p * n; break;
  }
  const std::size_t inner_dim = p * n * block_length / outer_dim;
  if (outer.rows() != static_cast<Eigen::Index>(outer_dim) || outer.cols() != outer.rows() ||
      inner.rows() != static_cast<Eigen::Index>(inner_dim) || inner.cols() != inner.rows()) {
    throw ValidationError("Kronecker factor sizes do not match the layout");
  }
  H0Covariance h;
  h.property_ = property;
  h.p_ = p;
  h.n_ = n;
  h.block_length_ = block_length;
  h.factored_ = true;
  h.order_ = order;
  h.outer_ = std::move(outer);
  h.inner_ = std::move(inner);
  return h;
}

std::size_t H0Covariance::kronecker_index(std::size_t i, std::size_t a, std::size_t t) const {
  if (order_ == KroneckerOrder::locations_x_vartime) return (a * p_ + i) * block_length_ + t;
  return (i * n_ + a) * block_length_ + t;
}

Eigen::MatrixXd H0Covariance::assemble() const {
  if (!factored_) return matrix_;
  const auto dim = static_cast<Eigen::Index>(dimension());
  const auto inner_dim = inner_.rows();
  Eigen::MatrixXd full(dim, dim);
  std::vector<Eigen::Index> to_kron(static_cast<std::size_t>(dim));
  for (std::size_t i = 0; i < p_; ++i) {
    for (std::size_t a = 0; a < n_; ++a) {
      for (std::size_t t = 0; t < block_length_; ++t) {
        to_kron[(i * n_ + a) * block_length_ + t] =
            static_cast<Eigen::Index>(kronecker_index(i, a, t));
      }
    }
  }
  for (Eigen::Index col = 0; col < dim; ++col) {
    const Eigen::Index kc = to_kron[static_cast<std::size_t>(col)];
    for (Eigen::Index row = 0; row < dim; ++row) {
      const Eigen::Index kr = to_kron[static_cast<std::size_t>(row)];
      full(row, col) = outer_(kr / inner_dim, kc / inner_dim) * inner_(kr % inner_dim, kc % inner_dim);
    }
  }
  return full;
}

H0Covariance H0Covariance::project_to_pd(std::size_t* clipped) const {
  H0Covariance out = *this;
  PdProjectionInfo info;
  std::size_t total = 0;
  if (factored_) {
    out.outer_ = nearest_pd(outer_, &info);
    total += info.clipped;
    out.inner_ = nearest_pd(inner_, &info);
    total += info.clipped;
  } else {
    out.matrix_ = nearest_pd(matrix_, &info);
    total += info.clipped;
  }
  if (clipped) *clipped = total;
  return out;
}

namespace {

void mirror_upper(Eigen::MatrixXd& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = c + 1; r < m.rows(); ++r) m(r, c) = m(c, r);
  }
}

void require_lags(std::size_t available, std::size_t needed, const char* what) {
  if (available < needed) {
    throw ValidationError(std::string("H0 covariance needs lag ") + std::to_string(needed) +
                          " but the " + what + " only reaches lag " + std::to_string(available));
  }
}

// Dense block matrix from a pairwise entry function h(i, j, a, b, u). Only
// blocks with (i, a) <= (j, b) are evaluated; the rest is mirrored so the
// matrix is exactly symmetric.
template <class Entry>
Eigen::MatrixXd assemble_pairwise(std::size_t p, std::size_t n, std::size_t L, Entry&& entry) {
  const std::size_t series = p * n;
  const auto dim = static_cast<Eigen::Index>(series * L);
  Eigen::MatrixXd m(dim, dim);
  const int Li = static_cast<int>(L);
  parallel_for(series, [&](std::size_t first) {
    const std::size_t i = first / n, a = first % n;
    std::vector<double> lagged(2 * L - 1);
    for (std::size_t second = first; second < series; ++second) {
      const std::size_t j = second / n, b = second % n;
      for (int u = -(Li - 1); u <= Li - 1; ++u) lagged[static_cast<std::size_t>(u + Li - 1)] = entry(i, j, a, b, u);
      for (std::size_t t2 = 0; t2 < L; ++t2) {
        const auto col = static_cast<Eigen::Index>(second * L + t2);
        for (std::size_t t1 = 0; t1 < L; ++t1) {
          const auto row = static_cast<Eigen::Index>(first * L + t1);
          // entry at lag t2 - t1
          m(row, col) = lagged[t2 + L - 1 - t1];
        }
      }
    }
  });
  mirror_upper(m);
  return m;
}

Eigen::MatrixXd toeplitz(const Eigen::VectorXd& r, std::size_t L) {
  const auto dim = static_cast<Eigen::Index>(L);
  Eigen::MatrixXd m(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (Eigen::Index r0 = 0; r0 < dim; ++r0) m(r0, c) = r(std::abs(c - r0));
  }
  return m;
}


} // namespace

Eigen::VectorXd pooled_time_correlation(const LocalCov& local, EstimatorMode mode) {
  const std::size_t p = local.num_variables();
  const std::size_t n = local.num_locations();
  const std::size_t K = local.max_lag();
  Eigen::VectorXd r(static_cast<Eigen::Index>(K + 1));
  r(0) = 1.0;
  double den_ls = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) den_ls += local(i, j, a, 0) * local(i, j, a, 0);
    }
  }
  if (mode == EstimatorMode::least_squares && den_ls == 0.0) {
    throw NumericalError("degenerate input: zero denominator in pooled rho3");
  }
  for (std::size_t u = 1; u <= K; ++u) {
    const int ui = static_cast<int>(u);
    double acc = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
          const double c0 = local(i, j, a, 0);
          if (mode == EstimatorMode::least_squares) {
            acc += local(i, j, a, ui) * c0;
          } else {
            if (c0 == 0.0) {
              throw NumericalError("degenerate input: zero denominator in pooled rho3 at (a=" +
                                   std::to_string(a + 1) + ", u=" + std::to_string(u) + ")");
            }
            acc += local(i, j, a, ui) / c0;
          }
        }
      }
    }
    r(static_cast<Eigen::Index>(u)) =
        mode == EstimatorMode::least_squares ? acc / den_ls : acc / static_cast<double>(n * p * p);
  }
  return r;
}

H0Covariance build_h0_cov(const EmpiricalCov& cov, const RhoEstimates& rhos, PropertyType property,
                          const H0Layout& layout, const LocalCov* local) {
  const std::size_t p = cov.num_variables();
  const std::size_t n = cov.num_locations();
  const std::size_t L = layout.block_length;
  if (L < 1) throw ValidationError("block length must be at least 1");
  if (layout.storage == H0Storage::kronecker && !is_kronecker(property)) {
    throw ValidationError(std::string("Kronecker storage requested for ") +
                          std::string(to_string(property)) + ", which has no Kronecker form");
  }
  if (rhos.num_variables() != p || rhos.num_locations() != n) {
    throw ValidationError("rho estimates do not match the covariance dimensions");
  }
  for (Rho needed : rhos_needed(property)) {
    if (!rhos.has(needed)) {
      throw ValidationError(std::string("H0 covariance for ") + std::string(to_string(property)) +
                            " needs rho" + std::to_string(static_cast<int>(needed) + 1));
    }
  }
  const std::size_t need = L - 1;

  auto finish = [&](KroneckerOrder order, Eigen::MatrixXd outer, Eigen::MatrixXd inner) {
    H0Covariance h = H0Covariance::kronecker(property, p, n, L, order, std::move(outer), std::move(inner));
    if (layout.storage == H0Storage::kronecker) return h;
    return H0Covariance::dense(property, p, n, L, h.assemble());
  };

  switch (property) {
  case PropertyType::VST: {
    require_lags(std::min(cov.max_lag(), rhos.max_lag()), need, "covariance estimate");
    Eigen::MatrixXd outer(p, p);
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = i; j < p; ++j) {
        double s = 0.0;
        for (std::size_t a = 0; a < n; ++a) s += cov(i, j, a, a, 0);
        outer(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = s / static_cast<double>(n);
      }
    }
    mirror_upper(outer);
    const auto inner_dim = static_cast<Eigen::Index>(n * L);
    Eigen::MatrixXd inner(inner_dim, inner_dim);
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t t2 = 0; t2 < L; ++t2) {
        const auto col = static_cast<Eigen::Index>(b * L + t2);
        for (Eigen::Index row = 0; row <= col; ++row) {
          const std::size_t a = static_cast<std::size_t>(row) / L;
          const std::size_t t1 = static_cast<std::size_t>(row) % L;
          inner(row, col) = rhos.rho1(a, b, static_cast<int>(t2) - static_cast<int>(t1));
        }
      }
    }
    mirror_upper(inner);
    return finish(KroneckerOrder::variables_x_spacetime, std::move(outer), std::move(inner));
  }
  case PropertyType::SVT: {
    LocalCov own = local ? *local : local_part(cov);
    require_lags(own.max_lag(), need, "local covariance estimate");
    const auto nn = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd outer(nn, nn);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        outer(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = rhos.rho2(a, b);
      }
    }
    // Pooled T_ij(u) = mean_a C^{aa}_ij(u), u = -(L-1)..L-1.
    const int Li = static_cast<int>(L);
    std::vector<double> pooled(p * p * (2 * L - 1));
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) {
        for (int u = -(Li - 1); u <= Li - 1; ++u) {
          double s = 0.0;
          for (std::size_t a = 0; a < n; ++a) s += own(i, j, a, u);
          pooled[(i * p + j) * (2 * L - 1) + static_cast<std::size_t>(u + Li - 1)] = s / static_cast<double>(n);
        }
      }
    }
    const auto inner_dim = static_cast<Eigen::Index>(p * L);
    Eigen::MatrixXd inner(inner_dim, inner_dim);
    for (Eigen::Index col = 0; col < inner_dim; ++col) {
      const std::size_t j = static_cast<std::size_t>(col) / L;
      const std::size_t t2 = static_cast<std::size_t>(col) % L;
      for (Eigen::Index row = 0; row <= col; ++row) {
        const std::size_t i = static_cast<std::size_t>(row) / L;
        const std::size_t t1 = static_cast<std::size_t>(row) % L;
        inner(row, col) = pooled[(i * p + j) * (2 * L - 1) + (t2 + L - 1 - t1)];
      }
    }
    mirror_upper(inner);
    return finish(KroneckerOrder::locations_x_vartime, std::move(outer), std::move(inner));
  }
  case PropertyType::TVS: {
    LocalCov own = local ? *local : local_part(cov);
    require_lags(own.max_lag(), need, "local covariance estimate");
    const auto outer_dim = static_cast<Eigen::Index>(p * n);
    Eigen::MatrixXd outer(outer_dim, outer_dim);
    for (Eigen::Index col = 0; col < outer_dim; ++col) {
      const std::size_t j = static_cast<std::size_t>(col) / n, b = static_cast<std::size_t>(col) % n;
      for (Eigen::Index row = 0; row <= col; ++row) {
        const std::size_t i = static_cast<std::size_t>(row) / n, a = static_cast<std::size_t>(row) % n;
        outer(row, col) = cov(i, j, a, b, 0);
      }
    }
    mirror_upper(outer);
    const Eigen::VectorXd r = pooled_time_correlation(own, rhos.mode());
    return finish(KroneckerOrder::varspace_x_time, std::move(outer), toeplitz(r, L));
  }
  default: break;
  }

  require_lags(cov.max_lag(), need, "covariance estimate");
  if (property == PropertyType::VS || property == PropertyType::VT) {
    require_lags(rhos.max_lag(), need, "rho estimate");
  }
  Eigen::MatrixXd m;
  switch (property) {
  case PropertyType::Vsym:
    m = assemble_pairwise(p, n, L, [&](std::size_t i, std::size_t j, std::size_t a, std::size_t b, int u) {
      return (cov(i, j, a, b, u) + cov(j, i, a, b, u)) / 2.0;
    });
    break;
  case PropertyType::Ssym:
    m = assemble_pairwise(p, n, L, [&](std::size_t i, std::size_t j, std::size_t a, std::size_t b, int u) {
      return (cov(i, j, a, b, u) + cov(i, j, b, a, u)) / 2.0;
    });
    break;
  case PropertyType::Tsym:
    m = assemble_pairwise(p, n, L, [&](std::size_t i, std::size_t j, std::size_t a, std::size_t b, int u) {
      return (cov(i, j, a, b, u) + cov(i, j, a, b, -u)) / 2.0;
    });
    break;
  case PropertyType::VS:
    m = assemble_pairwise(p, n, L, [&](std::size_t i, std::size_t j, std::size_t a, std::size_t b, int u) {
      return rhos.rho4(a, b, u) * (cov(i, j, a, a, u) + cov(i, j, b, b, u)) / 2.0;
    });
    break;
  case PropertyType::VT:
    m = assemble_pairwise(p, n, L, [&](std::size_t i, std::size_t j, std::size_t a, std::size_t b, int u) {
      return rhos.rho5(a, b, u) * cov(i, j, a, b, 0);
    });
    break;
  case PropertyType::ST:
    m = assemble_pairwise(p, n, L, [&](std::size_t i, std::size_t j, std::size_t a, std::size_t b, int u) {
      return rhos.rho6(i, j, a, b) * (cov(i, j, a, a, u) + cov(i, j, b, b, u)) / 2.0;
    });
    break;
  default: break;
  }
  return H0Covariance::dense(property, p, n, L, std::move(m));
}

} // namespace mstcov
