#pragma once

#include "mstcov/cross_cov.hpp"
#include "mstcov/nearest_pd.hpp"
#include "mstcov/property.hpp"
#include "mstcov/rho.hpp"

#include <Eigen/Core>

#include <cstddef>

namespace mstcov {

enum class H0Storage { dense, kronecker };

/// Joint index layout of one block: variable-major, then location, then time,
/// i.e. index (i * n + a) * block_length + t.
struct H0Layout {
  std::size_t block_length = 0;
  H0Storage storage = H0Storage::dense;
};

/// How the two Kronecker factors map onto the (i, a, t) layout.
///   variables_x_spacetime: V (p x p) outer, (a, t) inner             [V|ST]
///   locations_x_vartime:   locations (n x n) outer, (i, t) inner     [S|VT]
///                          (rows are permuted relative to (i, a, t))
///   varspace_x_time:       (i, a) (pn x pn) outer, t inner           [T|VS]
enum class KroneckerOrder { variables_x_spacetime, locations_x_vartime, varspace_x_time };

/// Covariance of one reference-data block under a null property.
class H0Covariance {
public:
  static H0Covariance dense(PropertyType property, std::size_t p, std::size_t n,
                            std::size_t block_length, Eigen::MatrixXd matrix);
  static H0Covariance kronecker(PropertyType property, std::size_t p, std::size_t n,
                                std::size_t block_length, KroneckerOrder order,
                                Eigen::MatrixXd outer, Eigen::MatrixXd inner);

  PropertyType property() const { return property_; }
  std::size_t num_variables() const { return p_; }
  std::size_t num_locations() const { return n_; }
  std::size_t block_length() const { return block_length_; }
  std::size_t dimension() const { return p_ * n_ * block_length_; }

  bool factored() const { return factored_; }
  KroneckerOrder order() const { return order_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; } // dense only
  const Eigen::MatrixXd& outer() const { return outer_; }   // factored only
  const Eigen::MatrixXd& inner() const { return inner_; }   // factored only

  /// Full matrix in the (i, a, t) layout, materializing the Kronecker form
  /// when factored.
  Eigen::MatrixXd assemble() const;

  /// Row of index (i, a, t) in the factored (outer, inner) ordering.
  std::size_t kronecker_index(std::size_t i, std::size_t a, std::size_t t) const;

  /// Applies nearest_pd to the dense matrix or to each factor (a Kronecker
  /// product of positive definite factors is positive definite).
  H0Covariance project_to_pd(std::size_t* clipped = nullptr) const;

private:
  PropertyType property_ = PropertyType::Vsym;
  std::size_t p_ = 0;
  std::size_t n_ = 0;
  std::size_t block_length_ = 0;
  bool factored_ = false;
  KroneckerOrder order_ = KroneckerOrder::variables_x_spacetime;
  Eigen::MatrixXd matrix_;
  Eigen::MatrixXd outer_;
  Eigen::MatrixXd inner_;
};

/// Builds the block covariance for the null property. Entry
/// ((i,a,t), (j,b,t')) is the null covariance C^{H0,ab}_{ij}(t' - t):
///   Vsym  (C^{ab}_{ij}(u) + C^{ab}_{ji}(u)) / 2
///   Ssym  (C^{ab}_{ij}(u) + C^{ba}_{ij}(u)) / 2
///   Tsym  (C^{ab}_{ij}(u) + C^{ab}_{ij}(-u)) / 2
///   V|S   rho4(a,b,u) (C^{aa}_{ij}(u) + C^{bb}_{ij}(u)) / 2
///   V|T   rho5(a,b,u) C^{ab}_{ij}(0)
///   S|T   rho6(i,j,a,b) (C^{aa}_{ij}(u) + C^{bb}_{ij}(u)) / 2
///   V|ST  V_{ij} rho1(a,b,u),        V_{ij} = mean_a C^{aa}_{ij}(0)
///   S|VT  rho2(a,b) T_{ij}(u),        T_{ij}(u) = mean_a C^{aa}_{ij}(u)
///   T|VS  C^{ab}_{ij}(0) r(u),        r = rho3 pooled over locations
/// The pooled V|ST, S|VT and T|VS factors make the matrix an exact
/// Kronecker product. Dense storage of a Kronecker property assembles it.
///
/// Requires cov.max_lag() >= block_length - 1 for every property except
/// S|VT and T|VS, which read their pooled time factors from `local`
/// (same-location covariances of the same data, local->max_lag() >=
/// block_length - 1) so that long lags are not estimated for every location
/// pair. Kronecker storage for a
/// non-Kronecker property throws ValidationError.
H0Covariance build_h0_cov(const EmpiricalCov& cov, const RhoEstimates& rhos,
                          PropertyType property, const H0Layout& layout,
                          const LocalCov* local = nullptr);

/// Pooled temporal correlation used by the T|VS row, lags 0..K:
/// least squares sum C^{aa}_{ij}(u) C^{aa}_{ij}(0) / sum C^{aa}_{ij}(0)^2
/// over a, i, j; mean-ratio averages C^{aa}_{ij}(u) / C^{aa}_{ij}(0).
Eigen::VectorXd pooled_time_correlation(const LocalCov& local, EstimatorMode mode);

} // namespace mstcov
