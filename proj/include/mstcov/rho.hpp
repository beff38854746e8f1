#pragma once

#include "mstcov/cross_cov.hpp"
#include "mstcov/property.hpp"

#include <cstddef>
#include <string_view>
#include <vector>

namespace mstcov {

enum class EstimatorMode { least_squares, mean_ratio };

std::string_view to_string(EstimatorMode mode);
/// Accepts "least-squares"/"least_squares"/"ls" and "mean-ratio"/"mean_ratio"/"mr".
EstimatorMode parse_estimator_mode(std::string_view text);

/// Identifies one of the six rho-function estimates.
enum class Rho { rho1 = 0, rho2, rho3, rho4, rho5, rho6 };

/// Estimated rho-functions for the separability properties.
///
/// With S^x_{ij} = C^{a,a}_{ij}(x) + C^{b,b}_{ij}(x), the least-squares forms are
///   rho1(a,b,u) = 2 sum C^{ab}_{ij}(u) S^0_{ij} / sum (S^0_{ij})^2
///   rho2(a,b)   = 2 sum C^{ab}_{ij}(0) S^0_{ij} / sum (S^0_{ij})^2
///   rho3(a,b,u) =   sum S^u_{ij} S^0_{ij}       / sum (S^0_{ij})^2
///   rho4(a,b,u) = 2 sum C^{ab}_{ij}(u) S^u_{ij} / sum (S^u_{ij})^2
///   rho5(a,b,u) =   sum C^{ab}_{ij}(u) C^{ab}_{ij}(0) / sum C^{ab}_{ij}(0)^2
///   rho6(i,j,a,b) = 2 C^{ab}_{ij}(0) / S^0_{ij}
/// (sums over i, j = 1..p). Mean-ratio mode replaces each regression ratio
/// by the average over (i, j) of the per-pair ratios, e.g.
/// rho1 = mean_{ij} 2 C^{ab}_{ij}(u) / S^0_{ij}; rho6 is already a single
/// ratio and is the same in both modes.
///
/// Only non-negative lags are computed; negative lags are filled through
/// rho(a,b,-u) = rho(b,a,u), which follows from the estimator identity.
/// Entries that equal 1 by construction (rho1(a,a,0), rho2(a,a),
/// rho3(a,b,0), rho4(a,a,u), rho5(a,b,0), rho6(i,j,a,a)) are stored as exactly 1.
class RhoEstimates {
public:
  std::size_t num_variables() const { return p_; }
  std::size_t num_locations() const { return n_; }
  std::size_t max_lag() const { return max_lag_; }
  EstimatorMode mode() const { return mode_; }

  bool has(Rho which) const { return present_[static_cast<std::size_t>(which)]; }

  double rho1(std::size_t a, std::size_t b, int u) const { return lagged(rho1_, a, b, u); }
  double rho2(std::size_t a, std::size_t b) const { return rho2_[a * n_ + b]; }
  double rho3(std::size_t a, std::size_t b, int u) const { return lagged(rho3_, a, b, u); }
  double rho4(std::size_t a, std::size_t b, int u) const { return lagged(rho4_, a, b, u); }
  double rho5(std::size_t a, std::size_t b, int u) const { return lagged(rho5_, a, b, u); }
  double rho6(std::size_t i, std::size_t j, std::size_t a, std::size_t b) const {
    return rho6_[((i * p_ + j) * n_ + a) * n_ + b];
  }

private:
  friend RhoEstimates estimate_rhos(const EmpiricalCov&, EstimatorMode, const std::vector<Rho>&);

  double lagged(const std::vector<double>& v, std::size_t a, std::size_t b, int u) const {
    return v[(a * n_ + b) * (2 * max_lag_ + 1) + static_cast<std::size_t>(u + static_cast<int>(max_lag_))];
  }

  std::size_t p_ = 0;
  std::size_t n_ = 0;
  std::size_t max_lag_ = 0;
  EstimatorMode mode_ = EstimatorMode::least_squares;
  bool present_[6] = {false, false, false, false, false, false};
  std::vector<double> rho1_, rho2_, rho3_, rho4_, rho5_, rho6_;
};

/// Estimates the requested rho-functions (all six when `which` is empty) at
/// lags 0..cov.max_lag(). Any zero denominator throws NumericalError naming
/// the estimate and (a, b, u).
RhoEstimates estimate_rhos(const EmpiricalCov& cov, EstimatorMode mode,
                           const std::vector<Rho>& which = {});

/// The rho-functions a property's test functions and null covariance use
/// (empty for the symmetry properties).
std::vector<Rho> rhos_needed(PropertyType property);

} // namespace mstcov
