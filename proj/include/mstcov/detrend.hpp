#pragma once

#include "mstcov/dataset.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace mstcov {

inline constexpr double kDefaultPeriods[] = {24.0, 12.0};

/// Per-series OLS coefficients of the harmonic design
/// [1, cos(2 pi t / P_1), sin(2 pi t / P_1), cos(2 pi t / P_2), ...].
struct HarmonicFit {
  std::vector<double> periods;
  std::size_t num_variables = 0;
  std::size_t num_locations = 0;
  std::vector<double> coefficients; // row (i * n + a), 1 + 2 * periods.size() columns

  std::size_t num_terms() const { return 1 + 2 * periods.size(); }
  double coefficient(std::size_t i, std::size_t a, std::size_t k) const {
    return coefficients[(i * num_locations + a) * num_terms() + k];
  }
};

struct DetrendResult {
  MvstDataset residuals;
  HarmonicFit fit;
};

/// Removes an intercept and sinusoids at the given periods from every
/// (variable, location) series by least squares, using the dataset's time
/// stamps as t. Requires l > 2 * periods.size() + 1 and positive periods
/// (ValidationError); a rank-deficient design throws NumericalError naming
/// the first affected series.
DetrendResult harmonic_detrend(const MvstDataset& data,
                               std::span<const double> periods = kDefaultPeriods);

} // namespace mstcov
