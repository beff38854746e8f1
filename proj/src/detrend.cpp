#include "mstcov/detrend.hpp"

#include "mstcov/error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <string>

namespace mstcov {

DetrendResult harmonic_detrend(const MvstDataset& data, std::span<const double> periods) {
  const std::size_t p = data.num_variables();
  const std::size_t n = data.num_locations();
  const std::size_t l = data.num_times();
  const std::size_t terms = 1 + 2 * periods.size();
  if (l <= terms) {
    throw ValidationError("harmonic regression needs more than " + std::to_string(terms) +
                          " time points");
  }
  for (double period : periods) {
    if (!(period > 0.0) || !std::isfinite(period)) {
      throw ValidationError("harmonic periods must be positive");
    }
  }

  Eigen::MatrixXd design(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(terms));
  for (std::size_t t = 0; t < l; ++t) {
    const auto row = static_cast<Eigen::Index>(t);
    design(row, 0) = 1.0;
    for (std::size_t k = 0; k < periods.size(); ++k) {
      const double phase = 2.0 * std::numbers::pi * data.time_at(t) / periods[k];
      design(row, static_cast<Eigen::Index>(1 + 2 * k)) = std::cos(phase);
      design(row, static_cast<Eigen::Index>(2 + 2 * k)) = std::sin(phase);
    }
  }

  // One design for every series: factor once, solve for all right-hand sides.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < static_cast<Eigen::Index>(terms)) {
    throw NumericalError("harmonic design matrix is rank deficient (rank " +
                         std::to_string(qr.rank()) + " < " + std::to_string(terms) +
                         ") for series variable '" + data.variable_name(0) +
                         "' at location 0; check the periods against the time axis");
  }

  const Eigen::Map<const Eigen::MatrixXd> series(data.values().data(),
                                                 static_cast<Eigen::Index>(l),
                                                 static_cast<Eigen::Index>(p * n));
  const Eigen::MatrixXd beta = qr.solve(series);
  const Eigen::MatrixXd resid = series - design * beta;

  HarmonicFit fit;
  fit.periods.assign(periods.begin(), periods.end());
  fit.num_variables = p;
  fit.num_locations = n;
  fit.coefficients.resize(p * n * terms);
  for (std::size_t s = 0; s < p * n; ++s) {
    for (std::size_t k = 0; k < terms; ++k) {
      fit.coefficients[s * terms + k] =
          beta(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(s));
    }
  }

  std::vector<double> values(resid.data(), resid.data() + resid.size());
  return {MvstDataset(p, data.coords(), l, std::move(values), data.meta()), std::move(fit)};
}

} // namespace mstcov
