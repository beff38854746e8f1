#pragma once

#include "mstcov/dataset.hpp"
#include "mstcov/property.hpp"
#include "mstcov/rank_test.hpp"
#include "mstcov/rho.hpp"
#include "mstcov/test_functions.hpp"

#include <cstddef>
#include <cstdint>

namespace mstcov {

struct PropertyTestOptions {
  double alpha = 0.05;
  std::size_t max_lag = 10;         // U, lags of the test functions
  std::size_t bootstrap = 200;      // B
  std::size_t memory_limit = 3000;  // M
  std::uint64_t seed = 0;
  EstimatorMode estimator = EstimatorMode::least_squares;
  NullMode null_mode = NullMode::regenerate;
};

/// Test functions of `data` for one property (covariance and rho estimates
/// at lags 0..max_lag).
TestFunctionSet data_test_functions(const MvstDataset& data, PropertyType property,
                                    std::size_t max_lag, EstimatorMode mode);

/// Full test: covariance and rho estimates, test functions F, the null
/// covariance for one reference block (projected to positive definite), two
/// reference datasets of the same shape as `data` (dataset #1 gives F^{H0},
/// dataset #2 the reference F^R) and the rank test.
///
/// The block length is the largest the memory limit allows for the property,
/// capped at l - 1 because the block covariance needs lags up to b - 1 and
/// the estimator reaches l - 2. Deterministic for a fixed seed, independent
/// of the thread count.
TestResult run_property_test(const MvstDataset& data, PropertyType property,
                             const PropertyTestOptions& options);

/// Same, also returning the data test functions (for plotting).
TestResult run_property_test(const MvstDataset& data, PropertyType property,
                             const PropertyTestOptions& options, TestFunctionSet* data_functions);

} // namespace mstcov
