#include "mstcov/pipeline.hpp"

#include "mstcov/cross_cov.hpp"
#include "mstcov/error.hpp"
#include "mstcov/h0_cov.hpp"
#include "mstcov/reference.hpp"

#include <algorithm>
#include <optional>
#include <string>

namespace mstcov {

TestFunctionSet data_test_functions(const MvstDataset& data, PropertyType property,
                                    std::size_t max_lag, EstimatorMode mode) {
  const EmpiricalCov cov = estimate_cross_cov(data, max_lag);
  return build_test_functions(cov, property, max_lag, mode);
}

TestResult run_property_test(const MvstDataset& data, PropertyType property,
                             const PropertyTestOptions& options) {
  return run_property_test(data, property, options, nullptr);
}

TestResult run_property_test(const MvstDataset& data, PropertyType property,
                             const PropertyTestOptions& options, TestFunctionSet* data_functions) {
  const std::size_t p = data.num_variables();
  const std::size_t n = data.num_locations();
  const std::size_t l = data.num_times();
  const std::size_t U = options.max_lag;
  if (l < 3) throw ValidationError("property tests need at least 3 time points");
  if (U < 1 || U > l - 2) {
    throw ValidationError("max lag " + std::to_string(U) + " outside [1, " + std::to_string(l - 2) + "]");
  }
  const std::size_t block = std::min(max_block_length(property, p, n, l, options.memory_limit), l - 1);

  // SVT and TVS need long lags only at zero spatial lag.
  const bool local_time = property == PropertyType::SVT || property == PropertyType::TVS;
  const std::size_t cov_lag = local_time ? U : std::max(U, block - 1);
  const EmpiricalCov cov = estimate_cross_cov(data, cov_lag);
  std::optional<LocalCov> local;
  if (local_time) local = estimate_local_cov(data, std::max<std::size_t>(block - 1, 1));

  const auto needed = rhos_needed(property);
  const RhoEstimates rhos = estimate_rhos(cov, options.estimator, needed);
  TestFunctionSet F = build_test_functions(cov, needed.empty() ? nullptr : &rhos, property, U);

  const H0Layout layout{block, is_kronecker(property) ? H0Storage::kronecker : H0Storage::dense};
  std::size_t clipped = 0;
  const H0Covariance h0 =
      build_h0_cov(cov, rhos, property, layout, local ? &*local : nullptr).project_to_pd(&clipped);
  const GaussianBlockSampler sampler(h0);

  const auto reference = generate_reference(sampler, l, data.coords(), derive_seed(options.seed, {1}));
  const TestFunctionSet F_null = data_test_functions(reference[0], property, U, options.estimator);
  const TestFunctionSet F_ref = data_test_functions(reference[1], property, U, options.estimator);

  NullStatisticFn regenerate;
  std::optional<ReferenceRanker> ranker;
  std::vector<std::size_t> r_null;
  if (options.null_mode == NullMode::regenerate) {
    ranker.emplace(as_curves(F_ref), F_ref.labels);
    r_null = ranker->rank_all(as_curves(F_null), F_null.labels);
    regenerate = [&](std::size_t draw) {
      Rng rng = make_rng(options.seed, {2, draw});
      const MvstDataset fresh = sampler.sample(l, data.coords(), rng);
      const TestFunctionSet F_b = data_test_functions(fresh, property, U, options.estimator);
      return rank_sum_of_first(ranker->rank_all(as_curves(F_b), F_b.labels), r_null);
    };
  }

  TestResult result = rank_test(F, F_null, F_ref, options.alpha, options.bootstrap,
                                derive_seed(options.seed, {3}), regenerate);
  result.seed = options.seed;
  result.block_length = block;
  result.max_lag = U;
  result.estimator = options.estimator;
  result.clipped_eigenvalues = clipped;
  if (data_functions) *data_functions = std::move(F);
  return result;
}

} // namespace mstcov
