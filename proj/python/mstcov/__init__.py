"""Rank-based tests of symmetry and separability for multivariate space-time covariances."""

import os

# The Cooper Lake dgemm kernel in some OpenBLAS builds returns wrong results;
# Haswell kernels run everywhere AVX2 is available.
os.environ.setdefault("OPENBLAS_CORETYPE", "Haswell")

from ._mstcov import (  # noqa: E402
    NumericalError,
    ValidationError,
    estimate_cross_cov,
    exact_rank_sum_null,
    functional_boxplot_svg,
    harmonic_detrend,
    model2_covariance,
    modified_band_depth,
    nearest_pd,
    run_property_test,
    set_thread_count,
    simulate_model1,
    simulate_model2,
    test_functions,
)

__all__ = [
    "NumericalError",
    "ValidationError",
    "estimate_cross_cov",
    "exact_rank_sum_null",
    "functional_boxplot_svg",
    "harmonic_detrend",
    "model2_covariance",
    "modified_band_depth",
    "nearest_pd",
    "run_property_test",
    "set_thread_count",
    "simulate_model1",
    "simulate_model2",
    "test_functions",
]
