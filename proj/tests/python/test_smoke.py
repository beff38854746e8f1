import json
import math

import numpy as np
import pytest

import mstcov


def test_cross_cov_matches_direct_formula():
    values = np.array([[[1.0, 2.0, 3.0, 4.0]], [[2.0, 1.0, 4.0, 3.0]]])
    coords = np.zeros((1, 2))
    cov = mstcov.estimate_cross_cov(values, coords, 1)
    assert cov.shape == (2, 2, 1, 1, 3)
    assert cov[0, 1, 0, 0, 2] == pytest.approx(2.0 / 3.0, abs=1e-12)
    # C_ij(-u) = C_ji(u)
    assert cov[0, 1, 0, 0, 0] == cov[1, 0, 0, 0, 2]


def test_simulate_and_test_round_trip():
    values, coords = mstcov.simulate_model1(m=2, l=800, shift=1, lag=2, seed=3)
    assert values.shape == (2, 4, 800)
    assert coords.shape == (4, 2)
    res = mstcov.run_property_test(values, coords, "Tsym", max_lag=4, bootstrap=100,
                                   memory_limit=400, seed=5)
    again = mstcov.run_property_test(values, coords, "Tsym", max_lag=4, bootstrap=100,
                                     memory_limit=400, seed=5)
    assert res == again
    assert 0.0 < res["p_value"] <= 1.0
    assert res["reject"] == (res["p_value"] < res["alpha"])
    json.dumps(res)


def test_test_functions_counts():
    values, coords = mstcov.simulate_model2(m=2, l=300, beta1=0.5, beta2=0.5, seed=1)
    f = mstcov.test_functions(values, coords, "S|VT", max_lag=3)
    n, p = 4, 3
    assert f["values"].shape == (n * (n - 1) * p * p, 3)
    assert f["lags"] == [1, 2, 3]


def test_nearest_pd_two_by_two():
    out = mstcov.nearest_pd(np.array([[1.0, 2.0], [2.0, 1.0]]))
    d = 1e-8
    expect = np.array([[1.5 + d / 2, 1.5 - d / 2], [1.5 - d / 2, 1.5 + d / 2]])
    assert np.max(np.abs(out - expect)) < 1e-10


def test_depth_and_exact_null():
    curves = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
    depth = mstcov.modified_band_depth(curves)
    assert depth == pytest.approx([0.5, 5 / 6, 5 / 6, 0.5])
    w_min, probs = mstcov.exact_rank_sum_null(2, 2)
    assert w_min == 3
    assert probs == pytest.approx([1 / 6, 1 / 6, 2 / 6, 1 / 6, 1 / 6])


def test_detrend_removes_harmonics():
    t = np.arange(1, 241)
    series = 2.0 + 3.0 * np.cos(2 * math.pi * t / 24)
    resid, coef = mstcov.harmonic_detrend(series.reshape(1, 1, -1), np.zeros((1, 2)))
    assert np.max(np.abs(resid)) < 1e-10
    assert coef[0, 0, 0] == pytest.approx(2.0)
    assert coef[0, 0, 1] == pytest.approx(3.0)


def test_boxplot_svg_and_errors():
    curves = np.random.default_rng(0).normal(size=(20, 5)) + 4.0
    svg = mstcov.functional_boxplot_svg(curves, "S|VT", p_value=0.001)
    assert svg.startswith("<?xml") or svg.startswith("<svg")
    assert "#d03a2f" in svg
    with pytest.raises(ValueError):
        mstcov.run_property_test(np.zeros((1, 2, 5)), np.zeros((2, 2)), "Vsym")
    with pytest.raises(ValueError):
        mstcov.test_functions(np.zeros((1, 1, 50)), np.zeros((1, 2)), "nope")
