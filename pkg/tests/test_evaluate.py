import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epuindex.errors import NumericalError
from epuindex.nowcast.evaluate import bartlett_lrv, dm_bandwidth, dm_test, metrics

# fixed 20-point error vectors
E_A = [0.12, -0.35, 0.08, 0.41, -0.22, 0.05, -0.18, 0.30, -0.02, 0.15,
       -0.27, 0.09, 0.33, -0.11, 0.04, -0.40, 0.21, -0.06, 0.17, -0.13]
E_B = [0.25, -0.41, 0.30, 0.38, -0.45, 0.12, -0.29, 0.52, 0.10, 0.28,
       -0.33, 0.22, 0.47, -0.19, 0.16, -0.38, 0.36, -0.21, 0.26, -0.31]


def dm_formula(ea, eb, loss):
    """Direct scalar evaluation of the DM statistic and one-sided p-value."""
    L = (lambda e: e * e) if loss == "squared" else abs
    d = [L(b) - L(a) for a, b in zip(ea, eb)]
    n = len(d)
    mean = sum(d) / n
    h = math.floor(1.5 * n ** (1 / 3))
    gam = [sum((d[t] - mean) * (d[t - k] - mean) for t in range(k, n)) / n for k in range(h + 1)]
    lrv = gam[0] + 2 * sum((1 - k / (h + 1)) * gam[k] for k in range(1, h + 1))
    stat = mean / math.sqrt(lrv / n)
    p = 0.5 * (1 - math.erf(stat / math.sqrt(2)))
    return stat, p


def test_metrics_examples():
    assert metrics([0, 0, 0]) == (0.0, 0.0)
    r, m = metrics([3, -4])
    assert r == pytest.approx(3.5355339059327378, abs=1e-15) and m == 3.5
    with pytest.raises(ValueError):
        metrics([])


@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=50))
def test_rmsfe_at_least_mafe(e):
    r, m = metrics(e)
    assert r >= m * (1 - 1e-12)


def test_bandwidth():
    assert dm_bandwidth(20) == 4
    assert dm_bandwidth(366) == 10


@pytest.mark.parametrize("loss", ["squared", "absolute"])
def test_fixture_matches_formula(loss):
    stat, p = dm_test(E_A, E_B, loss)
    want_stat, want_p = dm_formula(E_A, E_B, loss)
    assert abs(stat - want_stat) <= 1e-9
    assert abs(p - want_p) <= 1e-9


def test_lrv_matches_statsmodels():
    hac = pytest.importorskip("statsmodels.stats.sandwich_covariance")
    d = np.array(E_B) ** 2 - np.array(E_A) ** 2
    dc = d - d.mean()
    h = dm_bandwidth(len(d))
    ref = float(hac.S_hac_simple(dc, nlags=h)[0, 0]) / len(d)
    assert bartlett_lrv(d, h) == pytest.approx(ref, rel=1e-12)


def test_identical_forecasts():
    assert dm_test(E_A, E_A) == (0.0, 0.5)
    assert dm_test(E_A, [-e for e in E_A]) == (0.0, 0.5)
    assert dm_test(E_A, E_A, "absolute") == (0.0, 0.5)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.floats(-10, 10), st.floats(-10, 10)), min_size=10, max_size=60),
       st.sampled_from(["squared", "absolute"]))
def test_antisymmetry(pairs, loss):
    a = [x for x, _ in pairs]
    b = [y for _, y in pairs]
    try:
        s_ab, p_ab = dm_test(a, b, loss)
    except NumericalError:
        with pytest.raises(NumericalError):
            dm_test(b, a, loss)
        return
    s_ba, p_ba = dm_test(b, a, loss)
    assert s_ba == -s_ab
    # the p-value of the nonnegative statistic is the exact reference
    (p_pos, p_neg) = (p_ab, p_ba) if s_ab >= 0 else (p_ba, p_ab)
    assert p_neg == 1 - p_pos
    assert abs(p_ab + p_ba - 1) <= 2**-52


def test_zero_lrv_with_nonzero_mean():
    a = [0.0] * 12
    b = [1.0] * 12
    with pytest.raises(NumericalError, match="zero long-run variance"):
        dm_test(a, b)


def test_input_checks():
    with pytest.raises(ValueError, match="at least 10"):
        dm_test([1.0] * 9, [2.0] * 9)
    with pytest.raises(ValueError):
        dm_test([1.0] * 10, [2.0] * 11)
    with pytest.raises(ValueError, match="loss"):
        dm_test(E_A, E_B, "huber")


def test_better_forecast_small_p():
    rng = np.random.default_rng(0)
    a = 0.5 * rng.standard_normal(200)
    b = 2.0 * rng.standard_normal(200)
    stat, p = dm_test(a, b)
    assert stat > 0 and p < 0.01
