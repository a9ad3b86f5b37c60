import numpy as np
import pytest

from epuindex.errors import ConfigError, NumericalError
from epuindex.nowcast.enet import (
    EnetConfig,
    bic,
    enet_fit,
    enet_select,
    lambda_max,
    lambda_path,
    objective,
)
from epuindex.synthetic import support_problem


def orthonormal_design(seed, n=40, p=6):
    """Centered columns with X'X = n I."""
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, p))
    A -= A.mean(axis=0)
    q, _ = np.linalg.qr(A)
    return q * np.sqrt(n), rng


def soft(z, t):
    return np.sign(z) * np.maximum(np.abs(z) - t, 0.0)


@pytest.mark.parametrize("alpha", [1.0, 0.5, 0.1])
@pytest.mark.parametrize("lam", [0.01, 0.1, 0.5])
def test_orthonormal_closed_form(alpha, lam):
    X, rng = orthonormal_design(int(100 * lam + 10 * alpha))
    y = X @ rng.standard_normal(X.shape[1]) + 0.3 * rng.standard_normal(len(X)) + 2.0
    fit = enet_fit(X, y, alpha, lam)
    n = len(y)
    expected = soft(X.T @ (y - y.mean()) / n, lam * alpha) / (1 + lam * (1 - alpha))
    assert np.max(np.abs(fit.coef - expected)) <= 1e-6
    assert abs(fit.intercept - y.mean()) <= 1e-6  # X is centered


def test_lambda_zero_is_ols():
    rng = np.random.default_rng(3)
    X = rng.standard_normal((30, 8))
    y = X @ rng.standard_normal(8) + rng.standard_normal(30)
    fit = enet_fit(X, y, 1.0, 0.0, EnetConfig(tol=1e-12, max_iter=100_000))
    A = np.hstack([np.ones((30, 1)), X])
    ols, *_ = np.linalg.lstsq(A, y, rcond=None)
    assert np.max(np.abs(fit.coef - ols[1:])) <= 1e-6
    assert abs(fit.intercept - ols[0]) <= 1e-6


def test_above_lambda_max_all_zero():
    rng = np.random.default_rng(4)
    X = rng.standard_normal((50, 10))
    y = X[:, 0] + rng.standard_normal(50)
    for alpha in (0.1, 1.0):
        lmax = lambda_max(X, y, alpha)
        assert np.all(enet_fit(X, y, alpha, lmax).coef == 0)
        assert np.all(enet_fit(X, y, alpha, 2 * lmax).coef == 0)
        assert np.any(enet_fit(X, y, alpha, 0.9 * lmax).coef != 0)


def kkt_residual(X, y, fit):
    n = len(y)
    r = y - fit.intercept - X @ fit.coef
    grad = X.T @ r / n - fit.lam * (1 - fit.alpha) * fit.coef
    l1 = fit.lam * fit.alpha
    active = fit.coef != 0
    worst = 0.0
    if active.any():
        worst = np.max(np.abs(grad[active] - l1 * np.sign(fit.coef[active])))
    if (~active).any():
        worst = max(worst, np.max(np.abs(grad[~active])) - l1)
    return max(worst, abs(r.mean()))


def test_kkt_random_problems():
    for seed in range(100):
        rng = np.random.default_rng(seed)
        n, p = int(rng.integers(20, 80)), int(rng.integers(2, 60))
        X = rng.standard_normal((n, p))
        X = (X - X.mean(axis=0)) / X.std(axis=0)
        y = X[:, : min(3, p)].sum(axis=1) + rng.standard_normal(n)
        alpha = float(rng.choice([0.1, 0.5, 0.9, 1.0]))
        lam = lambda_max(X, y, alpha) * float(rng.uniform(0.01, 0.9))
        assert kkt_residual(X, y, enet_fit(X, y, alpha, lam)) <= 1e-6, seed


def test_objective_monotone_over_sweeps():
    rng = np.random.default_rng(7)
    X = rng.standard_normal((40, 25))
    y = X[:, :4].sum(axis=1) + rng.standard_normal(40)
    alpha, lam = 0.5, 0.05
    cfg = EnetConfig(max_iter=1)
    beta = np.zeros(25)
    prev = objective(X, y, y.mean(), beta, alpha, lam)
    xm = X.mean(axis=0)
    for _ in range(200):
        try:
            fit = enet_fit(X, y, alpha, lam, cfg, beta0=beta)
            beta, done = fit.coef, True
        except NumericalError as exc:
            beta, done = exc.last_iterate, False
        cur = objective(X, y, y.mean() - xm @ beta, beta, alpha, lam)
        assert cur <= prev + 1e-12
        prev = cur
        if done:
            break
    else:
        pytest.fail("no convergence in 200 single-sweep steps")


def test_non_convergence_carries_iterate():
    rng = np.random.default_rng(8)
    X = rng.standard_normal((30, 10))
    y = X @ rng.standard_normal(10)
    with pytest.raises(NumericalError, match="did not converge") as info:
        enet_fit(X, y, 0.5, 1e-3, EnetConfig(max_iter=2))
    assert info.value.last_iterate.shape == (10,)
    assert np.any(info.value.last_iterate != 0)


def test_zero_target_selects_intercept_only():
    X = np.random.default_rng(9).standard_normal((30, 5))
    sel = enet_select(X, np.zeros(30))
    assert sel.fit.df == 0 and sel.fit.intercept == 0.0
    sel = enet_select(X, np.full(30, 2.5))
    assert sel.fit.df == 0 and sel.fit.intercept == 2.5


def test_singleton_grid():
    X, y = support_problem(1)
    cfg = EnetConfig(alpha_grid=(0.7,), n_lambda=1)
    sel = enet_select(X, y, cfg)
    assert sel.alpha == 0.7
    assert sel.lam == pytest.approx(lambda_max(X, y, 0.7), rel=1e-12)
    assert sel.fit.df == 0


def test_selection_matches_exhaustive_bic():
    X, y = support_problem(2, n=60, p=10, support=(3, 7))
    cfg = EnetConfig(alpha_grid=(0.5, 1.0), n_lambda=20, dev_ratio_stop=1.0, max_df_ratio=1.0)
    n = len(y)
    best = None
    for alpha in cfg.alpha_grid:
        for lam in lambda_path(lambda_max(X, y, alpha), cfg):
            fit = enet_fit(X, y, alpha, lam, EnetConfig(tol=1e-12, max_iter=100_000))
            r = y - fit.predict(X)
            key = (bic(float(r @ r), fit.df, n), -lam, -alpha)
            best = key if best is None or key < best else best
    sel = enet_select(X, y, cfg)
    assert (-sel.lam, -sel.alpha) == best[1:]


def test_support_recovery():
    hits = 0
    for seed in range(100):
        X, y = support_problem(seed)
        support = set(np.flatnonzero(enet_select(X, y).fit.coef))
        hits += {3, 17} <= support
    assert hits >= 95


def test_p_greater_than_n():
    X, y = support_problem(0, n=60, p=137, support=(3, 10))
    sel = enet_select(X, y)
    assert set(np.flatnonzero(sel.fit.coef)) >= {3, 10}
    assert sel.fit.df <= 30


def test_config_validation():
    for kw in ({"alpha_grid": ()}, {"alpha_grid": (0.0,)}, {"tol": 0}, {"n_lambda": 0},
               {"max_iter": 0}, {"lambda_min_ratio": 2.0}):
        with pytest.raises(ConfigError):
            EnetConfig(**kw)


def test_bic():
    assert bic(0.0, 3, 10) == -np.inf
    assert bic(10.0, 0, 10) == 0.0
    assert bic(10.0, 2, 10) == pytest.approx(2 * np.log(10))


def test_deterministic():
    X, y = support_problem(5, p=80)
    a, b = enet_select(X, y), enet_select(X, y)
    assert np.array_equal(a.fit.coef, b.fit.coef) and a.lam == b.lam and a.alpha == b.alpha
