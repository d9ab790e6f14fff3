import numpy as np
import pytest

from safescreen import (
    DesignMatrix,
    LassoProblem,
    PathConfig,
    SolverConfig,
    lambda_grid,
    lambda_max,
    solve,
    solve_path,
    warm_start_scale,
)

from conftest import exact_solve, random_instance


def scalar_objective(p, b, k):
    r = p.y_scaled - k * p.X.mat_vec(b)
    return 0.5 * r @ r + k * np.abs(b).sum()


def brute_k(p, b):
    """Minimize the scalar objective over k >= 0 by bisection on its slope.

    The objective is a convex quadratic in k, so a central difference gives
    the slope up to rounding whatever the step.
    """
    slope = lambda k: scalar_objective(p, b, k + 0.5) - scalar_objective(p, b, k - 0.5)
    if slope(0.0) >= 0:
        return 0.0
    lo, hi = 0.0, 1.0
    while slope(hi) < 0:
        lo, hi = hi, 2 * hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if slope(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_grid_endpoints_and_ratio():
    g = lambda_grid(3.0)
    assert len(g) == 100
    assert g[0] == 3.0
    assert g[-1] == pytest.approx(0.03, rel=1e-14)
    ratios = g[1:] / g[:-1]
    np.testing.assert_allclose(ratios, 100 ** (-1 / 99), rtol=1e-12)
    assert np.all(np.diff(g) < 0)
    assert lambda_grid(2.0, count=1).tolist() == [2.0]


def test_config_validation():
    with pytest.raises(ValueError):
        PathConfig(grid_count=0)
    with pytest.raises(ValueError):
        PathConfig(grid_decades=0.0)


def test_warm_start_zero(rng):
    X, y = random_instance(rng)
    p = LassoProblem(X, y, 1.0)
    assert not warm_start_scale(np.zeros(X.n_cols), p).any()


def test_warm_start_identity_at_same_lambda(rng):
    X, y = random_instance(rng, 15, 30)
    p = LassoProblem(X, y, lambda_max(X, y) / 10)
    b = exact_solve(p).beta_hat
    k_brute = brute_k(p, b)
    assert k_brute == pytest.approx(1.0, abs=1e-8)
    got = warm_start_scale(b, p)
    np.testing.assert_allclose(got, b, rtol=1e-8)


def test_warm_start_matches_scalar_minimizer(rng):
    for k in range(30):
        X, y = random_instance(rng, sparse=k % 2 == 1)
        lm = lambda_max(X, y)
        b = rng.standard_normal(X.n_cols) * (rng.random(X.n_cols) < 0.3) * 0.1
        if not b.any():
            continue
        p = LassoProblem(X, y, lm / rng.uniform(1.5, 50))
        got = warm_start_scale(b, p)
        i = int(np.flatnonzero(b)[0])
        k_got = got[i] / b[i]
        assert k_got == pytest.approx(brute_k(p, b), abs=1e-8 * max(1.0, k_got))
        f = scalar_objective(p, b, k_got)
        assert f <= scalar_objective(p, b, 1.0) + 1e-12 * max(1.0, abs(f))
        assert f <= scalar_objective(p, b, 0.0) + 1e-12 * max(1.0, abs(f))


def test_warm_start_clamps_at_zero():
    # X b points against y: the best nonnegative multiple is 0
    p = LassoProblem(np.eye(2), np.array([1.0, 0.0]), 1.0)
    assert not warm_start_scale(np.array([-1.0, 0.0]), p).any()


def test_single_point_path(rng):
    X, y = random_instance(rng)
    rep = solve_path(X, y, PathConfig(grid_count=1))
    assert len(rep.reports) == 1
    assert rep.lambdas[0] == lambda_max(X, y)
    assert not rep.reports[0].beta_hat.any()


def test_orthogonal_response():
    X = DesignMatrix.from_dense(np.array([[1.0], [0.0]]))
    rep = solve_path(X, np.array([0.0, 2.0]))
    assert len(rep.reports) == 1 and not rep.reports[0].beta_hat.any()


def test_path_matches_cold_solves(rng):
    X, y = random_instance(rng, 20, 50)
    cfg = PathConfig(grid_count=12, solver=SolverConfig(rule="dynamic-sasvi", eps=1e-10))
    rep = solve_path(X, y, cfg)
    assert len(rep.reports) == 12 and all(r.converged for r in rep.reports)
    for lam, r in zip(rep.lambdas[::4], rep.reports[::4]):
        cold = solve(LassoProblem(X, y, lam), None, SolverConfig(rule="none", eps=1e-12, eps_mode="absolute"))
        assert np.abs(cold.beta_hat - r.beta_hat).max() <= 1e-4
    assert rep.total_epochs == sum(r.epochs_used for r in rep.reports)
    d = rep.as_dict()
    assert len(d["solves"]) == 12 and d["active_curve"] == rep.active_curve


def test_fresh_active_set_per_lambda(rng):
    X, y = random_instance(rng, 20, 50)
    rep = solve_path(X, y, PathConfig(grid_count=6, solver=SolverConfig(rule="gap-sphere")))
    for r in rep.reports:
        if r.events:
            assert r.events[0].active_before == X.n_cols
