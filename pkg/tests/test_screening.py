import numpy as np
import pytest

from safescreen import (
    ActiveSet,
    DesignMatrix,
    Dome,
    LassoProblem,
    Sphere,
    SolverConfig,
    dual_map,
    dynamic_sasvi,
    gap_safe_dome,
    gap_safe_sphere,
    lambda_max,
    screen,
    solve,
)
from safescreen.regions import RegionRule
from safescreen.screening import eliminated_by

from conftest import exact_solve, random_instance
from oracles import sample_dome, to_float
from test_regions import BETA1


def test_zero_radius_sphere_gives_true_pattern(rng):
    X, y = random_instance(rng, 15, 40)
    p = LassoProblem(X, y, lambda_max(X, y) / 10)
    ref = exact_solve(p)
    corr = np.abs(X.mat_t_vec(ref.theta_hat))
    active, ev = screen(Sphere(ref.theta_hat, 0.0), X, ActiveSet.full(X.n_cols))
    assert set(ev.eliminated.tolist()) == set(np.flatnonzero(corr < 1).tolist())
    # support columns sit on |x_j^T theta| = 1, so only rounding ties can slip below
    hit = ev.eliminated[ref.beta_hat[ev.eliminated] != 0]
    assert np.all(corr[hit] > 1 - 1e-12)
    assert set(np.flatnonzero(corr < 1 - 1e-9)) <= set(ev.eliminated.tolist())
    assert ev.active_before == X.n_cols and ev.active_after == active.count


def test_huge_sphere_eliminates_nothing(rng):
    X, _ = random_instance(rng)
    active, ev = screen(Sphere(np.zeros(X.n_rows), 1e6), X, ActiveSet.full(X.n_cols))
    assert active.count == X.n_cols and ev.eliminated.size == 0


def test_fixture_dome_matches_sampling(fig1):
    beta = to_float(BETA1)
    d = dynamic_sasvi(fig1, beta, dual_map(fig1, beta))
    pts = sample_dome(np.random.default_rng(5), d.center, d.radius, d.normal, d.cap, 200_000)
    A = fig1.X.to_dense()
    sampled = np.abs(pts @ A).max(axis=0)
    _, ev = screen(d, fig1.X, ActiveSet.full(2))
    # sampling approaches the sup from below; a clear margin from 1 decides it
    for j in range(2):
        if sampled[j] >= 1:
            assert j not in ev.eliminated
    assert set(ev.eliminated.tolist()) == {j for j in range(2) if sampled[j] < 1 - 1e-3}


def test_margin_is_conservative(rng):
    X, y = random_instance(rng, 15, 40)
    p = LassoProblem(X, y, lambda_max(X, y) / 5)
    beta = exact_solve(p).beta_hat * 0.9
    region = gap_safe_sphere(p, beta, dual_map(p, beta))
    full = ActiveSet.full(X.n_cols)
    assert eliminated_by(region, X, full, margin=0.1) <= eliminated_by(region, X, full)
    with pytest.raises(ValueError):
        screen(region, X, full, margin=-1.0)


def test_only_alive_columns_are_tested(rng):
    X, y = random_instance(rng, 10, 30)
    alive = rng.random(X.n_cols) < 0.5
    active, ev = screen(Sphere(np.zeros(X.n_rows), 0.0), X, ActiveSet(alive))
    assert set(ev.eliminated.tolist()) == set(np.flatnonzero(alive).tolist())
    assert active.count == 0


def test_zero_columns_always_eliminated(rng):
    A = rng.standard_normal((6, 5))
    A[:, [1, 3]] = 0.0
    X = DesignMatrix.from_scipy(A)
    y = rng.standard_normal(6)
    p = LassoProblem(X, y, lambda_max(X, y) / 50)
    for build in (gap_safe_sphere, gap_safe_dome, dynamic_sasvi):
        _, ev = screen(build(p, np.zeros(5), dual_map(p, np.zeros(5))), X, ActiveSet.full(5))
        assert {1, 3} <= set(ev.eliminated.tolist())


def test_empty_dome_falls_back_to_ball():
    X = DesignMatrix.from_dense(np.eye(2) * 0.1)
    d = Dome(Sphere(np.zeros(2), 1.0), np.array([1.0, 0.0]), -5.0, RegionRule.DYNAMIC_SASVI)
    active, ev = screen(d, X, ActiveSet.full(2))
    assert ev.warning and "numerical" in ev.warning
    assert active.count == 0  # the ball alone already certifies both


def test_active_set_is_read_only():
    a = ActiveSet.full(3)
    with pytest.raises(ValueError):
        a.alive[0] = False


@pytest.mark.parametrize("rule", ["gap-sphere", "gap-dome", "dynamic-sasvi", "dynamic-edpp"])
def test_mask_monotone_and_zero_stays_zero(rule, rng):
    for k in range(6):
        X, y = random_instance(rng, sparse=k % 2 == 1)
        p = LassoProblem(X, y, lambda_max(X, y) / 20)
        masks, betas = [], []

        def grab(state, theta, region):
            masks.append(state.active.alive.copy())
            betas.append(state.beta.copy())

        rep = solve(p, None, SolverConfig(rule=rule, eps=1e-10, screen_every=2), callback=grab)
        for a, b in zip(masks, masks[1:]):
            assert not np.any(b & ~a)
        for m, beta in zip(masks[1:], betas[1:]):
            assert not np.any(beta[~m])
        dead = np.ones(X.n_cols, bool)
        for ev in rep.events:
            dead[ev.eliminated] = False
        assert not np.any(rep.beta_hat[~dead])
        assert all(e.active_after <= e.active_before for e in rep.events)
