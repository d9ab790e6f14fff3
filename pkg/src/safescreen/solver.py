"""Cyclic coordinate descent with periodic dynamic screening.

At epochs 1, 1 + c, 1 + 2c, ... the solver maps the current estimate to a
dual point, stops if the duality gap meets the criterion, and otherwise
builds the configured safe region and drops the features it certifies as
zero.  Between events it runs plain cyclic coordinate descent over the
surviving features.
"""

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .duality import DualPoint, duality_gap, dual_map
from .regions import RegionRule, build_region
from .screening import ActiveSet, screen

log = logging.getLogger(__name__)


class NumericalError(FloatingPointError):
    """Non-finite values appeared during a solve."""


@dataclass
class SolverConfig:
    rule: RegionRule = RegionRule.DYNAMIC_SASVI
    max_epochs: int = 100_000
    screen_every: int = 10
    eps: float = 1e-6
    eps_mode: str = "relative"
    safety_margin: float = 0.0

    def __post_init__(self):
        self.rule = RegionRule.parse(self.rule)
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be at least 1")
        if self.screen_every < 1:
            raise ValueError("screen_every must be at least 1")
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if self.eps_mode not in ("relative", "absolute"):
            raise ValueError(f"eps_mode must be 'relative' or 'absolute', got {self.eps_mode!r}")
        if self.safety_margin < 0:
            raise ValueError("safety_margin must be nonnegative")

    def tolerance(self, p):
        if self.eps_mode == "absolute":
            return self.eps
        return self.eps * p.null_gap()

    def as_dict(self):
        return {
            "rule": self.rule.value,
            "max_epochs": self.max_epochs,
            "screen_every": self.screen_every,
            "eps": self.eps,
            "eps_mode": self.eps_mode,
            "safety_margin": self.safety_margin,
        }


@dataclass
class SolverState:
    beta: np.ndarray
    residual: np.ndarray
    active: ActiveSet
    epoch: int = 0
    events: list = field(default_factory=list)

    @classmethod
    def start(cls, p, beta0=None):
        d = p.n_features
        beta = np.zeros(d) if beta0 is None else np.array(beta0, dtype=np.float64)
        if beta.shape != (d,):
            raise ValueError(f"beta0 has shape {beta.shape}, expected ({d},)")
        residual = p.y_scaled - p.X.mat_vec(beta)
        return cls(beta, residual, ActiveSet.full(d))


@dataclass
class SolveReport:
    beta_hat: np.ndarray
    final_gap: float
    epochs_used: int
    events: list
    converged: bool
    wall_time: float
    lam: float = float("nan")
    tolerance: float = float("nan")
    active_final: int = 0
    coordinate_updates: int = 0

    @property
    def active_counts(self):
        return [e.active_after for e in self.events]

    def as_dict(self):
        return {
            "lambda": self.lam,
            "beta_hat": self.beta_hat.tolist(),
            "final_gap": self.final_gap,
            "tolerance": self.tolerance,
            "epochs_used": self.epochs_used,
            "coordinate_updates": self.coordinate_updates,
            "converged": self.converged,
            "wall_time": self.wall_time,
            "active_final": self.active_final,
            "events": [e.as_dict() for e in self.events],
        }


def cd_epoch(state, p):
    """One cyclic pass over the alive columns in ascending order (in place)."""
    X = p.X
    cols = state.active.indices
    if X.is_sparse:
        _kernels.sparse_sweep(X.indptr, X.indices, X.data, state.beta, state.residual, X.col_sq_norms, cols)
    else:
        _kernels.dense_sweep(X._dense, state.beta, state.residual, X.col_sq_norms, cols)
    state.epoch += 1
    return state


def _dual_point(p, state):
    """Dual point scaled over the alive columns; full scope while nothing is screened."""
    if state.active.count == 0:
        # no constraints left: the reduced dual optimum is y/lam itself
        return DualPoint(p.y_scaled.copy(), active=np.zeros(0, np.int64), beta=state.beta.copy(),
                         xb=np.zeros(p.n_samples), xt_xb=np.zeros(p.n_features),
                         xt_theta=np.array(p.xty_scaled))
    active = None if state.active.count == p.n_features else state.active.indices
    return dual_map(p, state.beta, active)


def solve(p, beta0=None, cfg=None, callback=None):
    """Solve the scaled Lasso ``p`` from ``beta0`` under ``cfg``.

    ``callback(state, theta, region)`` is invoked at each screening event
    before features are dropped (``region`` is ``None`` for rule none).
    """
    cfg = SolverConfig() if cfg is None else cfg
    t0 = time.perf_counter()
    tol = cfg.tolerance(p)
    p.xty_scaled  # warm the cache outside the event accounting
    state = SolverState.start(p, beta0)
    updates = 0
    gap = float("inf")
    checked_at = None

    for t in range(1, cfg.max_epochs + 1):
        if (t - 1) % cfg.screen_every == 0:
            theta = _dual_point(p, state)
            state.residual = p.y_scaled - theta.xb
            gap = duality_gap(p, state.beta, theta)
            checked_at = state.epoch
            if not np.isfinite(gap):
                raise NumericalError(f"duality gap is {gap} at epoch {state.epoch}")
            if gap <= tol:
                break
            region = None
            if cfg.rule is not RegionRule.NONE and state.active.count:
                region = build_region(cfg.rule, p, state.beta, theta)
            if callback is not None:
                callback(state, theta, region)
            if region is not None:
                state.active, event = screen(region, p.X, state.active, margin=cfg.safety_margin,
                                             epoch=state.epoch, gap=gap)
                _zero_eliminated(p, state, event)
                if event.warning:
                    log.warning("epoch %d: %s", state.epoch, event.warning)
                state.events.append(event)
                if state.active.count == 0:
                    theta = _dual_point(p, state)
                    state.residual = p.y_scaled - theta.xb
                    gap = duality_gap(p, state.beta, theta)
                    break
        updates += state.active.count
        cd_epoch(state, p)
        if not np.all(np.isfinite(state.beta)):
            raise NumericalError(f"non-finite coefficients after epoch {state.epoch}")

    if checked_at != state.epoch:
        theta = _dual_point(p, state)
        state.residual = p.y_scaled - theta.xb
        gap = duality_gap(p, state.beta, theta)

    return SolveReport(
        beta_hat=state.beta,
        final_gap=float(gap),
        epochs_used=state.epoch,
        events=state.events,
        converged=bool(gap <= tol),
        wall_time=time.perf_counter() - t0,
        lam=p.lam,
        tolerance=tol,
        active_final=state.active.count,
        coordinate_updates=updates,
    )


def _zero_eliminated(p, state, event):
    """Zero the coefficients an event eliminated and fix the residual to match."""
    for j in event.eliminated:
        if state.beta[j] != 0.0:
            p.X.axpy_col(j, state.beta[j], state.residual)
            state.beta[j] = 0.0

