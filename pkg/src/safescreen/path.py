"""Regularization path over a geometric lambda grid with rescaled warm starts."""

import time
from dataclasses import dataclass, field

import numpy as np

from .duality import LassoProblem, lambda_max
from .matrix import DesignMatrix
from .solver import SolverConfig, solve


@dataclass
class PathConfig:
    grid_count: int = 100
    grid_decades: float = 2.0
    solver: SolverConfig = field(default_factory=SolverConfig)

    def __post_init__(self):
        if self.grid_count < 1:
            raise ValueError("grid_count must be at least 1")
        if not self.grid_decades > 0:
            raise ValueError("grid_decades must be positive")

    def as_dict(self):
        return {"grid_count": self.grid_count, "grid_decades": self.grid_decades, "solver": self.solver.as_dict()}


@dataclass
class PathReport:
    lambdas: np.ndarray
    reports: list
    wall_time: float
    lam_max: float

    @property
    def total_epochs(self):
        return sum(r.epochs_used for r in self.reports)

    @property
    def total_updates(self):
        return sum(r.coordinate_updates for r in self.reports)

    @property
    def active_curve(self):
        """Features left alive at the end of each solve along the grid."""
        return [r.active_final for r in self.reports]

    def as_dict(self):
        return {
            "lambda_max": self.lam_max,
            "lambdas": self.lambdas.tolist(),
            "wall_time": self.wall_time,
            "total_epochs": self.total_epochs,
            "total_coordinate_updates": self.total_updates,
            "active_curve": self.active_curve,
            "solves": [r.as_dict() for r in self.reports],
        }


def lambda_grid(lam_max, count=100, decades=2.0):
    """``lam_max * 10**(-decades * j / (count - 1))`` for ``j = 0 .. count-1``."""
    if count == 1:
        return np.array([float(lam_max)])
    return lam_max * 10.0 ** (-decades * np.arange(count) / (count - 1))


def warm_start_scale(prev_beta, p_next, xb=None):
    """Best nonnegative multiple of ``prev_beta`` as a start for ``p_next``.

    Minimizes ``1/2 ||y/lam - k X b||^2 + k ||b||_1`` over ``k >= 0``, which
    gives ``k = max(0, (y/lam . X b - ||b||_1) / ||X b||^2)``.
    """
    prev_beta = np.asarray(prev_beta, dtype=np.float64)
    if not np.any(prev_beta):
        return np.zeros_like(prev_beta)
    if xb is None:
        xb = p_next.X.mat_vec(prev_beta)
    xb2 = float(xb @ xb)
    if xb2 == 0.0:
        return np.zeros_like(prev_beta)
    k = max(0.0, (float(p_next.y_scaled @ xb) - float(np.abs(prev_beta).sum())) / xb2)
    return k * prev_beta


def solve_path(X, y, cfg=None):
    cfg = PathConfig() if cfg is None else cfg
    if not isinstance(X, DesignMatrix):
        X = DesignMatrix.from_dense(X)
    y = np.asarray(y, dtype=np.float64)
    t0 = time.perf_counter()
    lam_max = lambda_max(X, y)
    if lam_max == 0.0:
        # y is orthogonal to every column: beta = 0 for any lambda
        p = LassoProblem(X, y, 1.0)
        reports = [solve(p, None, cfg.solver)]
        return PathReport(np.array([0.0]), reports, time.perf_counter() - t0, lam_max)
    lambdas = lambda_grid(lam_max, cfg.grid_count, cfg.grid_decades)
    reports = []
    beta = None
    for lam in lambdas:
        p = LassoProblem(X, y, lam)
        start = None if beta is None else warm_start_scale(beta, p)
        report = solve(p, start, cfg.solver)
        reports.append(report)
        beta = report.beta_hat
    return PathReport(lambdas, reports, time.perf_counter() - t0, lam_max)
