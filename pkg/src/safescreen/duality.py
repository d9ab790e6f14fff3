"""Primal/dual objectives and dual-feasible points for the scaled Lasso.

Everything here works on the rescaled problem

    minimize_beta  1/2 ||y/lam - X beta||^2 + ||beta||_1

whose dual is  max_theta  -1/2 ||theta||^2 + (y/lam)^T theta  subject to
||X^T theta||_inf <= 1.  Raw ``y`` is only touched once, in ``LassoProblem``.
"""

from dataclasses import dataclass, field

import numpy as np

from .matrix import DesignMatrix


class LassoProblem:
    """``(X, y, lam)`` with the scaled response ``y / lam`` cached.

    ``xty_scaled`` (``X^T y/lam``) is computed on first use and reused by
    every screening event.
    """

    def __init__(self, X, y, lam):
        if not isinstance(X, DesignMatrix):
            X = DesignMatrix.from_dense(X)
        y = np.asarray(y, dtype=np.float64)
        if y.shape != (X.n_rows,):
            raise ValueError(f"response has shape {y.shape}, expected ({X.n_rows},)")
        lam = float(lam)
        if not lam > 0 or not np.isfinite(lam):
            raise ValueError(f"regularization must be positive and finite, got {lam}")
        self.X = X
        self.y = y
        self.lam = lam
        self.y_scaled = y / lam
        self._xty = None

    @property
    def xty_scaled(self):
        if self._xty is None:
            self._xty = self.X.mat_t_vec(self.y_scaled)
        return self._xty

    @property
    def n_samples(self):
        return self.X.n_rows

    @property
    def n_features(self):
        return self.X.n_cols

    def null_gap(self):
        """``P(0) - D(0)``, the scale used by the relative stopping rule."""
        return 0.5 * float(self.y_scaled @ self.y_scaled)

    def __repr__(self):
        return f"LassoProblem({self.X!r}, lam={self.lam:g})"


@dataclass(eq=False)
class DualPoint:
    """A dual vector and the constraints it was scaled to satisfy.

    ``active`` is ``None`` for full scope (every ``|x_j^T theta| <= 1``) or an
    index array when only those columns were enforced.  The remaining fields
    cache products of the estimate ``beta`` that ``theta`` was mapped from so
    region construction does not need further passes over ``X``.
    """

    theta: np.ndarray
    active: np.ndarray | None = None
    beta: np.ndarray | None = field(default=None, repr=False)
    xb: np.ndarray | None = field(default=None, repr=False)
    xt_xb: np.ndarray | None = field(default=None, repr=False)
    xt_theta: np.ndarray | None = field(default=None, repr=False)
    scale: float = 1.0

    @property
    def is_full(self):
        return self.active is None

    def products_for(self, beta):
        """Return the cached ``(X beta, X^T X beta)`` if they belong to ``beta``."""
        if self.beta is not None and self.xb is not None and np.array_equal(self.beta, beta):
            return self.xb, self.xt_xb
        return None

    def max_violation(self, X):
        """Largest ``|x_j^T theta| - 1`` over the enforced constraints."""
        xt = self.xt_theta if self.xt_theta is not None else X.mat_t_vec(self.theta)
        if self.active is not None:
            xt = xt[self.active]
        if xt.size == 0:
            return -1.0
        return float(np.max(np.abs(xt)) - 1.0)


def primal_value(p, beta, xb=None):
    """``1/2 ||y/lam - X beta||^2 + ||beta||_1``."""
    beta = np.asarray(beta, dtype=np.float64)
    if xb is None:
        xb = p.X.mat_vec(beta)
    r = p.y_scaled - xb
    return 0.5 * float(r @ r) + float(np.abs(beta).sum())


def dual_value(p, theta, with_flag=False):
    """Smooth part of the dual, ``-1/2 ||theta||^2 + (y/lam)^T theta``.

    The indicator of the feasible set is not added.  With ``with_flag`` the
    return value is ``(value, infeasible)`` where ``infeasible`` reports a
    violated constraint inside the point's scope (tolerance 1e-12).
    """
    t = theta.theta if isinstance(theta, DualPoint) else np.asarray(theta, dtype=np.float64)
    value = -0.5 * float(t @ t) + float(p.y_scaled @ t)
    if not with_flag:
        return value
    point = theta if isinstance(theta, DualPoint) else DualPoint(t)
    return value, point.max_violation(p.X) > 1e-12


def duality_gap(p, beta, theta):
    """``P(beta) - D(theta)`` evaluated in a cancellation-free form.

    Writing ``rho = y/lam - X beta`` the difference equals
    ``1/2 ||rho - theta||^2 + (||beta||_1 - beta^T X^T theta)``; both terms
    are nonnegative for a feasible ``theta`` so tiny gaps keep full relative
    accuracy.
    """
    beta = np.asarray(beta, dtype=np.float64)
    if not isinstance(theta, DualPoint):
        theta = DualPoint(np.asarray(theta, dtype=np.float64))
    cached = theta.products_for(beta)
    xb = cached[0] if cached is not None else p.X.mat_vec(beta)
    xt_theta = theta.xt_theta if theta.xt_theta is not None else p.X.mat_t_vec(theta.theta)
    diff = p.y_scaled - xb - theta.theta
    return 0.5 * float(diff @ diff) + (float(np.abs(beta).sum()) - float(beta @ xt_theta))


def dual_map(p, beta, active=None):
    """Rescale the residual ``y/lam - X beta`` into a dual-feasible point.

    ``theta = rho / max(1, s)`` with ``s = ||X^T rho||_inf``, or the maximum
    of ``|x_j^T rho|`` over ``active`` when an active set is given.  Costs one
    ``X beta`` and one ``X^T rho`` product.
    """
    beta = np.array(beta, dtype=np.float64)
    if active is not None:
        active = np.asarray(active, dtype=np.int64)
        if active.size == 0:
            raise ValueError("active set is empty; the reduced problem is already solved")
    xb = p.X.mat_vec(beta)
    rho = p.y_scaled - xb
    xt_rho = p.X.mat_t_vec(rho)
    s = np.abs(xt_rho if active is None else xt_rho[active]).max(initial=0.0)
    scale = max(1.0, float(s))
    return DualPoint(
        theta=rho / scale,
        active=active,
        beta=beta,
        xb=xb,
        xt_xb=p.xty_scaled - xt_rho,
        xt_theta=xt_rho / scale,
        scale=scale,
    )


def lambda_max(X, y):
    """``||X^T y||_inf``: the smallest ``lam`` for which ``beta = 0`` is optimal."""
    if not isinstance(X, DesignMatrix):
        X = DesignMatrix.from_dense(X)
    if X.n_cols == 0:
        return 0.0
    return float(np.abs(X.mat_t_vec(np.asarray(y, dtype=np.float64))).max())
