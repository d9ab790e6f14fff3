"""Safe regions for the scaled Lasso dual and linear maximization over them.

A safe region is a set that provably contains the dual optimum.  Four
constructors are provided, all built from a primal estimate ``beta`` and a
dual point ``theta = dual_map(beta)``:

* :func:`gap_safe_sphere`  ball of radius ``sqrt(2 gap)`` around ``theta``
* :func:`gap_safe_dome`    ball with diameter ``[theta, y/lam]`` cut by the
  linear relaxation of ``||t - y/lam|| >= sqrt(||y/lam||^2 - 2 P(beta))``
* :func:`dynamic_sasvi`    the same ball cut by ``(X beta)^T t <= ||beta||_1``
* :func:`dynamic_edpp`     smallest ball enclosing the Dynamic Sasvi dome

Regions carry, when available, the products ``X^T center`` and
``X^T normal`` so that screening all columns costs O(n + d).
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .duality import DualPoint, primal_value


class RegionRule(Enum):
    GAP_SAFE_SPHERE = "gap-sphere"
    GAP_SAFE_DOME = "gap-dome"
    DYNAMIC_SASVI = "dynamic-sasvi"
    DYNAMIC_EDPP = "dynamic-edpp"
    NONE = "none"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            names = ", ".join(r.value for r in cls)
            raise ValueError(f"unknown rule {value!r}; expected one of {names}") from None

    def __lt__(self, other):
        order = list(RegionRule)
        return order.index(self) < order.index(other)


class EmptyRegion(ArithmeticError):
    """A dome whose halfspace misses its ball.

    Safe regions contain the dual optimum, so this only happens through
    floating-point error.
    """


@dataclass(eq=False)
class Sphere:
    center: np.ndarray
    radius: float
    rule: RegionRule = RegionRule.NONE
    center_proj: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.center = np.asarray(self.center, dtype=np.float64)
        self.radius = max(0.0, float(self.radius))

    def contains(self, theta, tol=0.0):
        return bool(np.linalg.norm(np.asarray(theta) - self.center) <= self.radius + tol)


@dataclass(eq=False)
class Dome:
    """``{t : ||t - center|| <= radius  and  normal^T t <= cap}``."""

    sphere: Sphere
    normal: np.ndarray
    cap: float
    rule: RegionRule = RegionRule.NONE
    normal_proj: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.normal = np.asarray(self.normal, dtype=np.float64)
        self.cap = float(self.cap)

    @property
    def center(self):
        return self.sphere.center

    @property
    def radius(self):
        return self.sphere.radius

    @property
    def offset(self):
        """``cap - center^T normal``: signed slack of the halfspace at the center."""
        return self.cap - float(self.center @ self.normal)

    def is_empty(self):
        return _dome_empty(self.offset, self.radius, float(np.linalg.norm(self.normal)), self._tol())

    def contains(self, theta, tol=0.0):
        theta = np.asarray(theta)
        return self.sphere.contains(theta, tol) and float(self.normal @ theta) <= self.cap + tol

    def _tol(self):
        scale = abs(self.cap) + np.linalg.norm(self.center) * np.linalg.norm(self.normal)
        return _EMPTY_RTOL * scale


# Domes whose halfspace misses the ball by less than this (relative to the
# magnitudes entering the offset) are treated as touching in a single point.
_EMPTY_RTOL = 1e-10


def _dome_empty(delta, r, nw, tol):
    if nw == 0.0:
        return delta < 0.0
    return delta < -r * nw - tol


# -- constructors ---------------------------------------------------------


def _products(p, beta, theta):
    """``X beta``, ``X^T X beta`` and ``X^T theta``, from the dual point's cache when possible."""
    beta = np.asarray(beta, dtype=np.float64)
    cached = theta.products_for(beta)
    if cached is not None:
        xb, xt_xb = cached
    else:
        xb = p.X.mat_vec(beta)
        xt_xb = p.X.mat_t_vec(xb)
    xt_theta = theta.xt_theta if theta.xt_theta is not None else p.X.mat_t_vec(theta.theta)
    return beta, xb, xt_xb, xt_theta


def _as_point(theta):
    return theta if isinstance(theta, DualPoint) else DualPoint(np.asarray(theta, dtype=np.float64))


def gap_safe_sphere(p, beta, theta):
    theta = _as_point(theta)
    beta, xb, _, xt_theta = _products(p, beta, theta)
    diff = p.y_scaled - xb - theta.theta
    gap = 0.5 * float(diff @ diff) + float(np.abs(beta).sum()) - float(beta @ xt_theta)
    return Sphere(theta.theta, np.sqrt(2.0 * max(0.0, gap)), RegionRule.GAP_SAFE_SPHERE, center_proj=xt_theta)


def dynamic_sasvi(p, beta, theta):
    theta = _as_point(theta)
    beta, xb, xt_xb, xt_theta = _products(p, beta, theta)
    center = 0.5 * (theta.theta + p.y_scaled)
    radius = 0.5 * float(np.linalg.norm(theta.theta - p.y_scaled))
    sphere = Sphere(center, radius, RegionRule.DYNAMIC_SASVI, center_proj=0.5 * (xt_theta + p.xty_scaled))
    return Dome(sphere, xb, float(np.abs(beta).sum()), RegionRule.DYNAMIC_SASVI, normal_proj=xt_xb)


def dynamic_edpp(p, beta, theta):
    theta = _as_point(theta)
    beta, xb, xt_xb, xt_theta = _products(p, beta, theta)
    center = 0.5 * (theta.theta + p.y_scaled)
    center_proj = 0.5 * (xt_theta + p.xty_scaled)
    radius = 0.5 * float(np.linalg.norm(theta.theta - p.y_scaled))
    xb2 = float(xb @ xb)
    alpha = 0.0
    if xb2 > 0.0:
        alpha = max(0.0, (float(center @ xb) - float(np.abs(beta).sum())) / xb2)
    if alpha > 0.0:
        center = center - alpha * xb
        center_proj = center_proj - alpha * xt_xb
        radius = np.sqrt(max(0.0, radius * radius - alpha * alpha * xb2))
    return Sphere(center, radius, RegionRule.DYNAMIC_EDPP, center_proj=center_proj)


def gap_safe_dome(p, beta, theta):
    theta = _as_point(theta)
    beta, xb, _, xt_theta = _products(p, beta, theta)
    yv = p.y_scaled
    center = 0.5 * (theta.theta + yv)
    radius = 0.5 * float(np.linalg.norm(theta.theta - yv))
    normal = yv - theta.theta
    # inner radius of the moon: ||t - y/lam||^2 >= ||y/lam||^2 - 2 P(beta)
    rho2 = max(0.0, float(yv @ yv) - 2.0 * primal_value(p, beta, xb=xb))
    # ||y||^2 + R^2 - ||m||^2 simplifies to y^T (y - theta)
    cap = float(yv @ normal) - rho2
    sphere = Sphere(center, radius, RegionRule.GAP_SAFE_DOME, center_proj=0.5 * (xt_theta + p.xty_scaled))
    return Dome(sphere, normal, cap, RegionRule.GAP_SAFE_DOME, normal_proj=p.xty_scaled - xt_theta)


BUILDERS = {
    RegionRule.GAP_SAFE_SPHERE: gap_safe_sphere,
    RegionRule.GAP_SAFE_DOME: gap_safe_dome,
    RegionRule.DYNAMIC_SASVI: dynamic_sasvi,
    RegionRule.DYNAMIC_EDPP: dynamic_edpp,
}


def build_region(rule, p, beta, theta):
    rule = RegionRule.parse(rule)
    if rule is RegionRule.NONE:
        raise ValueError("rule 'none' has no region")
    return BUILDERS[rule](p, beta, theta)


# -- linear maximization --------------------------------------------------


def sup_linear_over_sphere(s, x):
    x = np.asarray(x, dtype=np.float64)
    return float(x @ s.center) + s.radius * float(np.linalg.norm(x))


def _dome_sup(a, b, nx, delta, r, ww):
    """Vectorized dome support value.

    ``a = x^T center``, ``b = x^T normal``, ``nx = ||x||`` (arrays of equal
    shape), ``delta = cap - center^T normal``, ``ww = ||normal||^2``.
    """
    if ww == 0.0:
        return a + r * nx
    inactive = r * b <= delta * nx
    disc = np.sqrt(max(0.0, r * r - delta * delta / ww))
    perp = np.sqrt(np.maximum(0.0, nx * nx - b * b / ww))
    active_val = a + (b / ww) * delta + perp * disc
    return np.where(inactive, a + r * nx, active_val)


def _check_dome(d):
    nw = float(np.linalg.norm(d.normal))
    delta = d.offset
    if _dome_empty(delta, d.radius, nw, d._tol()):
        raise EmptyRegion(f"halfspace misses the ball (offset {delta:.3e}, radius*|w| {d.radius * nw:.3e})")
    return delta, nw * nw


def sup_linear_over_dome(d, x):
    """Maximum of ``x^T t`` over the dome; raises :class:`EmptyRegion`."""
    x = np.asarray(x, dtype=np.float64)
    delta, ww = _check_dome(d)
    val = _dome_sup(
        np.array(float(x @ d.center)), np.array(float(x @ d.normal)), np.array(float(np.linalg.norm(x))),
        delta, d.radius, ww,
    )
    return float(val)


def argmax_linear_over_dome(d, x):
    """A point of the dome attaining :func:`sup_linear_over_dome`."""
    x = np.asarray(x, dtype=np.float64)
    delta, ww = _check_dome(d)
    nx = float(np.linalg.norm(x))
    r = d.radius
    if nx == 0.0:
        return d.center.copy()
    b = float(x @ d.normal)
    if ww == 0.0 or r * b <= delta * nx:
        return d.center + (r / nx) * x
    perp = x - (b / ww) * d.normal
    point = d.center + (delta / ww) * d.normal
    pn = float(np.linalg.norm(perp))
    if pn > 0.0:
        point = point + np.sqrt(max(0.0, r * r - delta * delta / ww)) * perp / pn
    return point


def sup_linear(region, x):
    if isinstance(region, Dome):
        return sup_linear_over_dome(region, x)
    return sup_linear_over_sphere(region, x)


def column_abs_sups(region, X, cols):
    """``max over the region of |x_j^T t|`` for each column index in ``cols``.

    Uses the region's cached projections when present, otherwise one
    ``X^T`` product per vector.  Raises :class:`EmptyRegion` for an empty dome.
    """
    cols = np.asarray(cols, dtype=np.int64)
    sphere = region.sphere if isinstance(region, Dome) else region
    cproj = sphere.center_proj if sphere.center_proj is not None else X.mat_t_vec(sphere.center)
    a = cproj[cols]
    nx = X.col_norms[cols]
    if isinstance(region, Sphere):
        return np.abs(a) + sphere.radius * nx
    delta, ww = _check_dome(region)
    wproj = region.normal_proj if region.normal_proj is not None else X.mat_t_vec(region.normal)
    b = wproj[cols]
    up = _dome_sup(a, b, nx, delta, region.radius, ww)
    down = _dome_sup(-a, -b, nx, delta, region.radius, ww)
    return np.maximum(up, down)
