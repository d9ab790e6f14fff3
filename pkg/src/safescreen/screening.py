"""Feature elimination from a safe region.

Feature ``j`` is removed when ``max over the region of |x_j^T t| < 1``: the
region contains the dual optimum, so ``|x_j^T theta_hat| < 1`` and the
optimal coefficient is exactly zero.
"""

from dataclasses import dataclass, field

import numpy as np

from .regions import EmptyRegion, RegionRule, column_abs_sups


class ActiveSet:
    """Boolean mask of features still in play.  Entries only ever go False."""

    def __init__(self, alive):
        self.alive = np.array(alive, dtype=bool)
        self.alive.setflags(write=False)

    @classmethod
    def full(cls, d):
        return cls(np.ones(d, dtype=bool))

    @property
    def count(self):
        return int(np.count_nonzero(self.alive))

    @property
    def indices(self):
        return np.flatnonzero(self.alive)

    def __len__(self):
        return self.count

    def __repr__(self):
        return f"ActiveSet({self.count}/{self.alive.size})"


@dataclass
class ScreenEvent:
    epoch: int
    rule: RegionRule
    active_before: int
    active_after: int
    gap: float
    eliminated: np.ndarray = field(default_factory=lambda: np.zeros(0, np.int64), repr=False)
    warning: str | None = None

    def as_dict(self):
        return {
            "epoch": self.epoch,
            "rule": self.rule.value,
            "active_before": self.active_before,
            "active_after": self.active_after,
            "eliminated": self.active_before - self.active_after,
            "gap": self.gap,
            "warning": self.warning,
        }


def screen(region, X, active, *, margin=0.0, epoch=0, gap=float("nan")):
    """Test every alive column against ``region``.

    Returns the updated :class:`ActiveSet` and a :class:`ScreenEvent` whose
    ``eliminated`` field lists the removed indices.  ``margin`` tightens the
    test to ``sup < 1 - margin``.

    A dome that comes out empty (only possible through rounding) is replaced
    by its ball, which still contains it; the event carries a warning.
    """
    if margin < 0:
        raise ValueError("safety margin must be nonnegative")
    cols = active.indices
    warning = None
    try:
        sups = column_abs_sups(region, X, cols)
    except EmptyRegion as exc:
        warning = f"numerical inconsistency: {exc}; fell back to the enclosing ball"
        sups = column_abs_sups(region.sphere, X, cols)
    drop = cols[sups < 1.0 - margin]
    alive = active.alive.copy()
    alive[drop] = False
    after = ActiveSet(alive)
    rule = region.rule if region.rule is not None else RegionRule.NONE
    event = ScreenEvent(epoch, rule, len(cols), after.count, float(gap), drop, warning)
    return after, event


def eliminated_by(region, X, active, margin=0.0):
    """Indices ``screen`` would remove, without building an event."""
    _, event = screen(region, X, active, margin=margin)
    return set(event.eliminated.tolist())

