"""Problem definition, budget accounting, evaluation history, and the
sampling primitives shared by every search heuristic.

A run revolves around three objects: a :class:`Problem` (objective, box
domain, uncertainty radius), a :class:`BudgetLedger` counting down the
remaining objective evaluations, and a :class:`HistoryArchive` recording
every point ever evaluated together with its value.  All evaluations go
through :func:`evaluate`, which keeps ledger and archive consistent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

__all__ = [
    "BUDGET_EXHAUSTED",
    "Box",
    "BudgetLedger",
    "HistoryArchive",
    "Problem",
    "evaluate",
    "run_rng",
    "sample_in_ball",
]


class _BudgetExhaustedType:
    """Marker returned by :func:`evaluate` once the run budget is spent.

    Compare with ``is BUDGET_EXHAUSTED``; it is never a valid objective
    value, so exhaustion can always be told apart from a real result.
    """

    _instance: Optional["_BudgetExhaustedType"] = None

    def __new__(cls) -> "_BudgetExhaustedType":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "BUDGET_EXHAUSTED"


BUDGET_EXHAUSTED = _BudgetExhaustedType()


@dataclass(frozen=True)
class Box:
    """Axis-aligned box of per-dimension closed intervals [lower_i, upper_i]."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self) -> None:
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if lower.shape != upper.shape or lower.ndim != 1:
            raise ValueError("bounds must be 1-d arrays of equal length")
        if not np.all(lower < upper):
            raise ValueError("every lower bound must be strictly below its upper bound")
        lower.setflags(write=False)
        upper.setflags(write=False)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def dimension(self) -> int:
        return self.lower.size

    @property
    def widths(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, x) -> bool:
        """True iff x lies in the box; the boundary counts as inside."""
        x = np.asarray(x, dtype=float)
        if x.shape != self.lower.shape:
            raise ValueError(f"point has dimension {x.size}, box has {self.dimension}")
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))

    def sample_uniform(self, rng: np.random.Generator) -> np.ndarray:
        """One point with each coordinate independently uniform on [l_i, u_i]."""
        return rng.uniform(self.lower, self.upper)


@dataclass(frozen=True)
class Problem:
    """A box-constrained objective with an uncertainty radius.

    The objective must be total on all of R^n, not only on the domain:
    perturbed points may fall outside the box.  ``batch_objective``, when
    given, evaluates an (m, n) array of points to an (m,) array and is used
    only for post-processing; it must agree with ``objective`` pointwise.
    """

    objective: Callable[[np.ndarray], float]
    domain: Box
    gamma: float
    batch_objective: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self) -> None:
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")

    @property
    def dimension(self) -> int:
        return self.domain.dimension


class BudgetLedger:
    """Global countdown of objective evaluations remaining in a run."""

    __slots__ = ("remaining",)

    def __init__(self, budget: int):
        if budget < 0:
            raise ValueError("budget must be non-negative")
        self.remaining = int(budget)

    def __repr__(self) -> str:
        return f"BudgetLedger(remaining={self.remaining})"


class HistoryArchive:
    """Append-only record of every evaluated point and its objective value.

    Entries are never mutated after being appended; views handed out by
    :attr:`points` and :attr:`values` are read-only.
    """

    def __init__(self) -> None:
        self._points: Optional[np.ndarray] = None
        self._values = np.empty(0, dtype=float)
        self._size = 0

    def __len__(self) -> int:
        return self._size

    @property
    def points(self) -> np.ndarray:
        if self._points is None:
            return np.empty((0, 0), dtype=float)
        view = self._points[: self._size]
        view.setflags(write=False)
        return view

    @property
    def values(self) -> np.ndarray:
        view = self._values[: self._size]
        view.setflags(write=False)
        return view

    def append(self, point, value: float) -> None:
        point = np.asarray(point, dtype=float)
        if self._points is None:
            capacity = 64
            self._points = np.empty((capacity, point.size), dtype=float)
            self._values = np.empty(capacity, dtype=float)
        elif self._size == self._points.shape[0]:
            self._points = np.concatenate([self._points, np.empty_like(self._points)])
            self._values = np.concatenate([self._values, np.empty_like(self._values)])
        self._points[self._size] = point
        self._values[self._size] = value
        self._size += 1

    def indices_within(self, center, radius: float) -> np.ndarray:
        """Indices of archived points within Euclidean distance radius of center."""
        if self._size == 0:
            return np.empty(0, dtype=int)
        center = np.asarray(center, dtype=float)
        diff = self._points[: self._size] - center
        dist_sq = np.einsum("ij,ij->i", diff, diff)
        return np.flatnonzero(dist_sq <= radius * radius)

    def neighborhood_max(self, center, radius: float):
        """Highest-valued archived point within radius of center, if any.

        Returns a (point, value) pair or None when no archived point is in
        range.  Ties keep the earliest entry.
        """
        idx = self.indices_within(center, radius)
        if idx.size == 0:
            return None
        local = self._values[idx]
        best = idx[int(np.argmax(local))]
        point = self._points[best].copy()
        return point, float(self._values[best])


def evaluate(problem: Problem, x, ledger: BudgetLedger, archive: HistoryArchive):
    """Evaluate the objective at x, spending one unit of budget.

    Returns the objective value, or :data:`BUDGET_EXHAUSTED` (without
    evaluating anything) when the ledger is already empty.  Non-finite
    points are rejected without consuming budget.
    """
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("point contains non-finite components")
    if ledger.remaining <= 0:
        return BUDGET_EXHAUSTED
    value = float(problem.objective(x))
    ledger.remaining -= 1
    archive.append(x, value)
    return value


def sample_in_ball(center, radius: float, rng: np.random.Generator) -> np.ndarray:
    """One point uniform on the solid n-ball of the given radius about center.

    A standard-normal direction is normalised to unit length and scaled by
    radius * U^(1/n) with U uniform on (0, 1], which is exactly uniform on
    the ball in any dimension.  The returned point never lies outside the
    ball, even after floating-point rounding.
    """
    if not radius > 0:
        raise ValueError("radius must be positive")
    center = np.asarray(center, dtype=float)
    n = center.size
    direction = rng.standard_normal(n)
    norm = float(np.linalg.norm(direction))
    while norm == 0.0:
        direction = rng.standard_normal(n)
        norm = float(np.linalg.norm(direction))
    # 1 - U is uniform on (0, 1] when U is uniform on [0, 1)
    scale = radius * (1.0 - rng.random()) ** (1.0 / n) / norm
    offset = direction * scale
    out = center + offset
    while float(np.linalg.norm(out - center)) > radius:
        offset *= 0.9999999
        out = center + offset
    return out


def run_rng(master_seed: int, run_index: int = 0) -> np.random.Generator:
    """Independent generator for one run, derived from (master seed, run index)."""
    return np.random.default_rng(np.random.SeedSequence((int(master_seed), int(run_index))))
