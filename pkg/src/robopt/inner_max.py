"""Worst-case cost estimation at a candidate point by uniform sampling in
its uncertainty ball, with an optional early-stopping threshold.

The candidate itself is always evaluated first; up to ``b_in - 1`` further
points are then drawn uniformly from the gamma-ball around it.  The running
maximum of the sampled values is the worst-case estimate.  When stopping is
enabled the call returns as soon as the running maximum strictly exceeds
the threshold, since the candidate can no longer improve on it.  If the
global budget runs out mid-call the outcome is flagged terminal and the
outer heuristic must wind down with its current incumbent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import BUDGET_EXHAUSTED, BudgetLedger, HistoryArchive, Problem, evaluate, sample_in_ball

__all__ = ["InnerMaxOutcome", "inner_maximise"]


@dataclass
class InnerMaxOutcome:
    """Result of one uncertainty-ball maximisation.

    ``estimate`` is the maximum over exactly the points this call appended
    to the archive; it is NaN when the budget was already empty and nothing
    could be evaluated.  ``budget_exhausted`` marks the whole run as
    finished: the caller must not use the outcome for incumbent updates.
    """

    estimate: float
    argmax_point: Optional[np.ndarray]
    evaluations_used: int
    stopped_early: bool
    budget_exhausted: bool


def inner_maximise(
    x_c,
    b_in: int,
    stopping: bool,
    tau: float,
    problem: Problem,
    ledger: BudgetLedger,
    archive: HistoryArchive,
    rng: np.random.Generator,
) -> InnerMaxOutcome:
    """Estimate the worst case in the gamma-ball around x_c.

    Spends at most b_in evaluations (fewer under stopping or budget
    exhaustion).  The threshold comparison is strict: stopping fires only
    once the running maximum exceeds tau.
    """
    if b_in < 1:
        raise ValueError("b_in must be at least 1")
    x_c = np.asarray(x_c, dtype=float)

    value = evaluate(problem, x_c, ledger, archive)
    if value is BUDGET_EXHAUSTED:
        return InnerMaxOutcome(math.nan, None, 0, False, True)
    best = value
    best_point = x_c
    used = 1
    if stopping and best > tau:
        return InnerMaxOutcome(best, best_point, used, True, False)
    if ledger.remaining == 0:
        return InnerMaxOutcome(best, best_point, used, False, True)

    for _ in range(b_in - 1):
        probe = sample_in_ball(x_c, problem.gamma, rng)
        value = evaluate(problem, probe, ledger, archive)
        used += 1
        if value > best:
            best = value
            best_point = probe
        if stopping and best > tau:
            return InnerMaxOutcome(best, best_point, used, True, False)
        if ledger.remaining == 0:
            return InnerMaxOutcome(best, best_point, used, False, True)

    return InnerMaxOutcome(best, best_point, used, False, False)
