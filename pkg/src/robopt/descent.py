"""Directions that point optimally away from high-cost points.

Given the archived evaluations near a candidate x, the points whose values
come within sigma of the local worst-case estimate form the high-cost set.
The best escape direction solves

    min_{||d|| <= 1}  max_h  d . (h - x) / ||h - x||

whose optimum is, by minimax duality, the negated minimum-norm point of the
convex hull of the unit vectors towards the high-cost points: if c is that
point then d = -c/||c|| and the optimal value is -||c||.  The hull problem
is solved exactly with Wolfe's method, so no external conic solver is
needed.  The step length along d is chosen just large enough to push every
high-cost point onto or beyond the boundary of the next gamma-ball.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import Box, HistoryArchive

__all__ = [
    "DdParams",
    "DirectionResult",
    "HighCostSet",
    "dd_velocity_component",
    "find_step",
    "high_cost_set",
    "min_norm_point",
    "solve_direction",
    "step_size",
]

COINCIDENT_TOL = 1e-12


@dataclass(frozen=True)
class DdParams:
    """Knobs of a single-step descent-direction calculation.

    ``sigma_init=None`` selects the adaptive default: one tenth of the
    value spread among archived points in the candidate's gamma-ball,
    floored at ``sigma_limit``.  ``min_step`` voids steps shorter than the
    given length.
    """

    sigma_init: Optional[float] = None
    sigma_limit: float = 1e-4
    sigma_no: int = 3
    epsilon: float = 1e-6
    c3: float = 1.0
    min_step: float = 0.0

    def __post_init__(self) -> None:
        if self.sigma_init is not None and self.sigma_limit > self.sigma_init:
            raise ValueError("sigma_limit must not exceed sigma_init")
        if self.sigma_no < 1:
            raise ValueError("sigma_no must be at least 1")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")


@dataclass
class HighCostSet:
    points: np.ndarray  # (k, n)
    values: np.ndarray  # (k,)
    threshold: float

    def __len__(self) -> int:
        return self.points.shape[0]


@dataclass
class DirectionResult:
    direction: np.ndarray
    beta: float
    found: bool


def high_cost_set(
    archive: HistoryArchive, x, gamma: float, sigma: float, g_estimate: float
) -> HighCostSet:
    """Archived points within gamma of x whose value is >= g_estimate - sigma."""
    x = np.asarray(x, dtype=float)
    threshold = g_estimate - sigma
    idx = archive.indices_within(x, gamma)
    if idx.size == 0:
        return HighCostSet(np.empty((0, x.size)), np.empty(0), threshold)
    values = archive.values[idx]
    keep = values >= threshold
    return HighCostSet(archive.points[idx[keep]].copy(), values[keep].copy(), threshold)


def _affine_weights(points: np.ndarray) -> Optional[np.ndarray]:
    """Weights of the minimum-norm point of the affine hull of the rows.

    Solves the bordered system [G 1; 1' 0][a; mu] = [0; 1] by least squares
    so rank-deficient Gram matrices are handled too.
    """
    m = points.shape[0]
    if m == 1:
        return np.array([1.0])
    system = np.zeros((m + 1, m + 1))
    system[:m, :m] = points @ points.T
    system[:m, m] = 1.0
    system[m, :m] = 1.0
    rhs = np.zeros(m + 1)
    rhs[m] = 1.0
    solution, *_ = np.linalg.lstsq(system, rhs, rcond=None)
    weights = solution[:m]
    total = float(weights.sum())
    if not np.isfinite(total) or abs(total) < 1e-12:
        return None
    return weights / total


def min_norm_point(vectors, tol: float = 1e-9) -> np.ndarray:
    """The minimum-Euclidean-norm point of the convex hull of the inputs.

    Wolfe's algorithm: grow an active vertex set by the vertex most
    violating the supporting hyperplane of the current iterate, then pull
    the affine minimiser of the active set back into the simplex, dropping
    vertices whose weight hits zero.
    """
    points = np.atleast_2d(np.asarray(vectors, dtype=float))
    k, n = points.shape
    if k == 0:
        raise ValueError("need at least one vector")
    if k == 1:
        return points[0].copy()

    norms_sq = np.einsum("ij,ij->i", points, points)
    active = [int(np.argmin(norms_sq))]
    weights = np.array([1.0])
    max_major = max(10 * k * n, k + 2)

    for _ in range(max_major):
        x = weights @ points[active]
        xx = float(x @ x)
        dots = points @ x
        j = int(np.argmin(dots))
        if dots[j] >= xx - tol * max(1.0, xx):
            break
        if j in active:
            break
        active.append(j)
        weights = np.append(weights, 0.0)

        while True:
            alpha = _affine_weights(points[active])
            if alpha is None:
                # degenerate active set: drop the lightest vertex and retry
                drop = int(np.argmin(weights))
                del active[drop]
                weights = np.delete(weights, drop)
                weights = weights / weights.sum()
                if len(active) == 1:
                    break
                continue
            if np.all(alpha > tol):
                weights = alpha
                break
            negative = alpha <= tol
            gap = weights - alpha
            with np.errstate(divide="ignore", invalid="ignore"):
                ratios = np.where(negative & (gap > 0), weights / gap, np.inf)
            theta = float(np.min(ratios))
            if not math.isfinite(theta):
                theta = 0.0
            theta = min(max(theta, 0.0), 1.0)
            weights = weights + theta * (alpha - weights)
            weights[weights < 1e-14] = 0.0
            keep = weights > 0.0
            if not np.all(keep):
                active = [a for a, kept in zip(active, keep) if kept]
                weights = weights[keep] / weights[keep].sum()
            if len(active) == 1:
                weights = np.array([1.0])
                break

    return weights @ points[active]


def solve_direction(x, hcps: HighCostSet, epsilon: float = 1e-6) -> DirectionResult:
    """Unit direction maximising its worst angle to all high-cost points.

    Points numerically coincident with x are dropped before normalising;
    if none remain, or the hull of the unit vectors comes within epsilon of
    the origin (x is surrounded), no valid direction exists.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    if len(hcps) == 0:
        return DirectionResult(np.zeros(n), 0.0, False)
    diffs = hcps.points - x
    dists = np.linalg.norm(diffs, axis=1)
    keep = dists >= COINCIDENT_TOL
    if not np.any(keep):
        return DirectionResult(np.zeros(n), 0.0, False)
    units = diffs[keep] / dists[keep, None]
    hull_point = min_norm_point(units)
    hull_norm = float(np.linalg.norm(hull_point))
    if hull_norm < epsilon:
        return DirectionResult(np.zeros(n), 0.0, False)
    return DirectionResult(-hull_point / hull_norm, -hull_norm, True)


def step_size(x, direction, hcps: HighCostSet, gamma: float) -> float:
    """Smallest step along direction leaving every high-cost point at
    distance >= gamma from the stepped point.

    Solves ||h - (x + rho*d)|| = gamma for each h and takes the minimum;
    discriminants driven slightly negative by rounding (points at distance
    ~gamma) are clamped to zero.
    """
    x = np.asarray(x, dtype=float)
    direction = np.asarray(direction, dtype=float)
    diffs = hcps.points - x
    along = diffs @ direction
    dist_sq = np.einsum("ij,ij->i", diffs, diffs)
    discriminant = np.maximum(along**2 - dist_sq + gamma * gamma, 0.0)
    return float(np.min(along + np.sqrt(discriminant)))


def _resolve_sigma(params: DdParams, archive: HistoryArchive, x, gamma: float) -> float:
    if params.sigma_init is not None:
        return params.sigma_init
    idx = archive.indices_within(x, gamma)
    if idx.size < 2:
        return params.sigma_limit
    local = archive.values[idx]
    return max(0.1 * float(local.max() - local.min()), params.sigma_limit)


def _clear_step(x, direction, rho, archive, threshold, gamma):
    """Halve rho (at most three times) until no archived point of value
    >= threshold lies strictly inside the gamma-ball of the stepped point.

    Returns the cleared step length, or None when still blocked.
    """
    for _ in range(4):
        target = x + rho * direction
        idx = archive.indices_within(target, gamma - 1e-9)
        if idx.size == 0 or not np.any(archive.values[idx] >= threshold):
            return rho
        rho *= 0.5
    return None


def find_step(
    x,
    archive: HistoryArchive,
    g_estimate: float,
    params: DdParams,
    gamma: float,
    check_clearance: bool = False,
) -> Optional[np.ndarray]:
    """One descent step rho*d away from the high-cost set around x.

    Attempts the direction solve at the initial sigma, lowering sigma by
    (sigma - sigma_limit) / sigma_no after each failure, for at most
    sigma_no + 1 attempts.  Steps shorter than min_step count as failures.
    With check_clearance the step must also not land among further archived
    high-cost points; a step that stays blocked after three halvings voids
    the direction.  Returns None when no valid step exists (a robust local
    minimum).
    """
    sigma = _resolve_sigma(params, archive, x, gamma)
    for _ in range(params.sigma_no + 1):
        if sigma < params.sigma_limit:
            break
        hcps = high_cost_set(archive, x, gamma, sigma, g_estimate)
        result = solve_direction(x, hcps, params.epsilon)
        if result.found:
            rho = step_size(x, result.direction, hcps, gamma)
            if check_clearance:
                cleared = _clear_step(x, result.direction, rho, archive, g_estimate - sigma, gamma)
                if cleared is None or cleared < params.min_step:
                    return None
                return cleared * result.direction
            if rho >= params.min_step:
                return rho * result.direction
        sigma -= (sigma - params.sigma_limit) / params.sigma_no
    return None


def dd_velocity_component(
    x_c,
    archive: HistoryArchive,
    g_estimate: float,
    params: DdParams,
    domain: Box,
    gamma: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Extra velocity term steering a particle away from high-cost points.

    Feasible candidates get C3 * r3 * (rho * d) from a single-step descent
    calculation (zero vector when no direction exists).  Infeasible
    candidates instead get a vector of magnitude gamma in each violated
    dimension, signed to point back into the box.  r3 is uniform on
    [0, 1)^n and multiplies componentwise.
    """
    x_c = np.asarray(x_c, dtype=float)
    n = x_c.size
    if not domain.contains(x_c):
        pull = np.zeros(n)
        pull[x_c <= domain.lower] = gamma
        pull[x_c >= domain.upper] = -gamma
        return params.c3 * rng.random(n) * pull
    step = find_step(x_c, archive, g_estimate, params, gamma)
    if step is None:
        return np.zeros(n)
    return params.c3 * rng.random(n) * step
