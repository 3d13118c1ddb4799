"""The experimental test suite: eleven box-constrained objectives, each
paired with its domain and uncertainty radius.

Every objective accepts a single point of shape (n,) or a batch of shape
(m, n) and reduces over the last axis, so the same callable serves both
budgeted scalar evaluation and vectorised post-processing.  All objectives
are total on R^n; the box only constrains the outer search.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .core import Box, Problem

__all__ = [
    "TestInstanceSpec",
    "canonical_names",
    "evaluate_named",
    "instance_names",
    "make_instance",
    "slug",
]


def rastrigin(x):
    x = np.asarray(x, dtype=float)
    z = x - 20.0
    return 10.0 * x.shape[-1] + np.sum(z * z - 10.0 * np.cos(2.0 * np.pi * z), axis=-1)


def multipeak_f1(x):
    x = np.asarray(x, dtype=float)
    s = x + 5.0
    envelope = np.exp(-2.0 * np.log(2.0) * ((s - 0.1) / 0.8) ** 2)
    wave = np.sin(5.0 * np.pi * s)
    narrow = (0.4 < s) & (s <= 0.6)
    g = np.where(narrow, envelope * np.sqrt(np.abs(wave)), envelope * wave**6)
    return -np.mean(g, axis=-1)


def multipeak_f2(x):
    x = np.asarray(x, dtype=float)
    s = x - 10.0
    g = 2.0 * np.sin(10.0 * np.exp(-0.2 * s) * s) * np.exp(-0.25 * s)
    return np.mean(g, axis=-1)


_BRANKE_B1 = 2.0
_BRANKE_B2 = 2.0
_BRANKE_C1 = 1.0
_BRANKE_C2 = 1.3


def brankes_multipeak(x):
    x = np.asarray(x, dtype=float)
    s = x + 5.0
    valley = _BRANKE_C1 * (1.0 - 4.0 * (s + _BRANKE_B1 / 2.0) ** 2 / _BRANKE_B1**2)
    spike = _BRANKE_C2 * 16.0 ** (-2.0 * np.abs(_BRANKE_B2 - 2.0 * s) / _BRANKE_B2)
    g = np.where(
        (-_BRANKE_B1 <= s) & (s < 0.0),
        valley,
        np.where((0.0 <= s) & (s <= _BRANKE_B2), spike, 0.0),
    )
    return max(_BRANKE_C1, _BRANKE_C2) - np.mean(g, axis=-1)


_PICKELHAUBE_PEAK = 5.0 / (5.0 - np.sqrt(5.0))
_PICKELHAUBE_C1 = 625.0 / 624.0
_PICKELHAUBE_C2 = 1.5975
_PICKELHAUBE_D2 = 1.1513


def pickelhaube(x):
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    denom = 5.0 * np.sqrt(n)
    r0 = np.linalg.norm(x + 30.0, axis=-1)
    r1 = np.linalg.norm(x + 35.0, axis=-1)
    r2 = np.linalg.norm(x + 25.0, axis=-1)
    g0 = 0.1 * np.exp(-0.5 * r0)
    g1a = _PICKELHAUBE_PEAK * (1.0 - np.sqrt(r1 / denom))
    g1b = _PICKELHAUBE_C1 * (1.0 - (r1 / denom) ** 4)
    g2 = _PICKELHAUBE_C2 * (1.0 - (r2 / denom) ** _PICKELHAUBE_D2)
    return _PICKELHAUBE_PEAK - np.maximum.reduce([g0, g1a, g1b, g2])


def heaviside_sphere(x):
    x = np.asarray(x, dtype=float)
    s = x + 20.0
    step = np.where(s > 0.0, 0.0, 1.0)
    return (1.0 - np.prod(step, axis=-1)) + np.sum((s / 10.0) ** 2, axis=-1)


def sawtooth(x):
    x = np.asarray(x, dtype=float)
    s = x + 5.0
    g = np.where((-0.8 <= s) & (s < 0.2), s + 0.8, 0.0)
    return 1.0 - np.mean(g, axis=-1)


def ackley(x):
    x = np.asarray(x, dtype=float)
    z = x - 50.0
    radial = -20.0 * np.exp(-0.2 * np.sqrt(np.mean(z * z, axis=-1)))
    wave = -np.exp(np.mean(np.cos(2.0 * np.pi * z), axis=-1))
    return radial + wave + 20.0 + np.e


def sphere(x):
    x = np.asarray(x, dtype=float)
    z = x - 20.0
    return np.sum(z * z, axis=-1)


def rosenbrock(x):
    x = np.asarray(x, dtype=float)
    z = x - 10.0
    lead, tail = z[..., :-1], z[..., 1:]
    return np.sum(100.0 * (tail - lead**2) ** 2 + (lead - 1.0) ** 2, axis=-1)


def polynomial_2d(v):
    v = np.asarray(v, dtype=float)
    x, y = v[..., 0], v[..., 1]
    return (
        2.0 * x**6
        - 12.2 * x**5
        + 21.2 * x**4
        + 6.2 * x
        - 6.4 * x**3
        - 4.7 * x**2
        - y**6
        - 11.0 * y**5
        + 43.3 * y**4
        - 10.0 * y
        - 74.8 * y**3
        + 56.9 * y**2
        - 4.1 * x * y
        - 0.1 * y**2 * x**2
        + 0.4 * y**2 * x
        + 0.4 * x**2 * y
    )


@dataclass(frozen=True)
class TestInstanceSpec:
    """One suite entry: (name, dimension) pins down domain and radius."""

    name: str
    objective: Callable
    lower: float
    upper: float
    gamma: float
    fixed_dimension: Optional[int] = None


_SUITE = (
    TestInstanceSpec("Rastrigin", rastrigin, 14.88, 25.12, 0.5),
    TestInstanceSpec("MultipeakF1", multipeak_f1, -5.0, -4.0, 0.0625),
    TestInstanceSpec("MultipeakF2", multipeak_f2, 10.0, 20.0, 0.5),
    TestInstanceSpec("Branke's Multipeak", brankes_multipeak, -7.0, -3.0, 0.5),
    TestInstanceSpec("Pickelhaube", pickelhaube, -40.0, -20.0, 1.0),
    TestInstanceSpec("Heaviside Sphere", heaviside_sphere, -30.0, -10.0, 1.0),
    TestInstanceSpec("Sawtooth", sawtooth, -6.0, -4.0, 0.2),
    TestInstanceSpec("Ackley", ackley, 17.232, 82.768, 3.0),
    TestInstanceSpec("Sphere", sphere, 15.0, 25.0, 1.0),
    TestInstanceSpec("Rosenbrock", rosenbrock, 7.952, 12.048, 0.25),
    TestInstanceSpec("2D polynomial", polynomial_2d, -1.0, 4.0, 0.5, fixed_dimension=2),
)


def slug(name: str) -> str:
    """CLI form of a suite name: lowercase, apostrophes dropped, spaces to hyphens."""
    return name.lower().replace("'", "").replace(" ", "-")


_BY_KEY = {}
for _spec in _SUITE:
    _BY_KEY[_spec.name] = _spec
    _BY_KEY[slug(_spec.name)] = _spec


def canonical_names() -> list[str]:
    return [spec.name for spec in _SUITE]


def instance_names() -> list[str]:
    return [slug(spec.name) for spec in _SUITE]


def _lookup(name: str) -> TestInstanceSpec:
    spec = _BY_KEY.get(name) or _BY_KEY.get(slug(name))
    if spec is None:
        raise ValueError(f"unknown test function {name!r}; choose from {instance_names()}")
    return spec


def make_instance(name: str, n: int) -> Problem:
    """Build the suite problem of the given name at dimension n."""
    spec = _lookup(name)
    if n < 1:
        raise ValueError("dimension must be at least 1")
    if spec.fixed_dimension is not None and n != spec.fixed_dimension:
        raise ValueError(f"{spec.name} is only defined for n={spec.fixed_dimension}")
    domain = Box(np.full(n, spec.lower), np.full(n, spec.upper))
    return Problem(
        objective=spec.objective,
        domain=domain,
        gamma=spec.gamma,
        batch_objective=spec.objective,
    )


def evaluate_named(name: str, x) -> float:
    """Evaluate one suite objective at a single point."""
    spec = _lookup(name)
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("point contains non-finite components")
    if spec.fixed_dimension is not None and x.shape[-1] != spec.fixed_dimension:
        raise ValueError(f"{spec.name} expects {spec.fixed_dimension}-dimensional points")
    return float(spec.objective(x))
