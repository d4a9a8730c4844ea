"""Point-set propagation along the circle-action system and density checks.

A single connecting step sends a point on one of the two labeled
circles to the finite set of source points whose evaluations occur in
its image: on summand 0 a point keeps itself and spawns its N-th roots
on summand 1; on summand 1 it keeps its rotation orbit under the N-th
roots of unity, the same orbit shifted by the irrational angle, and its
N-th power on summand 0.  Iterating and checking epsilon-density of the
resulting sets is the finite content of the simplicity argument.

Angles are kept in turns (fraction of a full circle, in [0, 1)).
Double precision with a 1e-9 deduplication tolerance; density checks in
tests keep margins of at least 1e-3 so rounding can never flip them.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

DEFAULT_THETA = math.sqrt(2.0) - 1.0
DEFAULT_SEED = 7_0001
DEFAULT_POINT_BUDGET = 10 ** 6
GRID_POINTS = 4096
_DEDUP_SCALE = 10 ** 9


class PointBudgetExceeded(RuntimeError):
    """Raised when propagation would exceed the configured point budget."""


@dataclass(frozen=True)
class OrbitPoint:
    summand: int
    angle: float

    def __post_init__(self):
        if self.summand not in (0, 1):
            raise ValueError("summand must be 0 or 1")
        object.__setattr__(self, "angle", _canonical(self.angle))


def _canonical(angle: float) -> float:
    """Reduce mod 1 and snap to the 1e-9 deduplication grid."""
    a = angle % 1.0
    snapped = round(a * _DEDUP_SCALE) % _DEDUP_SCALE
    return snapped / _DEDUP_SCALE


@dataclass(frozen=True)
class OrbitSet:
    """A finite labeled point set with its base point, canonically ordered."""

    points: tuple[OrbitPoint, ...]
    base: OrbitPoint

    def __post_init__(self):
        ordered = tuple(
            sorted(set(self.points), key=lambda p: (p.summand, p.angle))
        )
        object.__setattr__(self, "points", ordered)

    def angles(self, summand: int) -> tuple[float, ...]:
        return tuple(p.angle for p in self.points if p.summand == summand)

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, p: OrbitPoint) -> bool:
        return p in self.points


def _step_raw(summand: int, angle: float, N: int, theta: float):
    if summand == 0:
        yield (0, angle)
        for k in range(N):
            yield (1, (angle + k) / N)
    else:
        yield (0, N * angle)
        for k in range(N):
            yield (1, angle + k / N)
            yield (1, angle - theta + k / N)


def lphi_step(p: OrbitPoint, N: int, theta: float = DEFAULT_THETA) -> OrbitSet:
    """Source points of one connecting step, per the evaluation bookkeeping."""
    if N < 2:
        raise ValueError("N must be at least 2")
    pts = tuple(
        OrbitPoint(s, a) for s, a in _step_raw(p.summand, p.angle, N, theta)
    )
    return OrbitSet(pts, p)


def lphi_compose(
    start: OrbitPoint,
    steps: int,
    N: int,
    theta: float = DEFAULT_THETA,
    point_budget: int = DEFAULT_POINT_BUDGET,
) -> OrbitSet:
    """Iterated step sets; contains the start point and grows monotonically."""
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    if N < 2:
        raise ValueError("N must be at least 2")
    current = {(start.summand, start.angle)}
    for _ in range(steps):
        nxt = set()
        for s, a in current:
            for s2, a2 in _step_raw(s, a, N, theta):
                nxt.add((s2, _canonical(a2)))
        if len(nxt) > point_budget:
            raise PointBudgetExceeded(
                f"orbit set exceeded {point_budget} points"
            )
        current = nxt
    pts = tuple(OrbitPoint(s, a) for s, a in current)
    return OrbitSet(pts, start)


def _dense_on_circle(angles, eps: float, grid: int = GRID_POINTS) -> bool:
    """Every grid point within circular distance eps of some angle."""
    arr = np.sort(np.asarray(angles, dtype=float) % 1.0)
    if arr.size == 0:
        return False
    ext = np.concatenate(([arr[-1] - 1.0], arr, [arr[0] + 1.0]))
    g = np.arange(grid, dtype=float) / grid
    idx = np.searchsorted(ext, g)
    left = g - ext[idx - 1]
    right = ext[idx] - g
    return float(np.max(np.minimum(left, right))) <= eps


def eps_dense(s: OrbitSet, eps: float) -> bool:
    """Whether the set is eps-dense on both labeled circles.

    Density is tested against a 4096-point uniform grid per summand,
    with distances measured in turns; an empty summand fails.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    return all(_dense_on_circle(s.angles(j), eps) for j in (0, 1))


def eps_dense_on_summand(s: OrbitSet, summand: int, eps: float) -> bool:
    if eps <= 0:
        raise ValueError("eps must be positive")
    return _dense_on_circle(s.angles(summand), eps)


def sample_base_angles(samples: int, seed: int = DEFAULT_SEED) -> list[float]:
    rng = random.Random(seed)
    return [rng.random() for _ in range(samples)]


def find_density_stage(
    start_summand: int,
    eps: float,
    N: int,
    theta: float = DEFAULT_THETA,
    max_steps: int = 40,
    samples: int = 64,
    seed: int = DEFAULT_SEED,
    point_budget: int = DEFAULT_POINT_BUDGET,
) -> int | None:
    """Least step count making the propagated sets eps-dense, or None.

    The shift angle theta must be irrational for density to be
    reachable at every eps (caller's obligation; rational theta makes
    small-eps searches fail).  The check samples `samples` base angles
    from a seeded generator rather than quantifying over every base
    point; reports built on top of this state the sample count.
    Because step sets only grow, each sample is propagated until its
    first dense stage and the maximum over samples is returned; None
    means some sample stayed non-dense through max_steps.
    """
    if start_summand not in (0, 1):
        raise ValueError("start_summand must be 0 or 1")
    if eps <= 0:
        raise ValueError("eps must be positive")
    worst = 0
    for base in sample_base_angles(samples, seed):
        current = {(start_summand, _canonical(base))}
        found = None
        for n in range(1, max_steps + 1):
            nxt = set()
            for s, a in current:
                for s2, a2 in _step_raw(s, a, N, theta):
                    nxt.add((s2, _canonical(a2)))
            if len(nxt) > point_budget:
                raise PointBudgetExceeded(
                    f"orbit set exceeded {point_budget} points"
                )
            current = nxt
            by_summand = {0: [], 1: []}
            for s, a in current:
                by_summand[s].append(a)
            if _dense_on_circle(by_summand[0], eps) and _dense_on_circle(
                by_summand[1], eps
            ):
                found = n
                break
        if found is None:
            return None
        worst = max(worst, found)
    return worst


def rotation_orbit_density_stage(eps: float, theta: float, max_k: int) -> int | None:
    """Least K with {j*theta mod 1 : 0 <= j <= K} eps-dense, or None.

    This is the auxiliary sufficient condition the density search
    mirrors: once the rotation orbit and its N-fold speedup are both
    eps-dense, the propagated sets are too.
    """
    pts = []
    for k in range(max_k + 1):
        pts.append((k * theta) % 1.0)
        if _dense_on_circle(pts, eps):
            return k
    return None
