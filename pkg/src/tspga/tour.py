"""Tours, metrics and the shift/reversal equivalence on tours.

A tour is stored as a tuple of 0-based city indices. Tuples are immutable,
hashable and compare element-wise, which is all the GA needs.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

Tour = Tuple[int, ...]


class Metric(str, enum.Enum):
    EUC_2D = "EUC_2D"  # TSPLIB: Euclidean rounded to nearest integer
    ATT = "ATT"  # TSPLIB pseudo-Euclidean
    EUCLIDEAN = "EUCLIDEAN"  # exact, unrounded
    MANHATTAN = "MANHATTAN"


def _nint(x: float) -> int:
    return int(x + 0.5)


def distance(metric: Metric, a: Sequence[float], b: Sequence[float]) -> float:
    """Distance between two points under ``metric``.

    The TSPLIB kinds follow the conventions of the TSPLIB documentation, so
    published optimal tour lengths are reproduced exactly.
    """
    dx = a[0] - b[0]
    dy = a[1] - b[1]
    if metric is Metric.EUC_2D:
        return float(_nint(math.sqrt(dx * dx + dy * dy)))
    if metric is Metric.ATT:
        r = math.sqrt((dx * dx + dy * dy) / 10.0)
        t = _nint(r)
        return float(t + 1 if t < r else t)
    if metric is Metric.EUCLIDEAN:
        return math.hypot(dx, dy)
    if metric is Metric.MANHATTAN:
        return abs(dx) + abs(dy)
    raise ValueError(f"unknown metric {metric!r}")


def distance_matrix(points: Sequence[Sequence[float]], metric: Metric) -> np.ndarray:
    n = len(points)
    dist = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            dist[i, j] = dist[j, i] = distance(metric, points[i], points[j])
    return dist


@dataclass(frozen=True)
class Instance:
    """An immutable symmetric TSP instance with a precomputed distance table."""

    name: str
    points: Tuple[Tuple[float, float], ...]
    metric: Metric
    known_opt: Optional[float] = None
    dist: np.ndarray = field(init=False, repr=False, compare=False)
    # list-of-lists copy of ``dist``; scalar lookups are much cheaper than on ndarrays
    rows: Tuple[Tuple[float, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        points = tuple((float(x), float(y)) for x, y in self.points)
        if len(points) < 3:
            raise ValueError(f"an instance needs at least 3 cities, got {len(points)}")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "metric", Metric(self.metric))
        dist = distance_matrix(points, self.metric)
        dist.setflags(write=False)
        object.__setattr__(self, "dist", dist)
        object.__setattr__(self, "rows", tuple(tuple(r) for r in dist.tolist()))

    @property
    def n(self) -> int:
        return len(self.points)


def check_tour(tour: Sequence[int], n: int) -> Tour:
    """Return ``tour`` as a tuple, raising ValueError unless it is a permutation of range(n)."""
    t = tuple(int(c) for c in tour)
    if len(t) != n or set(t) != set(range(n)):
        raise ValueError(f"not a permutation of 0..{n - 1}: {t}")
    return t


def tour_length(instance: Instance, tour: Sequence[int]) -> float:
    """Length of the closed tour, wrap-around edge included.

    Edge lengths are summed with ``math.fsum``; the correctly rounded result
    does not depend on summation order, so rotations and reversals of a tour
    give bit-identical lengths under every metric.
    """
    rows = instance.rows
    prev = tour[-1]
    edges = []
    for c in tour:
        edges.append(rows[prev][c])
        prev = c
    return math.fsum(edges)


def fitness(instance: Instance, tour: Sequence[int]) -> float:
    return -tour_length(instance, tour)


def circular_shift(tour: Sequence[int], k: int) -> Tour:
    """``result[i] == tour[(i + k) % n]``."""
    t = tuple(tour)
    k %= len(t)
    return t[k:] + t[:k]


def reverse(tour: Sequence[int]) -> Tour:
    return tuple(tour)[::-1]


def canonicalize(tour: Sequence[int]) -> Tour:
    """Unique representative of the tour's class under rotation and reversal.

    City 0 is moved to the front, and the direction is chosen so that the
    successor of city 0 is smaller than its predecessor.
    """
    t = tuple(tour)
    if len(t) < 3:
        raise ValueError("canonical form needs n >= 3")
    i = t.index(0)
    r = t[i:] + t[:i]
    if r[1] > r[-1]:
        r = (0,) + r[:0:-1]
    return r


def equivalent(a: Sequence[int], b: Sequence[int]) -> bool:
    if len(a) != len(b):
        raise ValueError("tours of different size")
    return canonicalize(a) == canonicalize(b)


def random_tour(n: int, rng: np.random.Generator) -> Tour:
    """Uniformly random permutation of range(n) (Fisher-Yates via ``rng.permutation``)."""
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    return tuple(rng.permutation(n).tolist())
