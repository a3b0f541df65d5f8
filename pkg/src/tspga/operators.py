"""Crossover and mutation operators on permutation-encoded tours.

Baselines: one-point, OX (Davis order crossover) and BOX (best order
crossover). Symmetry-aware variants of one-point crossover:

* CSX  -- rotate the second parent so both parents agree at the split index.
* RX   -- try the second parent and its reversal, keep the shorter child.
* CSRX -- CSX against the second parent and its reversal, keep the shorter child.

CSRX gives the same child for every rotation and reversal of the second
parent, so it acts on tours up to the symmetries of the symmetric TSP.

Operators taking explicit cut points are deterministic. The ``random_*``
helpers draw those cut points from a numpy ``Generator``.
"""

from __future__ import annotations

import enum
from typing import Sequence, Tuple

import numpy as np

from .tour import Instance, Tour, tour_length


class CrossoverKind(str, enum.Enum):
    ONE_POINT = "one_point"
    OX = "ox"
    BOX = "box"
    CSX = "csx"
    RX = "rx"
    CSRX = "csrx"

    @classmethod
    def parse(cls, name: str) -> "CrossoverKind":
        key = name.strip().lower().replace("-", "_")
        for kind in cls:
            if kind.value == key:
                return kind
        raise ValueError(f"unknown crossover {name!r}; choose from {[k.value for k in cls]}")


class Source(enum.IntEnum):
    """Reference individual that orders a BOX segment."""

    P1 = 0
    P2 = 1
    BEST = 2


BOX_MAX_SPLITS = 7


def one_point_crossover(p1: Sequence[int], p2: Sequence[int], s: int) -> Tour:
    """Keep ``p1[0..s]`` (inclusive) and append the remaining cities in ``p2``'s order."""
    head = tuple(p1[: s + 1])
    used = set(head)
    return head + tuple(c for c in p2 if c not in used)


def ox_crossover(p1: Sequence[int], p2: Sequence[int], a: int, b: int) -> Tour:
    """Order crossover: ``p1[a..b]`` stays in place, the other slots are filled
    from ``p2`` starting after position ``b`` and wrapping around."""
    n = len(p1)
    if not 0 <= a <= b < n:
        raise ValueError(f"need 0 <= a <= b < n, got a={a}, b={b}, n={n}")
    child = list(p1)
    used = set(p1[a : b + 1])
    fill = [p2[(b + 1 + i) % n] for i in range(n)]
    fill = [c for c in fill if c not in used]
    slots = [(b + 1 + i) % n for i in range(n - (b - a + 1))]
    for pos, c in zip(slots, fill):
        child[pos] = c
    return tuple(child)


def box_crossover(
    p1: Sequence[int],
    p2: Sequence[int],
    best: Sequence[int],
    splits: Sequence[int],
    labels: Sequence[Source],
) -> Tour:
    """Best order crossover with explicit cut points.

    ``p1`` is cut at ``splits``; the cities of segment ``k`` are then written
    in the order they have in the reference named by ``labels[k]``.
    """
    n = len(p1)
    bounds = [0, *splits, n]
    if any(lo >= hi for lo, hi in zip(bounds, bounds[1:])):
        raise ValueError(f"splits must be strictly increasing within (0, {n}): {list(splits)}")
    if len(labels) != len(bounds) - 1:
        raise ValueError(f"{len(bounds) - 1} segments but {len(labels)} labels")
    refs = {Source.P2: p2, Source.BEST: best}
    rank = {}
    child = []
    for (lo, hi), label in zip(zip(bounds, bounds[1:]), labels):
        segment = p1[lo:hi]
        label = Source(label)
        if label is not Source.P1:
            if label not in rank:
                rank[label] = {c: i for i, c in enumerate(refs[label])}
            segment = sorted(segment, key=rank[label].__getitem__)
        child.extend(segment)
    return tuple(child)


def _align(p1: Sequence[int], p2: Tour, s: int) -> Tour:
    """Rotate ``p2`` so that it holds ``p1[s]`` at index ``s``."""
    k = (p2.index(p1[s]) - s) % len(p2)
    return p2[k:] + p2[:k]


def _pick(instance: Instance, p1: Sequence[int], a: Tour, b: Tour) -> Tuple[Tour, float]:
    """The shorter of two candidate children, with its length.

    Equal lengths are decided by comparing the children with every city
    replaced by its position in ``p1``. That choice depends only on the pair
    {a, b} and on ``p1``, which keeps RX and CSRX exactly invariant under
    reversal of the second parent, and it prefers ``p1`` itself when ``p1``
    is one of the candidates.
    """
    la = tour_length(instance, a)
    if a == b:
        return a, la
    lb = tour_length(instance, b)
    if la != lb:
        return (a, la) if la < lb else (b, lb)
    pos = {c: i for i, c in enumerate(p1)}
    return (a, la) if [pos[c] for c in a] <= [pos[c] for c in b] else (b, lb)


def _rx(instance, p1, p2, s):
    p2 = tuple(p2)
    return _pick(instance, p1, one_point_crossover(p1, p2, s), one_point_crossover(p1, p2[::-1], s))


def _csrx(instance, p1, p2, s):
    p2 = tuple(p2)
    return _pick(
        instance,
        p1,
        one_point_crossover(p1, _align(p1, p2, s), s),
        one_point_crossover(p1, _align(p1, p2[::-1], s), s),
    )


def csx_crossover(instance: Instance, p1: Sequence[int], p2: Sequence[int], s: int) -> Tour:
    """One-point crossover after rotating ``p2`` so that ``p2[s] == p1[s]``.

    ``instance`` is unused; it is accepted so that all symmetric operators
    share one signature.
    """
    return one_point_crossover(p1, _align(p1, tuple(p2), s), s)


def rx_crossover(instance: Instance, p1: Sequence[int], p2: Sequence[int], s: int) -> Tour:
    """The shorter of ``p1 x_s p2`` and ``p1 x_s reverse(p2)``."""
    return _rx(instance, p1, p2, s)[0]


def csrx_crossover(instance: Instance, p1: Sequence[int], p2: Sequence[int], s: int) -> Tour:
    """The shorter of CSX against ``p2`` and CSX against ``reverse(p2)``."""
    return _csrx(instance, p1, p2, s)[0]


def inversion_mutation(tour: Sequence[int], i: int, j: int) -> Tour:
    """Reverse the slice ``tour[i..j]`` (inclusive)."""
    t = tuple(tour)
    if not 0 <= i <= j < len(t):
        raise ValueError(f"need 0 <= i <= j < n, got i={i}, j={j}, n={len(t)}")
    return t[:i] + t[i : j + 1][::-1] + t[j + 1 :]


def random_split(n: int, rng: np.random.Generator) -> int:
    return int(rng.integers(n))


def random_segment(n: int, rng: np.random.Generator) -> Tuple[int, int]:
    """Two uniform indices, ordered so that the first is not larger."""
    i, j = int(rng.integers(n)), int(rng.integers(n))
    return (i, j) if i <= j else (j, i)


def random_box_args(n: int, rng: np.random.Generator):
    """Cut points and segment labels for BOX.

    Draws 1..min(n - 1, 7) distinct cut points from 1..n-1 and an independent
    uniform label per segment.
    """
    m = int(rng.integers(1, min(n - 1, BOX_MAX_SPLITS) + 1))
    splits = sorted((rng.choice(n - 1, size=m, replace=False) + 1).tolist())
    labels = [Source(int(x)) for x in rng.integers(3, size=m + 1)]
    return splits, labels


def crossover(
    kind: CrossoverKind,
    instance: Instance,
    p1: Tour,
    p2: Tour,
    best: Tour,
    rng: np.random.Generator,
) -> Tuple[Tour, float]:
    """Apply ``kind`` with freshly drawn cut points. Returns the child and its length."""
    n = len(p1)
    if kind is CrossoverKind.BOX:
        splits, labels = random_box_args(n, rng)
        child = box_crossover(p1, p2, best, splits, labels)
    elif kind is CrossoverKind.OX:
        a, b = random_segment(n, rng)
        child = ox_crossover(p1, p2, a, b)
    else:
        s = random_split(n, rng)
        if kind is CrossoverKind.CSRX:
            return _csrx(instance, p1, p2, s)
        if kind is CrossoverKind.RX:
            return _rx(instance, p1, p2, s)
        if kind is CrossoverKind.CSX:
            child = csx_crossover(instance, p1, p2, s)
        elif kind is CrossoverKind.ONE_POINT:
            child = one_point_crossover(p1, p2, s)
        else:
            raise ValueError(f"unknown crossover {kind!r}")
    return child, tour_length(instance, child)
