"""Exact solvers for tiny instances, used as test oracles."""

from __future__ import annotations

import math
from itertools import permutations
from typing import Tuple

from .tour import Instance, Tour, tour_length

MAX_BRUTE_FORCE_N = 10


def brute_force_optimum(instance: Instance) -> Tuple[Tour, float]:
    """Shortest tour by enumerating one tour per shift/reversal class.

    City 0 is fixed first and only orders with ``order[1] < order[-1]`` are
    visited, i.e. (n-1)!/2 tours. Refuses ``n > 10``.
    """
    n = instance.n
    if n > MAX_BRUTE_FORCE_N:
        raise ValueError(f"brute force refused for n={n} > {MAX_BRUTE_FORCE_N}")
    best, best_len = None, math.inf
    for rest in permutations(range(1, n)):
        if rest[0] > rest[-1]:
            continue
        t = (0,) + rest
        length = tour_length(instance, t)
        if length < best_len:
            best, best_len = t, length
    return best, best_len


def held_karp(instance: Instance) -> Tuple[Tour, float]:
    """Held-Karp dynamic program over subsets, O(2^n n^2)."""
    n = instance.n
    d = instance.rows
    full = 1 << (n - 1)  # subsets of cities 1..n-1; bit k-1 is city k
    inf = math.inf
    cost = [[inf] * n for _ in range(full)]
    parent = [[-1] * n for _ in range(full)]
    for k in range(1, n):
        cost[1 << (k - 1)][k] = d[0][k]
    for mask in range(1, full):
        row = cost[mask]
        for last in range(1, n):
            c = row[last]
            if c == inf:
                continue
            for nxt in range(1, n):
                bit = 1 << (nxt - 1)
                if mask & bit:
                    continue
                cand = c + d[last][nxt]
                if cand < cost[mask | bit][nxt]:
                    cost[mask | bit][nxt] = cand
                    parent[mask | bit][nxt] = last
    mask = full - 1
    last = min(range(1, n), key=lambda k: cost[mask][k] + d[k][0])
    path = []
    while last != -1:
        path.append(last)
        mask, last = mask ^ (1 << (last - 1)), parent[mask][last]
    tour = (0,) + tuple(reversed(path))
    return tour, tour_length(instance, tour)
