import math
from collections import Counter
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from tspga.tour import (
    Instance,
    Metric,
    canonicalize,
    check_tour,
    circular_shift,
    distance,
    equivalent,
    fitness,
    random_tour,
    reverse,
    tour_length,
)

from conftest import random_instance


def images(t):
    """All rotations of t and of its reversal, by index arithmetic."""
    n = len(t)
    out = []
    for seq in (list(t), list(t)[::-1]):
        for k in range(n):
            out.append(tuple(seq[(i + k) % n] for i in range(n)))
    return out


def test_square_length(square):
    assert tour_length(square, (0, 1, 2, 3)) == 4.0
    assert fitness(square, (0, 1, 2, 3)) == -4.0
    assert tour_length(square, (0, 2, 1, 3)) == pytest.approx(2 + 2 * math.sqrt(2))


@pytest.mark.parametrize("name, opt", [("eil51", 426), ("st70", 675)])
def test_euc2d_optimal_tours(name, opt, request):
    inst, order = request.getfixturevalue(name)
    assert tour_length(inst, order) == opt
    assert fitness(inst, order) == -opt


def test_att_distance_rule():
    # r = sqrt((dx^2 + dy^2) / 10): 10 -> sqrt(10)=3.16 rounds to 3 < r, so 4
    assert distance(Metric.ATT, (0, 0), (10, 0)) == 4.0
    # r = 10 exactly, no bump
    assert distance(Metric.ATT, (0, 0), (0, math.sqrt(1000))) == 10.0
    assert distance(Metric.EUC_2D, (0, 0), (1, 1)) == 1.0  # 1.414 -> 1
    assert distance(Metric.EUC_2D, (0, 0), (1.5, 2)) == 3.0  # 2.5 -> 3
    assert distance(Metric.MANHATTAN, (0, 0), (1, -2)) == 3.0


def test_distance_table_is_symmetric(eil51):
    inst, _ = eil51
    d = inst.dist
    assert (d == d.T).all() and (np.diag(d) == 0).all()
    for i, j in [(0, 1), (10, 40), (50, 3)]:
        assert d[i, j] == distance(inst.metric, inst.points[i], inst.points[j])
    with pytest.raises(ValueError):
        d[0, 1] = 1.0


def test_instance_needs_three_cities():
    with pytest.raises(ValueError):
        Instance("x", [(0, 0), (1, 1)], Metric.EUCLIDEAN)


def test_check_tour():
    assert check_tour([2, 0, 1], 3) == (2, 0, 1)
    for bad in ([0, 1], [0, 1, 1], [0, 1, 3]):
        with pytest.raises(ValueError):
            check_tour(bad, 3)


def test_circular_shift_examples():
    t = (0, 1, 2, 3, 4)
    assert circular_shift(t, 2) == (2, 3, 4, 0, 1)
    assert circular_shift(t, 0) == t
    for k in range(5):
        assert circular_shift(circular_shift(t, k), 5 - k) == t


def test_reverse_examples(eil51):
    assert reverse((0, 1, 2, 3)) == (3, 2, 1, 0)
    assert reverse(reverse((4, 2, 0, 1, 3))) == (4, 2, 0, 1, 3)
    inst, _ = eil51
    rng = np.random.default_rng(5)
    for _ in range(20):
        t = random_tour(inst.n, rng)
        assert tour_length(inst, reverse(t)) == tour_length(inst, t)


def test_canonicalize_examples():
    assert canonicalize((2, 3, 4, 0, 1)) == (0, 1, 2, 3, 4)
    assert canonicalize((0, 4, 3, 2, 1)) == (0, 1, 2, 3, 4)


def test_canonicalize_exhaustive_n5():
    for p in permutations(range(5)):
        reps = {canonicalize(q) for q in images(p)}
        assert len(reps) == 1
        (c,) = reps
        assert c in images(p)
        assert c[0] == 0 and c[1] < c[-1]


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7, 8])
def test_class_count_matches_enumeration(n):
    # brute force: group all n! permutations by their image sets
    classes = {frozenset(images(p)) for p in permutations(range(n))}
    assert len(classes) == math.factorial(n - 1) // 2
    assert len({canonicalize(p) for p in permutations(range(n))}) == len(classes)


def test_equivalent_examples():
    t = (0, 1, 2, 3, 4)
    assert (0, 2, 1, 3, 4) not in images(t)
    assert not equivalent(t, (0, 2, 1, 3, 4))
    for k in range(5):
        assert equivalent(t, circular_shift(t, k))
        assert equivalent(t, reverse(circular_shift(t, k)))
    with pytest.raises(ValueError):
        equivalent((0, 1, 2), (0, 1, 2, 3))


def test_random_tour_examples():
    rng = np.random.default_rng(7)
    t = random_tour(3, rng)
    assert sorted(t) == [0, 1, 2]
    assert random_tour(3, np.random.default_rng(7)) == t
    with pytest.raises(ValueError):
        random_tour(2, rng)


def test_random_tour_uniform():
    rng = np.random.default_rng(12345)
    draws = 10_000
    counts = Counter(random_tour(4, rng) for _ in range(draws))
    assert len(counts) == 24
    p = 1 / 24
    sigma = math.sqrt(p * (1 - p) / draws)
    for c in counts.values():
        assert abs(c / draws - p) <= 3 * sigma
    assert stats.chisquare(list(counts.values())).pvalue > 1e-3


tours = st.integers(3, 30).flatmap(lambda n: st.permutations(list(range(n))))


@settings(max_examples=200, deadline=None)
@given(tours, st.integers(0, 10_000), st.sampled_from(list(Metric)))
def test_length_invariant_under_symmetries(t, seed, metric):
    inst = random_instance(len(t), seed, metric)
    base = tour_length(inst, t)
    for q in images(t):
        # exact, also for the real-valued metrics (fsum is order independent)
        assert tour_length(inst, q) == base


@settings(max_examples=200, deadline=None)
@given(tours, st.integers(0, 100))
def test_canonicalize_idempotent_and_class_function(t, k):
    c = canonicalize(t)
    assert canonicalize(c) == c
    assert canonicalize(circular_shift(t, k)) == c
    assert canonicalize(reverse(t)) == c
    assert sorted(c) == sorted(t)


@settings(max_examples=100, deadline=None)
@given(st.integers(3, 9).flatmap(lambda n: st.tuples(*[st.permutations(list(range(n)))] * 3)))
def test_equivalent_is_equivalence_relation(abc):
    a, b, c = abc
    assert equivalent(a, a)
    assert equivalent(a, b) == equivalent(b, a)
    assert equivalent(a, b) == (tuple(b) in images(a))
    if equivalent(a, b) and equivalent(b, c):
        assert equivalent(a, c)
    # transitivity on a non-trivial chain
    b2 = reverse(circular_shift(a, 2))
    c2 = circular_shift(b2, 1)
    assert equivalent(a, b2) and equivalent(b2, c2) and equivalent(a, c2)
