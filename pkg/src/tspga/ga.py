"""Generational GA with elitism, roulette selection and inversion mutation.

Every run draws from a single ``numpy.random.Generator`` backed by PCG64 and
seeded with ``GAConfig.seed``. Each offspring consumes random numbers in the
same order: two parent selections, the crossover cut points, the mutation
coin, and (if the coin hits) the two inversion indices. A run is therefore
a pure function of the instance and the config.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from itertools import accumulate
from typing import List, Optional, Tuple

import numpy as np

from .operators import CrossoverKind, crossover, inversion_mutation, random_segment
from .tour import Instance, Tour, random_tour, tour_length

# keeps the worst individual selectable when all lengths are equal
SELECTION_DELTA = 1e-9


@dataclass(frozen=True)
class GAConfig:
    population_size: int = 100
    mutation_rate: float = 0.05
    elitism_fraction: float = 0.10
    max_generations: int = 1000
    crossover: CrossoverKind = CrossoverKind.CSRX
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "crossover", CrossoverKind(self.crossover))
        if self.population_size < 2:
            raise ValueError(f"population_size must be >= 2, got {self.population_size}")
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ValueError(f"mutation_rate must be in [0, 1], got {self.mutation_rate}")
        if not 0.0 <= self.elitism_fraction <= 1.0:
            raise ValueError(f"elitism_fraction must be in [0, 1], got {self.elitism_fraction}")
        if self.n_elites >= self.population_size:
            raise ValueError("elitism leaves no room for offspring")
        if self.max_generations < 0:
            raise ValueError(f"max_generations must be >= 0, got {self.max_generations}")

    @property
    def n_elites(self) -> int:
        # tolerance for products like 0.29 * 100 == 28.999999999999996
        return int(math.floor(self.elitism_fraction * self.population_size + 1e-9))


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


@dataclass
class Population:
    individuals: List[Tour]
    lengths: List[float]
    best_ever: Tour
    best_ever_length: float
    _cum_weights: Optional[List[float]] = field(default=None, repr=False)

    @classmethod
    def from_tours(cls, instance: Instance, tours, best: Optional[Tuple[Tour, float]] = None):
        tours = list(tours)
        lengths = [tour_length(instance, t) for t in tours]
        i = min(range(len(tours)), key=lambda k: (lengths[k], k))
        if best is None or lengths[i] < best[1]:
            best = (tours[i], lengths[i])
        return cls(tours, lengths, best[0], best[1])

    def __len__(self) -> int:
        return len(self.individuals)

    @property
    def cum_weights(self) -> List[float]:
        """Cumulative roulette weights ``L_max - L_i + eps``.

        ``eps = (L_max - L_min) / size + SELECTION_DELTA`` gives the worst
        individual a small but non-zero chance.
        """
        if self._cum_weights is None:
            hi, lo = max(self.lengths), min(self.lengths)
            eps = (hi - lo) / len(self.lengths) + SELECTION_DELTA
            self._cum_weights = list(accumulate(hi - x + eps for x in self.lengths))
        return self._cum_weights

    def selection_probabilities(self) -> np.ndarray:
        w = np.diff(self.cum_weights, prepend=0.0)
        return w / w.sum()

    def best(self) -> Tuple[Tour, float]:
        i = min(range(len(self)), key=lambda k: (self.lengths[k], k))
        return self.individuals[i], self.lengths[i]


@dataclass
class RunRecord:
    per_generation: List[Tuple[int, float, float]]  # (generation, best, mean)
    final_best: Tour
    final_best_length: float
    seed: int

    @property
    def best_lengths(self) -> List[float]:
        return [b for _, b, _ in self.per_generation]


def init_population(instance: Instance, config: GAConfig, rng: np.random.Generator) -> Population:
    tours = [random_tour(instance.n, rng) for _ in range(config.population_size)]
    return Population.from_tours(instance, tours)


def select_parent(population: Population, rng: np.random.Generator) -> Tour:
    cum = population.cum_weights
    i = bisect_right(cum, rng.random() * cum[-1])
    return population.individuals[min(i, len(cum) - 1)]


def step(
    instance: Instance, population: Population, config: GAConfig, rng: np.random.Generator
) -> Population:
    """Produce the next generation.

    The shortest ``n_elites`` tours are copied unchanged (ties go to the lower
    index). Every other slot gets one child of two roulette-selected parents.
    The child is inversion-mutated with probability ``mutation_rate``.
    """
    size = len(population)
    order = sorted(range(size), key=lambda k: (population.lengths[k], k))
    elites = order[: config.n_elites]
    tours = [population.individuals[k] for k in elites]
    lengths = [population.lengths[k] for k in elites]
    best = population.best_ever
    n = instance.n
    for _ in range(size - len(elites)):
        p1 = select_parent(population, rng)
        p2 = select_parent(population, rng)
        child, length = crossover(config.crossover, instance, p1, p2, best, rng)
        if rng.random() < config.mutation_rate:
            i, j = random_segment(n, rng)
            child = inversion_mutation(child, i, j)
            length = tour_length(instance, child)
        tours.append(child)
        lengths.append(length)
    nxt = Population(tours, lengths, population.best_ever, population.best_ever_length)
    t, length = nxt.best()
    if length < nxt.best_ever_length:
        nxt.best_ever, nxt.best_ever_length = t, length
    return nxt


def _stats(population: Population, generation: int) -> Tuple[int, float, float]:
    return generation, min(population.lengths), math.fsum(population.lengths) / len(population)


def run(instance: Instance, config: GAConfig) -> RunRecord:
    """Evolve for ``config.max_generations`` generations.

    ``per_generation`` holds the best and mean length of generation 0 (the
    random initial population) and of every later generation.
    """
    rng = make_rng(config.seed)
    population = init_population(instance, config, rng)
    trace = [_stats(population, 0)]
    for g in range(1, config.max_generations + 1):
        population = step(instance, population, config, rng)
        trace.append(_stats(population, g))
    return RunRecord(trace, population.best_ever, population.best_ever_length, config.seed)
