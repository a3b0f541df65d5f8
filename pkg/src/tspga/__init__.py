"""Genetic algorithms for the symmetric TSP with symmetry-aware crossover operators."""

from .ga import GAConfig, RunRecord, run
from .operators import (
    CrossoverKind,
    box_crossover,
    csrx_crossover,
    csx_crossover,
    inversion_mutation,
    one_point_crossover,
    ox_crossover,
    rx_crossover,
)
from .tour import (
    Instance,
    Metric,
    canonicalize,
    circular_shift,
    equivalent,
    fitness,
    random_tour,
    reverse,
    tour_length,
)
from .tsplib import load_bundled, load_instance, parse_instance, parse_opt_tour

__version__ = "0.1.0"
