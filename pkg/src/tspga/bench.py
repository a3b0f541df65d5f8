"""Multi-seed experiments, summary tables and convergence plots."""

from __future__ import annotations

import configparser
import csv
import io
import json
import logging
import math
import os
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from .ga import GAConfig, RunRecord, run
from .operators import CrossoverKind
from .tour import Instance, Metric
from .tsplib import load_instance, with_metric

log = logging.getLogger(__name__)

SUMMARY_FIELDS = ("instance", "opt", "crossover", "mean", "std", "delta_rel")


@dataclass(frozen=True)
class ExperimentSpec:
    instance_path: str
    crossover_kinds: Tuple[CrossoverKind, ...] = (CrossoverKind.BOX, CrossoverKind.CSRX)
    repetitions: int = 10
    base_seed: int = 0
    population_size: int = 100
    mutation_rate: float = 0.05
    elitism_fraction: float = 0.10
    max_generations: int = 1000
    output_dir: str = "results"
    metric: Optional[Metric] = None  # overrides the file's EDGE_WEIGHT_TYPE
    workers: int = 1

    def __post_init__(self):
        kinds = self.crossover_kinds
        if isinstance(kinds, str):
            kinds = kinds.split(",")
        kinds = tuple(k if isinstance(k, CrossoverKind) else CrossoverKind.parse(k) for k in kinds)
        object.__setattr__(self, "crossover_kinds", kinds)
        if self.metric is not None:
            object.__setattr__(self, "metric", Metric(str(self.metric).upper()))
        if self.repetitions < 1:
            raise ValueError(f"repetitions must be >= 1, got {self.repetitions}")
        if not kinds:
            raise ValueError("no crossover operators given")
        # validates the GA fields early
        self.ga_config(kinds[0], 0)

    def ga_config(self, kind: CrossoverKind, run_index: int) -> GAConfig:
        return GAConfig(
            population_size=self.population_size,
            mutation_rate=self.mutation_rate,
            elitism_fraction=self.elitism_fraction,
            max_generations=self.max_generations,
            crossover=kind,
            seed=self.base_seed + run_index,
        )

    def load_instance(self) -> Instance:
        inst = load_instance(self.instance_path)
        if self.metric is not None and self.metric is not inst.metric:
            inst = with_metric(inst, self.metric)
        return inst


_INT_KEYS = {"repetitions", "base_seed", "population_size", "max_generations", "workers"}
_FLOAT_KEYS = {"mutation_rate", "elitism_fraction"}
_ALIASES = {
    "instance": "instance_path",
    "crossover": "crossover_kinds",
    "crossovers": "crossover_kinds",
    "seed": "base_seed",
    "generations": "max_generations",
    "pop": "population_size",
    "mutation": "mutation_rate",
    "elitism": "elitism_fraction",
    "out": "output_dir",
}


def spec_from_mapping(values: Mapping[str, object], base_dir: Optional[Path] = None) -> ExperimentSpec:
    kwargs = {}
    for key, value in values.items():
        key = _ALIASES.get(key, key)
        if key not in ExperimentSpec.__dataclass_fields__:
            raise ValueError(f"unknown experiment key {key!r}")
        if isinstance(value, str):
            value = value.strip()
            if key in _INT_KEYS:
                value = int(value)
            elif key in _FLOAT_KEYS:
                value = float(value)
        kwargs[key] = value
    if "instance_path" not in kwargs:
        raise ValueError("experiment needs an 'instance'")
    path = str(kwargs["instance_path"])
    if base_dir is not None and not os.path.isabs(path) and (base_dir / path).exists():
        kwargs["instance_path"] = str(base_dir / path)
    return ExperimentSpec(**kwargs)


def read_spec_file(path, overrides: Optional[Mapping[str, object]] = None) -> ExperimentSpec:
    """Read an experiment from a flat ``key = value`` file.

    A leading ``[experiment]`` header is optional. Relative instance paths are
    resolved against the file's directory first. ``overrides`` win over the file.
    """
    path = Path(path)
    text = path.read_text()
    if not text.lstrip().startswith("["):
        text = "[experiment]\n" + text
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    parser.read_string(text, source=str(path))
    values: Dict[str, object] = dict(parser[parser.sections()[0]])
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return spec_from_mapping(values, base_dir=path.parent)


@dataclass(frozen=True)
class AggregateResult:
    instance: str
    crossover: CrossoverKind
    mean_length: float
    std_length: float
    opt: Optional[float]
    relative_error: Optional[float]
    runs: int

    def row(self) -> Dict[str, object]:
        return {
            "instance": self.instance,
            "opt": _num(self.opt),
            "crossover": self.crossover.value,
            "mean": _num(self.mean_length),
            "std": _num(self.std_length),
            "delta_rel": _num(self.relative_error),
        }


def _num(x):
    if x is None:
        return ""
    return repr(float(x))


def aggregate(instance: Instance, kind: CrossoverKind, lengths: Sequence[float]) -> AggregateResult:
    """Mean, sample standard deviation (0 for a single run) and relative error."""
    lengths = sorted(lengths)  # order-independent sums
    mean = math.fsum(lengths) / len(lengths)
    std = statistics.stdev(lengths) if len(lengths) > 1 else 0.0
    opt = instance.known_opt
    rel = (mean - opt) / opt if opt else None
    return AggregateResult(instance.name, kind, mean, std, opt, rel, len(lengths))


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    instance: Instance
    aggregates: List[AggregateResult]
    runs: Dict[CrossoverKind, List[RunRecord]] = field(default_factory=dict)


def _run_job(job):
    instance, config = job
    return run(instance, config)


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    """Run ``repetitions`` seeded GA runs per operator and aggregate them.

    Runs may execute in a process pool; results are always collected in
    run-index order, so the outcome does not depend on ``workers``.
    """
    instance = spec.load_instance()
    jobs = [
        (instance, spec.ga_config(kind, r))
        for kind in spec.crossover_kinds
        for r in range(spec.repetitions)
    ]
    log.info("%s: %d runs of %d generations", instance.name, len(jobs), spec.max_generations)
    if spec.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            records = list(pool.map(_run_job, jobs))
    else:
        records = [_run_job(j) for j in jobs]
    runs: Dict[CrossoverKind, List[RunRecord]] = {}
    for (_, config), rec in zip(jobs, records):
        runs.setdefault(config.crossover, []).append(rec)
    aggregates = [
        aggregate(instance, kind, [r.final_best_length for r in runs[kind]])
        for kind in spec.crossover_kinds
    ]
    return ExperimentResult(spec, instance, aggregates, runs)


def summary_csv(aggregates: Sequence[AggregateResult]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SUMMARY_FIELDS, lineterminator="\n")
    writer.writeheader()
    for a in aggregates:
        writer.writerow(a.row())
    return buf.getvalue()


def summary_json(aggregates: Sequence[AggregateResult]) -> str:
    rows = []
    for a in aggregates:
        d = asdict(a)
        d["crossover"] = a.crossover.value
        rows.append(d)
    return json.dumps(rows, indent=2, sort_keys=True) + "\n"


def load_summary_json(text: str) -> List[AggregateResult]:
    return [
        AggregateResult(**{**d, "crossover": CrossoverKind(d["crossover"])})
        for d in json.loads(text)
    ]


def trace_csv(record: RunRecord) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("generation", "best_length", "mean_length"))
    for g, best, mean in record.per_generation:
        writer.writerow((g, repr(best), repr(mean)))
    return buf.getvalue()


def emit_results(result: ExperimentResult, out_dir, fmt: str = "csv") -> List[Path]:
    """Write the summary table and one trace file per run. Returns the paths written."""
    if not result.aggregates:
        raise ValueError("nothing to write")
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown format {fmt!r}")
    out = Path(out_dir)
    (out / "traces").mkdir(parents=True, exist_ok=True)
    written = []
    summary = out / f"summary.{fmt}"
    summary.write_text(summary_csv(result.aggregates) if fmt == "csv" else summary_json(result.aggregates))
    written.append(summary)
    name = result.instance.name
    for kind, records in result.runs.items():
        for rec in records:
            p = out / "traces" / f"{name}_{kind.value}_seed{rec.seed}.csv"
            p.write_text(trace_csv(rec))
            written.append(p)
    return written


def confidence_band(curves: Sequence[Sequence[float]], confidence: float = 0.95):
    """Per-generation mean and Student-t confidence interval over runs.

    Returns ``(mean, low, high)`` arrays. With a single run the band collapses
    onto the mean.
    """
    a = np.asarray(curves, dtype=float)
    mean = a.mean(axis=0)
    k = a.shape[0]
    if k < 2:
        return mean, mean.copy(), mean.copy()
    sem = a.std(axis=0, ddof=1) / math.sqrt(k)
    half = stats.t.ppf(0.5 + confidence / 2.0, k - 1) * sem
    return mean, mean - half, mean + half


def emit_convergence_plot(
    traces: Mapping[str, Sequence[Sequence[float]]],
    path,
    confidence: float = 0.95,
    title: Optional[str] = None,
) -> Path:
    """SVG of mean best length per generation, one line per operator, with a
    t-based confidence band when an operator has at least two runs."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path = Path(path)
    with matplotlib.rc_context({"svg.hashsalt": "tspga", "svg.fonttype": "path"}):
        fig, ax = plt.subplots(figsize=(8, 4.5))
        for label, curves in traces.items():
            if len(curves) < 2:
                log.warning("%s: fewer than 2 runs, no confidence band", label)
            mean, lo, hi = confidence_band(curves, confidence)
            x = np.arange(len(mean))
            (line,) = ax.plot(x, mean, label=label, linewidth=1.2)
            if len(curves) >= 2:
                ax.fill_between(x, lo, hi, color=line.get_color(), alpha=0.25, linewidth=0)
        ax.set_xlabel("generation")
        ax.set_ylabel("best tour length")
        if title:
            ax.set_title(title)
        ax.legend()
        ax.grid(alpha=0.3)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    return path


def plot_experiment(result: ExperimentResult, path, confidence: float = 0.95) -> Path:
    traces = {k.value: [r.best_lengths for r in recs] for k, recs in result.runs.items()}
    title = f"{result.instance.name}: {result.spec.max_generations} generations, {int(confidence * 100)}% CI"
    return emit_convergence_plot(traces, path, confidence, title)
