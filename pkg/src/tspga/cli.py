"""Command line interface: ``tspga solve | bench | verify``.

Exit codes: 0 success, 1 usage error, 2 input-format error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import bench
from .ga import GAConfig, run
from .operators import CrossoverKind
from .tour import Metric, check_tour, tour_length
from .tsplib import TSPLIBError, load_instance, parse_opt_tour, with_metric

EXIT_OK, EXIT_USAGE, EXIT_INPUT = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _crossover(value: str) -> CrossoverKind:
    try:
        return CrossoverKind.parse(value)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _metric(value: str) -> Metric:
    try:
        return Metric(value.upper())
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"unknown metric {value!r}; choose from {[m.value for m in Metric]}"
        ) from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tspga", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="single GA run; prints best length and tour")
    p.add_argument("instance", help=".tsp file or bundled name (att48, eil51, st70)")
    p.add_argument("--crossover", type=_crossover, default=CrossoverKind.CSRX)
    p.add_argument("--pop", type=int, default=100)
    p.add_argument("--mutation", type=float, default=0.05)
    p.add_argument("--elitism", type=float, default=0.10)
    p.add_argument("--generations", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--metric", type=_metric, help="override the file's EDGE_WEIGHT_TYPE")

    p = sub.add_parser("bench", help="multi-seed experiment from a spec file")
    p.add_argument("spec", help="flat key = value experiment file")
    p.add_argument("--out", dest="output_dir")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--plot", action="store_true", help="also write convergence.svg")
    p.add_argument("--confidence", type=float, default=0.95)
    p.add_argument("--instance", dest="instance_path")
    p.add_argument("--crossovers", dest="crossover_kinds")
    p.add_argument("--repetitions", type=int)
    p.add_argument("--seed", dest="base_seed", type=int)
    p.add_argument("--pop", dest="population_size", type=int)
    p.add_argument("--mutation", dest="mutation_rate", type=float)
    p.add_argument("--elitism", dest="elitism_fraction", type=float)
    p.add_argument("--generations", dest="max_generations", type=int)
    p.add_argument("--metric")
    p.add_argument("--workers", type=int)

    p = sub.add_parser("verify", help="print the length of a tour file")
    p.add_argument("instance")
    p.add_argument("tour")
    p.add_argument("--metric", type=_metric)
    return parser


def _load(path, metric):
    inst = load_instance(path)
    return with_metric(inst, metric) if metric is not None else inst


def cmd_solve(args) -> int:
    inst = _load(args.instance, args.metric)
    try:
        config = GAConfig(
            population_size=args.pop,
            mutation_rate=args.mutation,
            elitism_fraction=args.elitism,
            max_generations=args.generations,
            crossover=args.crossover,
            seed=args.seed,
        )
    except ValueError as e:
        raise UsageError(str(e)) from None
    rec = run(inst, config)
    print(f"best length: {rec.final_best_length:g}")
    if inst.known_opt:
        print(f"relative error: {(rec.final_best_length - inst.known_opt) / inst.known_opt:.4%}")
    print("tour: " + " ".join(str(c + 1) for c in rec.final_best))
    return EXIT_OK


def cmd_bench(args) -> int:
    keys = (
        "output_dir", "instance_path", "crossover_kinds", "repetitions", "base_seed",
        "population_size", "mutation_rate", "elitism_fraction", "max_generations",
        "metric", "workers",
    )
    overrides = {k: getattr(args, k) for k in keys}
    if not Path(args.spec).is_file():
        raise FileNotFoundError(f"no such spec file: {args.spec}")
    try:
        spec = bench.read_spec_file(args.spec, overrides)
    except (ValueError, KeyError) as e:
        raise UsageError(str(e)) from None
    result = bench.run_experiment(spec)
    out = Path(spec.output_dir)
    try:
        paths = bench.emit_results(result, out, args.format)
        if args.plot:
            paths.append(bench.plot_experiment(result, out / "convergence.svg", args.confidence))
    except OSError as e:
        raise UsageError(f"cannot write results to {out}: {e}") from None
    sys.stdout.write(bench.summary_csv(result.aggregates))
    logging.getLogger(__name__).info("wrote %d files under %s", len(paths), out)
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = _load(args.instance, args.metric)
    tour = check_tour(parse_opt_tour(args.tour, inst.n).order, inst.n)
    print(f"{tour_length(inst, tour):g}")
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "bench": cmd_bench, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        print(f"tspga: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (TSPLIBError, FileNotFoundError, UnicodeDecodeError) as e:
        print(f"tspga: input error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
