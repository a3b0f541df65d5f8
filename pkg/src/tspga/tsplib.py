"""Reading and writing TSPLIB files.

Only what the benchmarks need is supported: ``TYPE: TSP`` instances with
``NODE_COORD_SECTION`` under ``EUC_2D`` or ``ATT`` distances, and
``.opt.tour`` files. Node ids are 1-based in the files and 0-based here.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass
from importlib import resources
from typing import IO, List, Optional, Tuple, Union

from .tour import Instance, Metric, Tour, tour_length

Source = Union[str, bytes, os.PathLike, IO]

SUPPORTED_METRICS = (Metric.EUC_2D, Metric.ATT)

# instances shipped in tspga/data together with their TSPLIB optimal tours
BUNDLED = ("att48", "eil51", "st70")


class TSPLIBError(ValueError):
    """Malformed TSPLIB input."""


class UnsupportedFormatError(TSPLIBError):
    """Well-formed TSPLIB input that this package deliberately does not handle."""


@dataclass(frozen=True)
class RawInstance:
    name: str
    dimension: int
    edge_weight_type: Metric
    coords: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        if self.dimension < 3:
            raise TSPLIBError(f"DIMENSION must be >= 3, got {self.dimension}")
        if len(self.coords) != self.dimension:
            raise TSPLIBError(
                f"{len(self.coords)} coordinates for DIMENSION {self.dimension}"
            )

    def to_instance(self, known_opt: Optional[float] = None) -> Instance:
        inst = Instance(self.name, self.coords, self.edge_weight_type, known_opt)
        if known_opt is None:
            inst = with_metric(inst, inst.metric)
        return inst


@dataclass(frozen=True)
class OptTour:
    instance_name: str
    order: Tour


def _read_text(source: Source) -> str:
    if isinstance(source, bytes):
        return source.decode("ascii")
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="ascii") as f:
            return f.read()
    data = source.read()
    return data.decode("ascii") if isinstance(data, bytes) else data


def _split_header(line: str) -> Tuple[str, str]:
    if ":" in line:
        key, value = line.split(":", 1)
        return key.strip().upper(), value.strip()
    key, _, value = line.partition(" ")
    return key.strip().upper(), value.strip()


_HEADER_KEYS = {
    "NAME", "TYPE", "COMMENT", "DIMENSION", "EDGE_WEIGHT_TYPE", "EDGE_WEIGHT_FORMAT",
    "EDGE_DATA_FORMAT", "NODE_COORD_TYPE", "DISPLAY_DATA_TYPE", "CAPACITY",
}


def parse_instance(source: Source) -> RawInstance:
    """Parse a TSPLIB ``.tsp`` file from a path, bytes, or an open stream."""
    lines = _read_text(source).splitlines()
    header = {}
    coords: List[Tuple[float, float]] = []
    ids: List[int] = []
    in_coords = False
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line:
            continue
        if line.upper() == "EOF":
            break
        if in_coords:
            parts = line.split()
            if len(parts) != 3:
                raise TSPLIBError(f"line {lineno}: expected '<id> <x> <y>', got {line!r}")
            try:
                ids.append(int(parts[0]))
                coords.append((float(parts[1]), float(parts[2])))
            except ValueError:
                raise TSPLIBError(f"line {lineno}: bad coordinate row {line!r}") from None
            continue
        key, value = _split_header(line)
        if key == "NODE_COORD_SECTION":
            in_coords = True
        elif key.endswith("_SECTION"):
            raise UnsupportedFormatError(f"section {key} is not supported")
        elif key in _HEADER_KEYS:
            header[key] = value
        else:
            raise TSPLIBError(f"line {lineno}: unknown header keyword {key!r}")

    if header.get("TYPE", "TSP").upper() != "TSP":
        raise UnsupportedFormatError(f"problem type {header['TYPE']} is not supported")
    ewt = header.get("EDGE_WEIGHT_TYPE", "").upper()
    if ewt not in {m.value for m in SUPPORTED_METRICS}:
        raise UnsupportedFormatError(f"EDGE_WEIGHT_TYPE {ewt or '<missing>'} is not supported")
    for key in ("NAME", "DIMENSION"):
        if key not in header:
            raise TSPLIBError(f"missing {key}")
    if not in_coords:
        raise TSPLIBError("missing NODE_COORD_SECTION")
    try:
        dimension = int(header["DIMENSION"])
    except ValueError:
        raise TSPLIBError(f"bad DIMENSION {header['DIMENSION']!r}") from None
    if len(coords) != dimension:
        raise TSPLIBError(f"{len(coords)} coordinates for DIMENSION {dimension}")
    if sorted(ids) != list(range(1, dimension + 1)):
        raise TSPLIBError("node ids must be 1..DIMENSION, each exactly once")
    ordered = [c for _, c in sorted(zip(ids, coords))]
    return RawInstance(header["NAME"], dimension, Metric(ewt), tuple(ordered))


def parse_opt_tour(source: Source, dimension: Optional[int] = None) -> OptTour:
    """Parse a TSPLIB ``.opt.tour`` file.

    Entries in TOUR_SECTION may be spread over lines in any way. The section
    must end with ``-1``. Without an explicit ``dimension`` the DIMENSION
    header (or the entry count) decides the range of valid ids.
    """
    tokens: List[str] = []
    name = ""
    header_dim = None
    in_tour = False
    terminated = False
    for raw in _read_text(source).splitlines():
        line = raw.strip()
        if not line:
            continue
        if not in_tour:
            key, value = _split_header(line)
            if key == "TOUR_SECTION":
                in_tour = True
            elif key == "NAME":
                name = value
            elif key == "DIMENSION":
                header_dim = int(value)
            elif key == "EOF":
                break
            continue
        if line.upper() == "EOF":
            break
        for tok in line.split():
            if tok == "-1":
                terminated = True
                break
            tokens.append(tok)
        if terminated:
            break
    if not in_tour:
        raise TSPLIBError("missing TOUR_SECTION")
    if not terminated:
        raise TSPLIBError("TOUR_SECTION not terminated by -1")
    try:
        ids = [int(t) for t in tokens]
    except ValueError:
        raise TSPLIBError("non-integer entry in TOUR_SECTION") from None
    n = dimension or header_dim or len(ids)
    bad = [i for i in ids if not 1 <= i <= n]
    if bad:
        raise TSPLIBError(f"node ids out of range 1..{n}: {bad[:5]}")
    if len(set(ids)) != len(ids):
        raise TSPLIBError("duplicate node ids in TOUR_SECTION")
    if len(ids) != n:
        raise TSPLIBError(f"tour visits {len(ids)} of {n} nodes")
    if name.endswith(".opt.tour"):
        name = name[: -len(".opt.tour")]
    return OptTour(name, tuple(i - 1 for i in ids))


def _fmt(x: float) -> str:
    return str(int(x)) if x.is_integer() else repr(x)


def render_instance(raw: RawInstance) -> str:
    out = io.StringIO()
    out.write(f"NAME : {raw.name}\n")
    out.write("TYPE : TSP\n")
    out.write(f"DIMENSION : {raw.dimension}\n")
    out.write(f"EDGE_WEIGHT_TYPE : {raw.edge_weight_type.value}\n")
    out.write("NODE_COORD_SECTION\n")
    for i, (x, y) in enumerate(raw.coords, 1):
        out.write(f"{i} {_fmt(x)} {_fmt(y)}\n")
    out.write("EOF\n")
    return out.getvalue()


def render_tour(name: str, tour: Tour) -> str:
    body = "".join(f"{c + 1}\n" for c in tour)
    return (
        f"NAME : {name}.opt.tour\nTYPE : TOUR\nDIMENSION : {len(tour)}\n"
        f"TOUR_SECTION\n{body}-1\nEOF\n"
    )


def _bundled(filename: str) -> bytes:
    return resources.files("tspga").joinpath("data", filename).read_bytes()


def _load_bundled_raw(name: str) -> Tuple[RawInstance, Tour]:
    if name not in BUNDLED:
        raise KeyError(f"no bundled instance {name!r}; have {', '.join(BUNDLED)}")
    raw = parse_instance(_bundled(f"{name}.tsp"))
    return raw, parse_opt_tour(_bundled(f"{name}.opt.tour"), raw.dimension).order


def load_bundled(name: str, metric: Optional[Metric] = None) -> Tuple[Instance, Tour]:
    """The bundled instance ``name`` (att48, eil51, st70) and its optimal tour.

    ``metric`` replaces the file's EDGE_WEIGHT_TYPE; ``known_opt`` is the
    length of the optimal tour under the metric actually used.
    """
    raw, order = _load_bundled_raw(name)
    metric = Metric(metric or raw.edge_weight_type)
    inst = Instance(raw.name, raw.coords, metric)
    return Instance(raw.name, raw.coords, metric, tour_length(inst, order)), order


def with_metric(instance: Instance, metric: Metric) -> Instance:
    """The same points under ``metric``.

    If the points are those of a bundled instance, ``known_opt`` is set to the
    length of its TSPLIB optimal tour under ``metric``; otherwise it is kept
    only when the metric is unchanged.
    """
    metric = Metric(metric)
    if instance.name in BUNDLED:
        raw, order = _load_bundled_raw(instance.name)
        if raw.coords == instance.points:
            return load_bundled(instance.name, metric)[0]
    opt = instance.known_opt if metric is instance.metric else None
    return Instance(instance.name, instance.points, metric, opt)


def load_instance(path_or_name: Union[str, os.PathLike]) -> Instance:
    """Load a ``.tsp`` file, or a bundled instance by bare name."""
    if isinstance(path_or_name, str) and path_or_name in BUNDLED and not os.path.exists(path_or_name):
        return load_bundled(path_or_name)[0]
    return parse_instance(path_or_name).to_instance()
