"""
Text formats and named generators.

Edge list:       "n m", then m lines "u v" (0-based).
Weights / half:  one line "index p/q" per vertex.
Distribution:    "halves k", then per half a line "probability p/q" and its value lines.
Homomorphism:    "n_source n_target", then one line "v image" per source vertex.
Partition:       the homomorphism layout with the block count as target size.

"#" starts a comment anywhere on a line. Malformed text raises UsageError.
"""

import os
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from .errors import HalvesError, UsageError
from .fd_family import make_fd, make_petersen, make_pstar
from .graph import Graph, Partition, blowup, complete_bipartite, cycle
from .homomorphism import Homomorphism
from .rational import format_fraction
from .weighted import Half, HalfDistribution, WeightFunction


def _lines(text: str) -> List[List[str]]:
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    return rows


def _ints(row: Sequence[str], count: int, what: str) -> List[int]:
    if len(row) != count:
        raise UsageError(f"{what}: expected {count} fields, got {' '.join(row)!r}")
    try:
        return [int(x) for x in row]
    except ValueError as e:
        raise UsageError(f"{what}: non-integer field in {' '.join(row)!r}") from e


def _fraction(text: str, what: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"{what}: not a rational number {text!r}") from e


def _read(path: str) -> str:
    try:
        with open(path) as f:
            return f.read()
    except OSError as e:
        raise UsageError(f"Cannot read {path}: {e}") from e


def parse_edge_list(text: str) -> Graph:
    rows = _lines(text)
    if not rows:
        raise UsageError("Edge list is empty")
    n, m = _ints(rows[0], 2, "header")
    if len(rows) - 1 != m:
        raise UsageError(f"Header announces {m} edges, found {len(rows) - 1}")
    edges = [_ints(row, 2, "edge") for row in rows[1:]]
    try:
        return Graph.from_edges(n, edges)
    except HalvesError as e:
        raise UsageError(f"Malformed edge list: {e}") from e


def format_edge_list(g: Graph) -> str:
    return "\n".join([f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.sorted_edges()]) + "\n"


def read_edge_list(path: str) -> Graph:
    return parse_edge_list(_read(path))


def write_edge_list(g: Graph, path: str):
    with open(path, "w") as f:
        f.write(format_edge_list(g))


def _values(rows: Sequence[Sequence[str]], n: int, what: str) -> Tuple[Fraction, ...]:
    values = [None] * n
    for row in rows:
        if len(row) != 2:
            raise UsageError(f"{what}: expected 'index p/q', got {' '.join(row)!r}")
        index = _ints(row[:1], 1, what)[0]
        if not 0 <= index < n:
            raise UsageError(f"{what}: index {index} outside 0..{n - 1}")
        if values[index] is not None:
            raise UsageError(f"{what}: index {index} given twice")
        values[index] = _fraction(row[1], what)
    missing = [v for v, value in enumerate(values) if value is None]
    if missing:
        raise UsageError(f"{what}: no value for vertices {missing}")
    return tuple(values)


def parse_weights(text: str, g: Graph) -> WeightFunction:
    values = _values(_lines(text), g.n, "weights")
    try:
        return WeightFunction(g, values)
    except HalvesError as e:
        raise UsageError(f"Malformed weights: {e}") from e


def format_values(values: Iterable[Fraction]) -> str:
    return "".join(f"{v} {format_fraction(value)}\n" for v, value in enumerate(values))


def parse_distribution(text: str, wf: WeightFunction) -> HalfDistribution:
    rows = _lines(text)
    if not rows or rows[0][0] != "halves":
        raise UsageError("Distribution must start with 'halves k'")
    k = _ints(rows[0][1:], 1, "distribution header")[0]
    n = wf.graph.n
    expected = 1 + k * (n + 1)
    if len(rows) != expected:
        raise UsageError(f"Distribution of {k} halves on {n} vertices needs {expected} lines, got {len(rows)}")
    halves = []
    for t in range(k):
        start = 1 + t * (n + 1)
        head = rows[start]
        if len(head) != 2 or head[0] != "probability":
            raise UsageError(f"Half {t}: expected 'probability p/q', got {' '.join(head)!r}")
        probability = _fraction(head[1], f"half {t}")
        try:
            halves.append((Half(wf, _values(rows[start + 1 : start + 1 + n], n, f"half {t}")), probability))
        except HalvesError as e:
            raise UsageError(f"Half {t}: {e}") from e
    try:
        return HalfDistribution(tuple(halves))
    except HalvesError as e:
        raise UsageError(f"Malformed distribution: {e}") from e


def format_distribution(dist: HalfDistribution) -> str:
    parts = [f"halves {len(dist.halves)}\n"]
    for half, probability in dist.halves:
        parts.append(f"probability {format_fraction(probability)}\n")
        parts.append(format_values(half.s))
    return "".join(parts)


def _parse_map(text: str, what: str) -> Tuple[int, int, Tuple[int, ...]]:
    rows = _lines(text)
    if not rows:
        raise UsageError(f"{what} is empty")
    n, k = _ints(rows[0], 2, f"{what} header")
    images = [None] * n
    for row in rows[1:]:
        v, t = _ints(row, 2, what)
        if not 0 <= v < n or not 0 <= t < k:
            raise UsageError(f"{what}: pair ({v}, {t}) outside {n} x {k}")
        if images[v] is not None:
            raise UsageError(f"{what}: vertex {v} given twice")
        images[v] = t
    missing = [v for v, t in enumerate(images) if t is None]
    if missing:
        raise UsageError(f"{what}: no image for vertices {missing}")
    return n, k, tuple(images)


def parse_homomorphism(text: str, source: Graph, target: Graph) -> Homomorphism:
    n, k, images = _parse_map(text, "homomorphism")
    if (n, k) != (source.n, target.n):
        raise UsageError(f"Homomorphism header {n} {k} does not match graphs on {source.n} and {target.n} vertices")
    return Homomorphism(source, target, images)


def format_homomorphism(phi: Homomorphism) -> str:
    return f"{phi.source.n} {phi.target.n}\n" + "".join(f"{v} {t}\n" for v, t in enumerate(phi.map))


def parse_partition(text: str) -> Partition:
    _, k, images = _parse_map(text, "partition")
    return Partition.from_assignment(images, k)


def read_partition(path: str) -> Partition:
    return parse_partition(_read(path))


def _sizes(text: str, parts: int) -> List[int]:
    try:
        sizes = [int(x) for x in text.split(",")]
    except ValueError as e:
        raise UsageError(f"Bad part sizes {text!r}") from e
    return sizes * parts if len(sizes) == 1 else sizes


def generate(name: str) -> Graph:
    """
    Named graphs: fd:<d>, c5, k2, petersen, pstar, cycle:<n>, kbip:<a>,<b>,
    blowup:<name>:<sizes> (one size broadcasts to every part).
    """
    try:
        if name == "c5":
            return make_fd(2)
        if name == "k2":
            return make_fd(1)
        if name == "petersen":
            return make_petersen()
        if name == "pstar":
            return make_pstar().extension
        kind, _, rest = name.partition(":")
        if kind == "fd":
            return make_fd(int(rest))
        if kind == "cycle":
            return cycle(int(rest))
        if kind == "kbip":
            a, b = (int(x) for x in rest.split(","))
            return complete_bipartite(a, b)
        if kind == "blowup":
            base_name, _, sizes = rest.rpartition(":")
            base = generate(base_name)
            return blowup(base, _sizes(sizes, base.n))[0]
    except UsageError:
        raise
    except (ValueError, HalvesError) as e:
        raise UsageError(f"Bad generator {name!r}: {e}") from e
    raise UsageError(f"Unknown generator {name!r}")


def load_graph(argument: str) -> Graph:
    """
    An edge-list file if the path exists, a generator name otherwise.
    """
    if os.path.isfile(argument):
        return read_edge_list(argument)
    return generate(argument)
