"""
Seeded random instances for the property suites: weightings of F_d, C5 and P*,
blowups of F_1..F_5 with minimum degree 5n/14, and dense triangle-free graphs of several families.
Every sampler takes a numpy Generator and draws only integers, so weights stay exact.
"""

import math
from fractions import Fraction
from typing import List, Optional, Tuple

import networkx as nx
import numpy as np

from common.logger import get_logger

from .construction import C5_BALANCE, MIN_DEGREE, PSTAR_BALANCE, FdWeighting
from .errors import InvalidArgumentError
from .fd_family import fd_order, make_fd, make_pstar
from .graph import Graph, Partition, blowup, complete_bipartite, random_triangle_free_flips
from .weighted import WeightFunction

logger = get_logger(__name__)

DEFAULT_SPREAD = 120
MAX_TRIES = 1000
DENSE_FAMILIES = ("complete-bipartite", "random-bipartite", "fd-blowup", "c5-blowup")


def _random_weights(size: int, rng: np.random.Generator, spread: int) -> List[Fraction]:
    draws = [int(x) for x in rng.integers(1, spread + 1, size=size)]
    total = sum(draws)
    return [Fraction(x, total) for x in draws]


def _degrees(g: Graph, w) -> List[Fraction]:
    return [sum((w[u] for u in g.neighbors(v)), Fraction(0)) for v in g.vertices]


def sample_fd_weighting(d: int, rng: np.random.Generator, spread: int = DEFAULT_SPREAD) -> FdWeighting:
    """
    A weighting of F_d with weighted minimum degree at least 5/14.

    The uniform weighting is mixed with a random one, ω = (1 - λ)u + λr, with λ drawn
    below the largest value keeping every degree at least 5/14 (sometimes exactly at it).
    On F_5 the uniform degrees already equal 5/14 and the adjacency matrix is
    invertible, so the uniform weighting is the only one.
    """
    if not 1 <= d <= 5:
        raise InvalidArgumentError(f"Samplers cover 1 <= d <= 5, got {d}")
    g = make_fd(d)
    order = fd_order(d)
    uniform = FdWeighting.uniform(d)
    if d == 5:
        return uniform
    r = _random_weights(order, rng, spread)
    base = _degrees(g, uniform.w)
    drawn = _degrees(g, r)
    # Largest λ with (1 - λ)·base + λ·drawn >= 5/14 at every vertex.
    limit = Fraction(1)
    for b, x in zip(base, drawn):
        if x < MIN_DEGREE:
            limit = min(limit, (b - MIN_DEGREE) / (b - x))
    step = int(rng.integers(1, spread + 1))
    lam = limit * Fraction(step, spread)
    w = tuple((1 - lam) * u + lam * x for u, x in zip(uniform.w, r))
    return FdWeighting(d, w)


def _balanced_base(base: int, eps: Fraction, extra: Fraction, rng: np.random.Generator, spread: int) -> List[Fraction]:
    # Weights within eps of 1/base summing to 1 - extra.
    share = Fraction(1, base)
    for _ in range(MAX_TRIES):
        offsets = [eps * Fraction(int(k), spread) for k in rng.integers(-spread, spread + 1, size=base)]
        shift = (sum(offsets) + extra) / base
        offsets = [e - shift for e in offsets]
        if all(abs(e) <= eps for e in offsets):
            return [share + e for e in offsets]
    raise InvalidArgumentError(f"No balanced weighting found in {MAX_TRIES} tries (eps = {eps})")


def sample_balanced_c5(
    rng: np.random.Generator, eps: Fraction = C5_BALANCE, spread: int = DEFAULT_SPREAD
) -> WeightFunction:
    return WeightFunction(make_fd(2), tuple(_balanced_base(5, Fraction(eps), Fraction(0), rng, spread)))


def sample_balanced_pstar(
    rng: np.random.Generator, eps: Fraction = PSTAR_BALANCE, spread: int = DEFAULT_SPREAD
) -> WeightFunction:
    """
    Base weights within eps of 1/10, star weights in [0, eps].
    """
    eps = Fraction(eps)
    star = make_pstar()
    added = [eps * Fraction(int(k), spread) for k in rng.integers(0, spread + 1, size=len(star.added))]
    base = _balanced_base(star.base.n, eps, sum(added), rng, spread)
    return WeightFunction(star.extension, tuple(base + added))


def _min_degree_ok(d: int, sizes: List[int]) -> bool:
    g = make_fd(d)
    n = sum(sizes)
    return all(14 * sum(sizes[u] for u in g.neighbors(v)) >= 5 * n for v in g.vertices)


def random_blowup_sizes(d: int, max_vertices: int, rng: np.random.Generator) -> List[int]:
    """
    Part sizes for a blowup of F_d on at most `max_vertices` vertices with minimum degree
    at least 5n/14. Falls back to equal parts, which always qualify for d <= 5.
    """
    parts = fd_order(d)
    if parts > max_vertices:
        raise InvalidArgumentError(f"F_{d} needs {parts} vertices, limit is {max_vertices}")
    top = max_vertices // parts
    equal = int(rng.integers(1, top + 1))
    for _ in range(MAX_TRIES):
        sizes = [int(x) for x in rng.integers(1, top + 2, size=parts)]
        if sum(sizes) <= max_vertices and _min_degree_ok(d, sizes):
            return sizes
    logger.debug(f"Equal parts of size {equal} for F_{d}")
    return [equal] * parts


def random_fd_blowup(d: int, max_vertices: int, rng: np.random.Generator) -> Tuple[Graph, Partition]:
    return blowup(make_fd(d), random_blowup_sizes(d, max_vertices, rng))


def _near_balanced_sizes(parts: int, n: int, rng: np.random.Generator) -> List[int]:
    sizes = [n // parts] * parts
    for part in rng.choice(parts, size=n % parts, replace=False):
        sizes[int(part)] += 1
    return sizes


def _dense_fd_degrees(n: int, delta: Fraction) -> List[int]:
    # A balanced blowup of F_d has d/(2(3d-1))·n² edges.
    return [d for d in (3, 4, 5) if fd_order(d) <= n and Fraction(d, 2 * fd_order(d)) >= Fraction(1, 5) - delta]


def dense_family_graph(family: str, n: int, delta: Fraction, rng: np.random.Generator) -> Graph:
    """
    One unperturbed member of a dense triangle-free family on n vertices. "fd-blowup"
    falls back to a C5 blowup when no F_3..F_5 blowup is dense enough for δ.
    """
    if family not in DENSE_FAMILIES:
        raise InvalidArgumentError(f"Unknown dense family {family!r}, expected one of {DENSE_FAMILIES}")
    delta = Fraction(delta)
    if family == "complete-bipartite":
        a = int(rng.integers(n // 3, n - n // 3 + 1))
        return complete_bipartite(a, n - a)
    if family == "random-bipartite":
        a = n // 2
        top = a * (n - a)
        m = int(rng.integers(min(math.ceil((Fraction(1, 5) - delta) * n * n), top), top + 1))
        return Graph.from_networkx(nx.bipartite.gnmk_random_graph(a, n - a, m, seed=int(rng.integers(2**31))))
    if family == "fd-blowup":
        degrees = _dense_fd_degrees(n, delta)
        if degrees:
            d = degrees[int(rng.integers(len(degrees)))]
            return blowup(make_fd(d), _near_balanced_sizes(fd_order(d), n, rng))[0]
    sizes = _near_balanced_sizes(5, n, rng)
    for _ in range(int(rng.integers(0, 3))):
        source, target = (int(x) for x in rng.choice(5, size=2, replace=False))
        if sizes[source] > 1:
            sizes[source] -= 1
            sizes[target] += 1
    return blowup(make_fd(2), sizes)[0]


def random_dense_graph(
    n: int, delta: Fraction, rng: np.random.Generator, family: Optional[str] = None
) -> Graph:
    """
    A triangle-free graph on n vertices with at least (1/5 - δ)n² edges: a member of one
    of DENSE_FAMILIES (drawn at random unless given) with random triangle-free flips,
    relabelled at random.
    """
    delta = Fraction(delta)
    if n < 5:
        raise InvalidArgumentError(f"Dense samples need n >= 5, got {n}")
    for _ in range(MAX_TRIES):
        chosen = family or DENSE_FAMILIES[int(rng.integers(len(DENSE_FAMILIES)))]
        g = dense_family_graph(chosen, n, delta, rng)
        flips = int(rng.integers(0, int(delta * n * n) + 1))
        g, _ = random_triangle_free_flips(g, flips, rng)
        if g.m >= (Fraction(1, 5) - delta) * n * n:
            return g.relabel([int(x) for x in rng.permutation(n)])
    raise InvalidArgumentError(f"No graph with {(Fraction(1, 5) - delta) * n * n} edges found on {n} vertices")
