"""
Sparse halves package.
"""

from .approximation import (
    ApproximationWitness,
    CoveringSet,
    check_eps_approximation,
    is_eps_disturbed,
    min_covering_set,
    weighted_c_maximality,
)
from .construction import (
    FdWeighting,
    best_sparse_half_fd,
    c5_uniform_distribution,
    construct_fd_halves,
    pstar_half_families,
    pstar_uniform_distribution,
    sparse_half_min_degree,
)
from .errors import HalvesError
from .fd_family import is_entwined, make_fd, make_petersen, make_pstar, star_extension
from .graph import Graph, Partition, blowup, is_triangle_free, maximality_class, maximum_independent_sets
from .homomorphism import (
    Homomorphism,
    build_disturbed_pair,
    desurject_reduce,
    find_homomorphism,
    surjective_homomorphism_to_fd,
    verify_disturbed,
)
from .lemmas import falsify, lemma8_min_lhs, lemma11_min_lhs, petersen_sum
from .oracle import conjecture_check, fractional_descent, min_half_edges
from .trichotomy import classify_trichotomy, degree_dichotomy, fiber_bounds_check, sum_sq_degree_condition
from .types import DichotomyCase, LemmaTarget, Outcome
from .weighted import Half, HalfDistribution, WeightFunction, edge_mass, lift_half, pushforward, round_half_to_set

__all__ = [
    # Graphs
    "Graph",
    "Partition",
    "blowup",
    "is_triangle_free",
    "maximality_class",
    "maximum_independent_sets",
    # F_d family
    "make_fd",
    "make_petersen",
    "make_pstar",
    "star_extension",
    "is_entwined",
    # Weighted
    "WeightFunction",
    "Half",
    "HalfDistribution",
    "edge_mass",
    "pushforward",
    "lift_half",
    "round_half_to_set",
    # Homomorphisms
    "Homomorphism",
    "find_homomorphism",
    "desurject_reduce",
    "surjective_homomorphism_to_fd",
    "build_disturbed_pair",
    "verify_disturbed",
    # Constructions
    "FdWeighting",
    "construct_fd_halves",
    "best_sparse_half_fd",
    "c5_uniform_distribution",
    "pstar_half_families",
    "pstar_uniform_distribution",
    "sparse_half_min_degree",
    # Approximation
    "ApproximationWitness",
    "CoveringSet",
    "check_eps_approximation",
    "min_covering_set",
    "is_eps_disturbed",
    "weighted_c_maximality",
    "degree_dichotomy",
    "classify_trichotomy",
    "fiber_bounds_check",
    "sum_sq_degree_condition",
    # Lemmas
    "lemma8_min_lhs",
    "lemma11_min_lhs",
    "petersen_sum",
    "falsify",
    # Oracle
    "min_half_edges",
    "conjecture_check",
    "fractional_descent",
    # Types
    "HalvesError",
    "Outcome",
    "DichotomyCase",
    "LemmaTarget",
]
