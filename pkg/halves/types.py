"""
Type definitions.
"""

from enum import Enum


class Outcome(str, Enum):
    """
    Outcomes of the C5 trichotomy, named by the certificate each one carries.
    approximated:
        (i) the graph is close to a blowup of C5 (an ApproximationWitness).
    high_degree:
        (ii) many vertices of degree well above 2n/5 (a vertex set).
    near_bipartite:
        (iii) a few edges removed leave a bipartite graph (an edge set).
    """

    approximated = "i"
    high_degree = "ii"
    near_bipartite = "iii"


class DichotomyCase(int, Enum):
    """
    many_high:
        at least δn vertices have degree at least (2/5 + δ)n.
    few_low:
        at most 2√δn vertices have degree at most (2/5 − 2√δ)n.
    """

    many_high = 1
    few_low = 2


class LemmaTarget(str, Enum):
    """
    Inequalities the falsification search can attack.
    """

    cycle8 = "8cycle"
    cycle11 = "11cycle"
    petersen = "petersen"
    c5jensen = "c5jensen"
    cycle8_window = "8cycle-window"
    cycle8_pairs = "8cycle-pairs"


class HalfMethod(str, Enum):
    pipeline = "pipeline"
    oracle = "oracle"
    both = "both"


class OracleMode(str, Enum):
    """
    exhaustive:
        every ⌊n/2⌋-subset in lexicographic order.
    branch:
        branch and bound with an edge-count lower bound.
    """

    exhaustive = "exhaustive"
    branch = "branch"
