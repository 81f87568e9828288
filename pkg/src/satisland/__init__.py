"""Island extraction for CNF formulas and the brute-force checks behind it."""

from .cnf_core import (
    TAUTOLOGY,
    Clause,
    DimacsError,
    EmptyClauseError,
    Formula,
    Literal,
    State,
    evaluate,
    hamming_distance,
    neighbors,
    parse_dimacs,
    project,
    read_dimacs,
    standardize_clause,
    to_dimacs,
)
from .confined_search import confined_local_search, island_neighborhood_size, on_island_neighbors
from .greedy_extract import Heuristic, best_literal, heuristic_score, island_extract, literal_counts
from .island_theory import (
    GuardExceeded,
    VariableOrdering,
    enumerate_solutions,
    exists_primal_ordering,
    is_compositional,
    is_island,
    is_non_conflicting,
    is_primal_non_conflicting,
    primal_literal,
    primal_literal_set,
    seed_solution,
)
from .oracle_harness import count_solutions, island_space_size, run_suite, stats_report

__version__ = "0.1.0"

__all__ = [
    "best_literal",
    "Clause",
    "confined_local_search",
    "count_solutions",
    "DimacsError",
    "EmptyClauseError",
    "enumerate_solutions",
    "evaluate",
    "exists_primal_ordering",
    "Formula",
    "GuardExceeded",
    "hamming_distance",
    "Heuristic",
    "heuristic_score",
    "is_compositional",
    "is_island",
    "is_non_conflicting",
    "is_primal_non_conflicting",
    "island_extract",
    "island_neighborhood_size",
    "island_space_size",
    "Literal",
    "literal_counts",
    "neighbors",
    "on_island_neighbors",
    "parse_dimacs",
    "primal_literal",
    "primal_literal_set",
    "project",
    "read_dimacs",
    "run_suite",
    "seed_solution",
    "standardize_clause",
    "State",
    "stats_report",
    "TAUTOLOGY",
    "to_dimacs",
    "VariableOrdering",
]
