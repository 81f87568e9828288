"""Solution spaces, island checking and primal-literal machinery.

Brute-force routines encode a state as an integer whose bit ``i`` is the
value of variable ``i + 1`` (see :meth:`State.from_int`).
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .cnf_core import Clause, Formula, Literal, State

DEFAULT_GUARD = 1 << 26
DEFAULT_ORDERING_GUARD = math.factorial(10)
_CHUNK = 1 << 20


class GuardExceeded(RuntimeError):
    """Refusal to enumerate beyond the configured budget."""

    def __init__(self, required: int, guard: int, what: str = "states"):
        self.required = required
        self.guard = guard
        super().__init__(f"refusing to enumerate {format_count(required)} {what}; budget is {format_count(guard)}")


def format_count(n: int) -> str:
    """Exact below 2**40, powers of two as ``2^k`` above."""
    if n >= 1 << 40 and n & (n - 1) == 0:
        return f"2^{n.bit_length() - 1}"
    return str(n)


class PrimalConflict(ValueError):
    pass


# --- orderings ----------------------------------------------------------------

@dataclass(frozen=True, init=False)
class VariableOrdering:
    """A total order on variables ``1..n``; rank 0 is the least variable."""

    sequence: tuple[int, ...]
    rank: Mapping[int, int] = field(compare=False, repr=False)

    def __init__(self, sequence: Iterable[int]):
        seq = tuple(sequence)
        if sorted(seq) != list(range(1, len(seq) + 1)):
            raise ValueError(f"ordering must be a permutation of 1..{len(seq)}, got {seq}")
        object.__setattr__(self, "sequence", seq)
        object.__setattr__(self, "rank", {v: i for i, v in enumerate(seq)})

    @classmethod
    def natural(cls, num_vars: int) -> VariableOrdering:
        return cls(range(1, num_vars + 1))

    @classmethod
    def leading(cls, first: Iterable[int], num_vars: int) -> VariableOrdering:
        """``first`` in the given order, then every other variable ascending."""
        head = list(dict.fromkeys(first))
        placed = set(head)
        return cls(head + [v for v in range(1, num_vars + 1) if v not in placed])

    @classmethod
    def from_rank(cls, rank: Mapping[int, int]) -> VariableOrdering:
        return cls(sorted(rank, key=rank.__getitem__))

    def __len__(self) -> int:
        return len(self.sequence)

    def less(self, x: int, y: int) -> bool:
        return self.rank[x] < self.rank[y]


@dataclass(frozen=True)
class PrimalLiteralSet:
    literals: frozenset[Literal]
    ordering: VariableOrdering

    @property
    def conflicting_variables(self) -> list[int]:
        return sorted(lit.variable for lit in self.literals if lit.positive and lit.complement() in self.literals)

    def __contains__(self, lit: object) -> bool:
        return lit in self.literals

    def __len__(self) -> int:
        return len(self.literals)

    def __iter__(self) -> Iterator[Literal]:
        return iter(sorted(self.literals))


def primal_literal(c: Clause, ordering: VariableOrdering) -> Literal:
    """The literal of ``c`` on its least-ranked variable."""
    try:
        return min(c.literals, key=lambda lit: ordering.rank[lit.variable])
    except KeyError as exc:
        raise ValueError(f"variable {exc.args[0]} is not ranked by the ordering") from None


def primal_literal_set(clauses: Iterable[Clause], ordering: VariableOrdering) -> PrimalLiteralSet:
    return PrimalLiteralSet(frozenset(primal_literal(c, ordering) for c in clauses), ordering)


def is_non_conflicting(clauses: Iterable[Clause]) -> bool:
    seen: set[Literal] = set()
    for c in clauses:
        seen.update(c.literals)
    return not any(lit.complement() in seen for lit in seen)


def is_primal_non_conflicting(clauses: Iterable[Clause], ordering: VariableOrdering) -> bool:
    return not primal_literal_set(clauses, ordering).conflicting_variables


def seed_solution(clauses: Iterable[Clause], ordering: VariableOrdering, default: bool = True) -> State:
    """Extend the primal literal set to a full state; other variables get ``default``.

    The result has width ``len(ordering)`` and satisfies every clause
    whenever the set is primal non-conflicting.
    """
    plits = primal_literal_set(clauses, ordering)
    if plits.conflicting_variables:
        raise PrimalConflict(f"primal literals conflict on variables {plits.conflicting_variables}")
    bits = [default] * len(ordering)
    for lit in plits.literals:
        bits[lit.variable - 1] = lit.positive
    return State(tuple(bits))


def primal_walk(clauses: Sequence[Clause], ordering: VariableOrdering, start: State) -> list[State]:
    """Path of single flips from ``start`` to a state containing every primal literal.

    Each step flips the least-ranked variable on which ``start`` disagrees
    with the primal literal set; for a primal non-conflicting set every
    state on the path is a solution.
    """
    plits = primal_literal_set(clauses, ordering)
    if plits.conflicting_variables:
        raise PrimalConflict(f"primal literals conflict on variables {plits.conflicting_variables}")
    wanted = sorted(plits.literals, key=lambda lit: ordering.rank[lit.variable])
    path = [start]
    s = start
    for lit in wanted:
        if s.value(lit.variable) != lit.positive:
            s = s.flip(lit.variable)
            path.append(s)
    return path


def exists_primal_ordering(
    clauses: Sequence[Clause],
    guard: int = DEFAULT_ORDERING_GUARD,
    num_vars: int | None = None,
) -> VariableOrdering | None:
    """Search orderings of the occurring variables for a primal non-conflicting one.

    Variables that do not occur are appended in ascending order. Returns
    ``None`` only after every permutation was checked.
    """
    occurring = sorted({v for c in clauses for v in c.variables})
    width = max([num_vars or 0, *occurring], default=0)
    needed = math.factorial(len(occurring))
    if needed > guard:
        raise GuardExceeded(needed, guard, "orderings")
    for perm in itertools.permutations(occurring):
        ordering = VariableOrdering.leading(perm, width)
        if is_primal_non_conflicting(clauses, ordering):
            return ordering
    return None


# --- enumeration ----------------------------------------------------------------

def _check_guard(num_vars: int, guard: int | None) -> None:
    guard = DEFAULT_GUARD if guard is None else guard
    if (1 << num_vars) > guard:
        raise GuardExceeded(1 << num_vars, guard)


def _chunks(num_vars: int) -> Iterator[np.ndarray]:
    total = 1 << num_vars
    for start in range(0, total, _CHUNK):
        yield np.arange(start, min(start + _CHUNK, total), dtype=np.uint64)


class _LiteralColumns:
    """Per-chunk cache of literal truth columns."""

    def __init__(self, codes: np.ndarray):
        self.codes = codes
        self.cache: dict[Literal, np.ndarray] = {}

    def __getitem__(self, lit: Literal) -> np.ndarray:
        col = self.cache.get(lit)
        if col is None:
            col = ((self.codes >> np.uint64(lit.variable - 1)) & np.uint64(1)).astype(bool)
            if not lit.positive:
                col = ~col
            self.cache[lit] = col
        return col


def _clause_mask(clause: Clause, cols: _LiteralColumns) -> np.ndarray:
    lits = clause.literals
    sat = cols[lits[0]].copy()
    for lit in lits[1:]:
        sat |= cols[lit]
    return sat


def clause_masks(clauses: Sequence[Clause], num_vars: int, guard: int | None = None) -> np.ndarray:
    """Boolean matrix ``[i, code]``: does clause ``i`` hold in state ``code``."""
    _check_guard(num_vars, guard)
    cols = _LiteralColumns(np.arange(1 << num_vars, dtype=np.uint64))
    if not clauses:
        return np.zeros((0, cols.codes.size), dtype=bool)
    return np.stack([_clause_mask(c, cols) for c in clauses])


def solution_codes(clauses: Sequence[Clause], num_vars: int, guard: int | None = None) -> np.ndarray:
    """Sorted integer codes of every state satisfying all ``clauses``."""
    _check_guard(num_vars, guard)
    found = []
    for codes in _chunks(num_vars):
        cols = _LiteralColumns(codes)
        ok = np.ones(codes.shape, dtype=bool)
        for clause in clauses:
            ok &= _clause_mask(clause, cols)
        found.append(codes[ok])
    return np.concatenate(found)


@dataclass(frozen=True, eq=False)
class SolutionSpace:
    codes: np.ndarray
    source: Formula

    @property
    def num_vars(self) -> int:
        return self.source.num_vars

    @property
    def states(self) -> frozenset[State]:
        return frozenset(iter(self))

    def __len__(self) -> int:
        return int(self.codes.size)

    def __iter__(self) -> Iterator[State]:
        n = self.num_vars
        return (State.from_int(int(c), n) for c in self.codes)

    def __contains__(self, s: object) -> bool:
        if not isinstance(s, State) or s.num_vars != self.num_vars:
            return False
        code = s.to_int()
        i = int(np.searchsorted(self.codes, code))
        return i < self.codes.size and int(self.codes[i]) == code


def enumerate_solutions(f: Formula, guard: int | None = None) -> SolutionSpace:
    return SolutionSpace(solution_codes(f.clauses, f.num_vars, guard), f)


def component_labels(codes: np.ndarray, num_vars: int) -> tuple[int, np.ndarray]:
    """Connected components of the solution set under single flips.

    Edges come from probing each solution's ``num_vars`` neighbours against
    the sorted code array, O(|sol| * n) probes.
    """
    m = int(codes.size)
    if m <= 1:
        return m, np.zeros(m, dtype=np.int32)
    rows, cols = [], []
    for b in range(num_vars):
        probe = codes ^ np.uint64(1 << b)
        idx = np.searchsorted(codes, probe)
        idx[idx == m] = 0
        hit = codes[idx] == probe
        rows.append(np.nonzero(hit)[0])
        cols.append(idx[hit])
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    graph = coo_matrix((np.ones(r.size, dtype=np.int8), (r, c)), shape=(m, m))
    count, labels = connected_components(graph, directed=False)
    return int(count), labels


@dataclass(frozen=True)
class IslandCheck:
    """Outcome of an island test; truthy iff the solution space is connected."""

    is_island: bool
    num_solutions: int
    num_components: int
    witness: tuple[State, State] | None = None

    def __bool__(self) -> bool:
        return self.is_island


def _island_check(codes: np.ndarray, num_vars: int) -> IslandCheck:
    count, labels = component_labels(codes, num_vars)
    if count <= 1:
        return IslandCheck(True, int(codes.size), count)
    other = int(np.argmax(labels != labels[0]))
    witness = (State.from_int(int(codes[0]), num_vars), State.from_int(int(codes[other]), num_vars))
    return IslandCheck(False, int(codes.size), count, witness)


def is_island(f: Formula, guard: int | None = None) -> IslandCheck:
    """Brute-force island test. Spaces with at most one solution are trivial islands."""
    return _island_check(solution_codes(f.clauses, f.num_vars, guard), f.num_vars)


@dataclass(frozen=True)
class CompositionalityCheck:
    holds: bool
    exhaustive: bool
    subsets_checked: int
    counterexample: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.holds

    @property
    def verdict(self) -> str:
        if not self.holds:
            return "not compositional"
        return "compositional" if self.exhaustive else "no counterexample found"


def is_compositional(
    f: Formula,
    guard: int | None = None,
    max_exhaustive: int = 12,
    samples: int = 1000,
    rng_seed: int = 0,
) -> CompositionalityCheck:
    """Check that every subset of the clauses is an island.

    With at most ``max_exhaustive`` clauses all subsets are checked and the
    answer is definitive. Larger formulas get ``samples`` random subsets;
    a positive answer then only means no counterexample was found. The
    counterexample is a tuple of clause indices.
    """
    masks = clause_masks(f.clauses, f.num_vars, guard)
    m = len(f.clauses)
    all_codes = np.arange(1 << f.num_vars, dtype=np.uint64)

    def subset_ok(members: Sequence[int]) -> bool:
        ok = np.logical_and.reduce(masks[list(members)], axis=0) if members else np.ones(all_codes.size, bool)
        return _island_check(all_codes[ok], f.num_vars).is_island

    if m <= max_exhaustive:
        checked = 0
        for size in range(m + 1):
            for members in itertools.combinations(range(m), size):
                checked += 1
                if not subset_ok(members):
                    return CompositionalityCheck(False, True, checked, members)
        return CompositionalityCheck(True, True, checked)

    rng = random.Random(rng_seed)
    for checked in range(1, samples + 1):
        members = tuple(sorted(rng.sample(range(m), rng.randint(1, m))))
        if not subset_ok(members):
            return CompositionalityCheck(False, False, checked, members)
    return CompositionalityCheck(True, False, samples)

