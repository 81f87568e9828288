"""Greedy island extraction with literal-selection heuristics.

The extractor repeatedly picks the best literal ``l``, moves every
remaining clause containing ``l`` into the island and discards every
remaining clause containing ``l`` or its complement. The chosen literals,
in order, fix a variable ordering under which each island clause has the
chosen literal as its primal literal, so the island is primal
non-conflicting by construction.
"""

from __future__ import annotations

import csv
import enum
import heapq
import io
import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Mapping, Sequence

from .cnf_core import Clause, Formula, Literal, State
from .island_theory import VariableOrdering, seed_solution


class Heuristic(enum.Enum):
    NEG_COMPLEMENT = "neg"
    DIFFERENCE = "diff"
    RATIO = "ratio"
    NORMALIZED_RATIO = "nratio"

    @classmethod
    def parse(cls, text: str) -> Heuristic:
        try:
            return cls(text.lower())
        except ValueError:
            return cls[text.upper()]


@total_ordering
@dataclass(frozen=True)
class Score:
    """Exact extended-rational score ``num / den``.

    ``infinite`` scores (a ratio with a zero complement count) rank above
    every finite score. Ties within the top tier are broken by
    ``tiebreak`` (larger is better). Finite values compare by integer
    cross-multiplication.
    """

    num: int
    den: int = 1
    infinite: bool = False
    tiebreak: int = 0

    def __lt__(self, other: Score) -> bool:
        if self.infinite != other.infinite:
            return other.infinite
        if not self.infinite:
            lhs, rhs = self.num * other.den, other.num * self.den
            if lhs != rhs:
                return lhs < rhs
        return self.tiebreak < other.tiebreak

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Score):
            return NotImplemented
        return not (self < other or other < self)

    def __hash__(self) -> int:
        return hash((True, self.tiebreak) if self.infinite else Fraction(self.num, self.den))

    def __str__(self) -> str:
        if self.infinite:
            return f"inf[{self.tiebreak}]"
        return str(self.num) if self.den == 1 else f"{self.num}/{self.den}"


def literal_counts(clauses: Iterable[Clause]) -> Counter[Literal]:
    """``#(l)``: the number of clauses containing each literal (duplicates counted)."""
    counts: Counter[Literal] = Counter()
    for c in clauses:
        counts.update(c.literals)
    return counts


def _score(pos: int, neg: int, h: Heuristic) -> Score:
    if h is Heuristic.NEG_COMPLEMENT:
        return Score(-neg)
    if h is Heuristic.DIFFERENCE:
        return Score(pos - neg)
    # Both ratio forms put pure literals on top, ordered by #(l), so their
    # argmax sets coincide exactly.
    if h is Heuristic.RATIO:
        return Score(pos, neg, infinite=True, tiebreak=pos) if neg == 0 else Score(pos, neg)
    if neg == 0:
        return Score(1, 1, infinite=True, tiebreak=pos)
    return Score(pos, pos + neg)


def heuristic_score(lit: Literal, counts: Mapping[Literal, int], h: Heuristic) -> Score:
    pos = counts.get(lit, 0)
    if pos <= 0:
        raise ValueError(f"{lit} does not occur, so it is not a candidate")
    return _score(pos, counts.get(lit.complement(), 0), h)


def _preference(lit: Literal, score: Score) -> tuple:
    # Higher score, then smaller variable, then positive polarity.
    return (score, -lit.variable, lit.positive)


def best_literal(clauses: Sequence[Clause], h: Heuristic) -> Literal:
    """Return the occurring literal with the best score under ``h``.

    Ties go to the smaller variable index, then to the positive literal.
    """
    if not clauses:
        raise ValueError("no clauses to pick a literal from")
    return best_from_counts(literal_counts(clauses), h)


def best_from_counts(counts: Mapping[Literal, int], h: Heuristic) -> Literal:
    candidates = [lit for lit, n in counts.items() if n > 0]
    if not candidates:
        raise ValueError("no literal occurs")
    return max(candidates, key=lambda lit: _preference(lit, heuristic_score(lit, counts, h)))


@dataclass(frozen=True)
class ExtractionResult:
    island: tuple[Clause, ...]
    primal_list: tuple[Literal, ...]
    induced_ordering: VariableOrdering
    removed: tuple[Clause, ...]
    seed: State
    heuristic: Heuristic
    source: Formula
    island_indices: tuple[int, ...]
    removed_indices: tuple[int, ...]

    @property
    def num_clauses(self) -> int:
        return len(self.source.clauses)

    @property
    def coverage(self) -> float:
        """Percentage of clauses in the island; 100 for an empty formula."""
        if not self.source.clauses:
            return 100.0
        return 100.0 * len(self.island) / len(self.source.clauses)

    def island_formula(self) -> Formula:
        return Formula(self.source.num_vars, self.island, self.source.name)

    def to_record(self) -> dict:
        return {
            "instance": self.source.name,
            "num_clauses": self.num_clauses,
            "island_clauses": len(self.island),
            "coverage": round(self.coverage, 1),
            "primal_literals": len(self.primal_list),
            "heuristic": self.heuristic.value,
            "seed": str(self.seed),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_record())

    def to_csv_row(self, header: bool = False) -> str:
        rec = self.to_record()
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if header:
            writer.writerow(rec.keys())
        writer.writerow(rec.values())
        return buf.getvalue()


class _Entry:
    """Heap entry ordered so that the best literal pops first."""

    __slots__ = ("key", "lit", "version")

    def __init__(self, lit: Literal, score: Score, version: int):
        self.lit = lit
        self.key = _preference(lit, score)
        self.version = version

    def __lt__(self, other: _Entry) -> bool:
        return self.key > other.key


def island_extract(f: Formula, h: Heuristic = Heuristic.RATIO, default: bool = True) -> ExtractionResult:
    """Greedy island extraction over ``f`` under heuristic ``h``.

    Literal counts are maintained incrementally and the best literal is
    kept in a lazily invalidated heap; picks are identical to calling
    :func:`best_literal` on the remaining clauses each round.
    """
    clauses = f.clauses
    occurs: dict[Literal, list[int]] = {}
    for i, c in enumerate(clauses):
        for lit in c.literals:
            occurs.setdefault(lit, []).append(i)
    counts = {lit: len(idx) for lit, idx in occurs.items()}
    alive = [True] * len(clauses)
    version: dict[Literal, int] = dict.fromkeys(counts, 0)
    heap = [_Entry(lit, _score(n, counts.get(lit.complement(), 0), h), 0) for lit, n in counts.items()]
    heapq.heapify(heap)

    def push(lit: Literal) -> None:
        n = counts.get(lit, 0)
        version[lit] = version.get(lit, 0) + 1
        if n > 0:
            heapq.heappush(heap, _Entry(lit, _score(n, counts.get(lit.complement(), 0), h), version[lit]))

    primal: list[Literal] = []
    in_island = [False] * len(clauses)
    remaining = len(clauses)
    while remaining:
        entry = heapq.heappop(heap)
        if entry.version != version[entry.lit] or counts.get(entry.lit, 0) == 0:
            continue
        chosen = entry.lit
        primal.append(chosen)
        touched: set[Literal] = set()
        for target, keep in ((chosen, True), (chosen.complement(), False)):
            for i in occurs.get(target, ()):
                if not alive[i]:
                    continue
                alive[i] = False
                in_island[i] = keep
                remaining -= 1
                for lit in clauses[i].literals:
                    counts[lit] -= 1
                    touched.add(lit)
                    touched.add(lit.complement())
        for lit in touched:
            push(lit)

    island_idx = tuple(i for i, keep in enumerate(in_island) if keep)
    removed_idx = tuple(i for i, keep in enumerate(in_island) if not keep)
    island = tuple(clauses[i] for i in island_idx)
    ordering = VariableOrdering.leading((lit.variable for lit in primal), f.num_vars)
    return ExtractionResult(
        island=island,
        primal_list=tuple(primal),
        induced_ordering=ordering,
        removed=tuple(clauses[i] for i in removed_idx),
        seed=seed_solution(island, ordering, default),
        heuristic=h,
        source=f,
        island_indices=island_idx,
        removed_indices=removed_idx,
    )


def reference_extract(f: Formula, h: Heuristic = Heuristic.RATIO) -> tuple[list[int], list[Literal]]:
    """Direct transcription of the greedy loop, recounting every round.

    Returns the island clause indices and the chosen literal list. Quadratic;
    used to cross-check :func:`island_extract`.
    """
    work = list(range(len(f.clauses)))
    island: list[int] = []
    primal: list[Literal] = []
    while work:
        lit = best_literal([f.clauses[i] for i in work], h)
        primal.append(lit)
        comp = lit.complement()
        island.extend(i for i in work if lit in f.clauses[i])
        work = [i for i in work if lit not in f.clauses[i] and comp not in f.clauses[i]]
    return sorted(island), primal
