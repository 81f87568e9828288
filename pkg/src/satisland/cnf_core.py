"""CNF data model: literals, clauses, formulas, states and DIMACS I/O.

Literals are ordered by variable index, positive before negative, and
clauses always iterate in that order so every derived output is
deterministic.
"""

from __future__ import annotations

import enum
import io
import warnings
from dataclasses import dataclass, field
from functools import total_ordering
from pathlib import Path
from typing import Iterable, Iterator, Sequence, TextIO, Union


class DimacsError(ValueError):
    """Raised for malformed DIMACS input."""


class EmptyClauseError(DimacsError):
    """An empty clause makes the instance trivially unsatisfiable."""


class DimacsWarning(UserWarning):
    pass


class WidthMismatch(ValueError):
    pass


@total_ordering
@dataclass(frozen=True)
class Literal:
    variable: int
    positive: bool = True

    def __post_init__(self):
        if not isinstance(self.variable, int) or self.variable < 1:
            raise ValueError(f"variable index must be a positive integer, got {self.variable!r}")

    @classmethod
    def from_int(cls, value: int) -> Literal:
        if value == 0:
            raise ValueError("0 is not a literal")
        return cls(abs(value), value > 0)

    def to_int(self) -> int:
        return self.variable if self.positive else -self.variable

    def complement(self) -> Literal:
        return Literal(self.variable, not self.positive)

    __neg__ = complement

    def is_true(self, state: State) -> bool:
        return state.bits[self.variable - 1] == self.positive

    def sort_key(self) -> tuple[int, int]:
        return (self.variable, 0 if self.positive else 1)

    def __lt__(self, other: Literal) -> bool:
        if not isinstance(other, Literal):
            return NotImplemented
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return f"x{self.variable}" if self.positive else f"~x{self.variable}"

    def __repr__(self) -> str:
        return f"Literal({self.to_int()})"


class Tautology(enum.Enum):
    """Marker returned when a raw clause holds a complementary pair."""

    TAUTOLOGY = "tautology"


TAUTOLOGY = Tautology.TAUTOLOGY


@dataclass(frozen=True, init=False)
class Clause:
    """A standard-form clause: nonempty, no repeats, no complementary pair."""

    literals: tuple[Literal, ...]

    def __init__(self, literals: Iterable[Literal | int]):
        lits = sorted({lit if isinstance(lit, Literal) else Literal.from_int(lit) for lit in literals})
        if not lits:
            raise EmptyClauseError("empty clause")
        for a, b in zip(lits, lits[1:]):
            if a.variable == b.variable:
                raise ValueError(f"clause is not in standard form: {a} and {b}")
        object.__setattr__(self, "literals", tuple(lits))

    @classmethod
    def of(cls, *ints: int) -> Clause:
        return cls(ints)

    @property
    def variables(self) -> tuple[int, ...]:
        return tuple(lit.variable for lit in self.literals)

    def literal_on(self, variable: int) -> Literal | None:
        for lit in self.literals:
            if lit.variable == variable:
                return lit
        return None

    def is_satisfied(self, state: State) -> bool:
        bits = state.bits
        return any(bits[lit.variable - 1] == lit.positive for lit in self.literals)

    def __iter__(self) -> Iterator[Literal]:
        return iter(self.literals)

    def __len__(self) -> int:
        return len(self.literals)

    def __contains__(self, lit: object) -> bool:
        return lit in self.literals

    def to_ints(self) -> list[int]:
        return [lit.to_int() for lit in self.literals]

    def __str__(self) -> str:
        return "(" + " v ".join(str(lit) for lit in self.literals) + ")"

    def __repr__(self) -> str:
        return f"Clause.of({', '.join(str(i) for i in self.to_ints())})"


def standardize_clause(raw: Sequence[Literal | int]) -> Clause | Tautology:
    """Merge duplicate literals; return TAUTOLOGY if both polarities of a variable occur."""
    if len(raw) == 0:
        raise EmptyClauseError("empty clause")
    lits = {lit if isinstance(lit, Literal) else Literal.from_int(lit) for lit in raw}
    if any(lit.complement() in lits for lit in lits):
        return TAUTOLOGY
    return Clause(lits)


@dataclass(frozen=True)
class Formula:
    num_vars: int
    clauses: tuple[Clause, ...]
    name: str | None = None
    tautologies_dropped: int = field(default=0, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(self.clauses))
        if self.num_vars < 0:
            raise ValueError("num_vars must be nonnegative")
        for clause in self.clauses:
            if clause.literals[-1].variable > self.num_vars:
                raise ValueError(f"{clause} mentions a variable above num_vars={self.num_vars}")

    @classmethod
    def from_ints(cls, num_vars: int, clauses: Iterable[Iterable[int]], name: str | None = None) -> Formula:
        return cls(num_vars, tuple(Clause(c) for c in clauses), name)

    def __len__(self) -> int:
        return len(self.clauses)

    def __iter__(self) -> Iterator[Clause]:
        return iter(self.clauses)

    def with_clauses(self, clauses: Iterable[Clause]) -> Formula:
        return Formula(self.num_vars, tuple(clauses), self.name)


@dataclass(frozen=True)
class State:
    """A total assignment; ``bits[i]`` is the value of variable ``i + 1``."""

    bits: tuple[bool, ...]

    def __post_init__(self):
        object.__setattr__(self, "bits", tuple(bool(b) for b in self.bits))

    @property
    def num_vars(self) -> int:
        return len(self.bits)

    @classmethod
    def from_string(cls, text: str) -> State:
        if any(ch not in "01" for ch in text):
            raise ValueError(f"state strings contain only 0 and 1: {text!r}")
        return cls(tuple(ch == "1" for ch in text))

    @classmethod
    def from_int(cls, code: int, num_vars: int) -> State:
        """Bit ``i`` of ``code`` holds variable ``i + 1``."""
        return cls(tuple(bool((code >> i) & 1) for i in range(num_vars)))

    @classmethod
    def all(cls, value: bool, num_vars: int) -> State:
        return cls((value,) * num_vars)

    def to_int(self) -> int:
        return sum(1 << i for i, b in enumerate(self.bits) if b)

    def value(self, variable: int) -> bool:
        return self.bits[variable - 1]

    def flip(self, variable: int) -> State:
        bits = list(self.bits)
        bits[variable - 1] = not bits[variable - 1]
        return State(tuple(bits))

    def literals(self) -> frozenset[Literal]:
        """The literal-set view: one literal per variable, true under this state."""
        return frozenset(Literal(i + 1, b) for i, b in enumerate(self.bits))

    def __str__(self) -> str:
        return "".join("1" if b else "0" for b in self.bits)

    def __repr__(self) -> str:
        return f"State({str(self)!r})"


PartialValuation = dict[int, bool]


def _check_width(clauses: Iterable[Clause], s: State) -> None:
    top = max((c.literals[-1].variable for c in clauses), default=0)
    if top > s.num_vars:
        raise WidthMismatch(f"state has width {s.num_vars} but clauses use variable {top}")


def evaluate(f: Union[Formula, Clause, Iterable[Clause]], s: State) -> bool:
    """True iff every clause has a literal made true by ``s``."""
    if isinstance(f, Clause):
        _check_width((f,), s)
        return f.is_satisfied(s)
    if isinstance(f, Formula):
        if f.num_vars != s.num_vars:
            raise WidthMismatch(f"formula has {f.num_vars} variables, state has width {s.num_vars}")
        clauses: Sequence[Clause] = f.clauses
    else:
        clauses = list(f)
        _check_width(clauses, s)
    return all(c.is_satisfied(s) for c in clauses)


def hamming_distance(s1: State, s2: State) -> int:
    if s1.num_vars != s2.num_vars:
        raise WidthMismatch(f"widths differ: {s1.num_vars} vs {s2.num_vars}")
    return sum(a != b for a, b in zip(s1.bits, s2.bits))


def neighbors(s: State) -> list[State]:
    """All states one flip away, in ascending order of the flipped variable."""
    return [s.flip(v) for v in range(1, s.num_vars + 1)]


def project(s: State, variables: Iterable[int]) -> PartialValuation:
    out: PartialValuation = {}
    for v in sorted(set(variables)):
        if not 1 <= v <= s.num_vars:
            raise ValueError(f"variable {v} out of range 1..{s.num_vars}")
        out[v] = s.bits[v - 1]
    return out


# --- DIMACS -----------------------------------------------------------------

_NAME_PREFIX = "name:"


def parse_dimacs(text: Union[str, TextIO], name: str | None = None) -> Formula:
    """Parse DIMACS CNF text (a string or an open text stream).

    Tautological clauses are dropped and counted in
    ``Formula.tautologies_dropped``. A header clause count that disagrees with
    the body only triggers a :class:`DimacsWarning`.
    """
    stream = io.StringIO(text) if isinstance(text, str) else text
    num_vars = declared = None
    clauses: list[Clause] = []
    dropped = 0
    current: list[int] = []
    for lineno, line in enumerate(stream, 1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped[0] == "c":
            body = stripped[1:].strip()
            if name is None and body.startswith(_NAME_PREFIX):
                name = body[len(_NAME_PREFIX):].strip() or None
            continue
        if stripped[0] == "%":
            break  # SATLIB footer
        if stripped[0] == "p":
            if num_vars is not None:
                raise DimacsError(f"line {lineno}: duplicate header")
            parts = stripped.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"line {lineno}: malformed header {stripped!r}")
            try:
                num_vars, declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"line {lineno}: malformed header {stripped!r}") from None
            if num_vars < 0 or declared < 0:
                raise DimacsError(f"line {lineno}: negative counts in header")
            continue
        if num_vars is None:
            raise DimacsError(f"line {lineno}: clause data before the 'p cnf' header")
        for tok in stripped.split():
            try:
                value = int(tok)
            except ValueError:
                raise DimacsError(f"line {lineno}: bad token {tok!r}") from None
            if value != 0:
                if abs(value) > num_vars:
                    raise DimacsError(f"line {lineno}: literal {value} exceeds {num_vars} variables")
                current.append(value)
                continue
            if not current:
                raise EmptyClauseError(f"line {lineno}: empty clause, instance is unsatisfiable")
            clause = standardize_clause(current)
            if clause is TAUTOLOGY:
                dropped += 1
            else:
                clauses.append(clause)
            current = []
    if num_vars is None:
        raise DimacsError("missing 'p cnf' header")
    if current:
        raise DimacsError("last clause is not terminated by 0")
    if declared != len(clauses) + dropped:
        warnings.warn(
            f"header declares {declared} clauses, found {len(clauses) + dropped}",
            DimacsWarning,
            stacklevel=2,
        )
    return Formula(num_vars, tuple(clauses), name, tautologies_dropped=dropped)


def read_dimacs(path: Union[str, Path]) -> Formula:
    """Read a DIMACS file; the instance name defaults to the file stem."""
    path = Path(path)
    with path.open() as fh:
        f = parse_dimacs(fh)
    if f.name is None:
        f = Formula(f.num_vars, f.clauses, path.stem, tautologies_dropped=f.tautologies_dropped)
    return f


def to_dimacs(f: Formula) -> str:
    lines = []
    if f.name is not None:
        lines.append(f"c {_NAME_PREFIX} {f.name}")
    lines.append(f"p cnf {f.num_vars} {len(f.clauses)}")
    for clause in f.clauses:
        lines.append(" ".join(str(i) for i in clause.to_ints()) + " 0")
    return "\n".join(lines) + "\n"


def write_dimacs(f: Formula, path: Union[str, Path]) -> None:
    Path(path).write_text(to_dimacs(f))
