"""Local search confined to the solution space of an extracted island."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Sequence

from .cnf_core import Clause, Formula, State, evaluate
from .greedy_extract import ExtractionResult


class OffIsland(ValueError):
    """The state does not satisfy every island clause."""


@dataclass(frozen=True)
class ConfinedNeighborhood:
    origin: State
    flippable: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.flippable)

    def states(self) -> list[State]:
        return [self.origin.flip(v) for v in self.flippable]


def on_island_neighbors(s: State, island: Sequence[Clause]) -> ConfinedNeighborhood:
    """Variables whose flip keeps every island clause satisfied.

    A variable is blocked exactly when some island clause has its literal
    on that variable as the only true literal.
    """
    bits = s.bits
    blocked = set()
    for c in island:
        true_lits = [lit for lit in c.literals if bits[lit.variable - 1] == lit.positive]
        if not true_lits:
            raise OffIsland(f"{s} falsifies island clause {c}")
        if len(true_lits) == 1:
            blocked.add(true_lits[0].variable)
    return ConfinedNeighborhood(s, tuple(v for v in range(1, s.num_vars + 1) if v not in blocked))


def island_neighborhood_size(res: ExtractionResult) -> int:
    """Number of neighbours of the seed state that stay on the island."""
    return len(on_island_neighbors(res.seed, res.island))


@dataclass(frozen=True)
class SearchOutcome:
    solved: bool
    final_state: State
    flips_used: int
    budget: int
    rng_seed: int
    unsat_trace: tuple[int, ...] = field(repr=False)
    restarts: int = 0
    visited: tuple[State, ...] | None = field(default=None, repr=False)

    def to_record(self, instance: str | None = None) -> dict:
        return {
            "instance": instance,
            "solved": self.solved,
            "flips_used": self.flips_used,
            "budget": self.budget,
            "rng_seed": self.rng_seed,
            "final_state": str(self.final_state),
        }

    def to_json(self, instance: str | None = None) -> str:
        return json.dumps(self.to_record(instance))


class _Tracker:
    """True-literal counters with make/break tallies, updated per flip."""

    def __init__(self, f: Formula, island_mask: Sequence[bool], state: State):
        self.clauses = [tuple((lit.variable, lit.positive) for lit in c.literals) for c in f.clauses]
        self.island = list(island_mask)
        n = f.num_vars
        self.occ: list[list[int]] = [[] for _ in range(n + 1)]
        for i, lits in enumerate(self.clauses):
            for v, _ in lits:
                self.occ[v].append(i)
        self.reset(state)

    def reset(self, state: State) -> None:
        n = len(self.occ) - 1
        self.bits = [False, *state.bits]
        self.ntrue = [0] * len(self.clauses)
        self.make = [0] * (n + 1)  # unsatisfied free clauses containing v
        self.brk = [0] * (n + 1)  # free clauses whose only true literal is on v
        self.locked = [0] * (n + 1)  # island clauses whose only true literal is on v
        self.unsat = 0
        for i, lits in enumerate(self.clauses):
            true_vars = [v for v, pos in lits if self.bits[v] == pos]
            self.ntrue[i] = len(true_vars)
            if not true_vars:
                if self.island[i]:
                    raise OffIsland(f"restart state falsifies island clause {i}")
                self.unsat += 1
                for v, _ in lits:
                    self.make[v] += 1
            elif len(true_vars) == 1:
                self._sole(i, true_vars[0], +1)

    def _sole(self, i: int, v: int, delta: int) -> None:
        if self.island[i]:
            self.locked[v] += delta
        else:
            self.brk[v] += delta

    def _only_true(self, i: int) -> int:
        for v, pos in self.clauses[i]:
            if self.bits[v] == pos:
                return v
        raise AssertionError("no true literal")

    def flippable(self) -> list[int]:
        return [v for v in range(1, len(self.occ)) if self.locked[v] == 0]

    def delta(self, v: int) -> int:
        return self.brk[v] - self.make[v]

    def flip(self, v: int) -> None:
        self.bits[v] = not self.bits[v]
        for i in self.occ[v]:
            pos = next(p for u, p in self.clauses[i] if u == v)
            if self.bits[v] == pos:
                # literal became true
                before = self.ntrue[i]
                self.ntrue[i] += 1
                if before == 0:
                    self.unsat -= 1
                    for u, _ in self.clauses[i]:
                        self.make[u] -= 1
                    self._sole(i, v, +1)
                elif before == 1:
                    self._sole(i, self._only_true_except(i, v), -1)
            else:
                before = self.ntrue[i]
                self.ntrue[i] -= 1
                if before == 1:
                    self._sole(i, v, -1)
                    self.unsat += 1
                    for u, _ in self.clauses[i]:
                        self.make[u] += 1
                elif before == 2:
                    self._sole(i, self._only_true(i), +1)

    def _only_true_except(self, i: int, v: int) -> int:
        for u, pos in self.clauses[i]:
            if u != v and self.bits[u] == pos:
                return u
        raise AssertionError("no other true literal")

    def state(self) -> State:
        return State(tuple(self.bits[1:]))


def confined_local_search(
    f: Formula,
    res: ExtractionResult,
    budget: int = 10_000,
    rng_seed: int = 0,
    *,
    stagnation_window: int | None = None,
    restart_walk: int | None = None,
    noise: float = 0.0,
    record_states: bool = False,
    audit: bool = False,
) -> SearchOutcome:
    """Best-improvement local search that never leaves the island.

    Starts from ``res.seed``. Each flip picks, among island-preserving
    variables, one minimising the number of unsatisfied non-island clauses
    (sideways moves allowed, ties broken at random). After
    ``stagnation_window`` flips (default ``10 * n``) without a new best, the
    search restarts from a random island state reached by ``restart_walk``
    (default ``n``) confined random flips from the seed. Walk flips count
    against ``budget``. ``noise`` is the probability of a random confined
    flip instead of a greedy one.

    With ``audit`` every visited state is re-checked against the island by
    full evaluation.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    n = f.num_vars
    window = 10 * n if stagnation_window is None else stagnation_window
    walk = n if restart_walk is None else restart_walk
    rng = random.Random(rng_seed)
    mask = [False] * len(f.clauses)
    for i in res.island_indices:
        mask[i] = True
    tracker = _Tracker(f, mask, res.seed)
    trace = [tracker.unsat]
    visited = [res.seed] if record_states else None
    flips = restarts = 0
    best = tracker.unsat
    since_best = 0

    def step(v: int) -> None:
        nonlocal flips
        tracker.flip(v)
        flips += 1
        trace.append(tracker.unsat)
        if record_states or audit:
            s = tracker.state()
            if audit and not evaluate(res.island, s):
                raise OffIsland(f"search left the island at flip {flips}: {s}")
            if record_states:
                visited.append(s)

    while tracker.unsat > 0 and flips < budget:
        free = tracker.flippable()
        if not free:
            break
        if window and since_best >= window:
            restarts += 1
            since_best = 0
            tracker.reset(res.seed)
            for _ in range(walk):
                if flips >= budget:
                    break
                moves = tracker.flippable()
                if not moves:
                    break
                step(rng.choice(moves))
            best = tracker.unsat
            continue
        if noise and rng.random() < noise:
            v = rng.choice(free)
        else:
            deltas = [tracker.delta(v) for v in free]
            low = min(deltas)
            v = rng.choice([u for u, d in zip(free, deltas) if d == low])
        step(v)
        if tracker.unsat < best:
            best = tracker.unsat
            since_best = 0
        else:
            since_best += 1

    final = tracker.state()
    return SearchOutcome(
        solved=tracker.unsat == 0,
        final_state=final,
        flips_used=flips,
        budget=budget,
        rng_seed=rng_seed,
        unsat_trace=tuple(trace),
        restarts=restarts,
        visited=tuple(visited) if visited is not None else None,
    )
