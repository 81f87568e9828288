"""Assertions shared by the unit and acceptance suites."""

from satisland import evaluate, is_primal_non_conflicting, primal_literal


def check_invariants(f, res):
    # partition as multisets, by index
    assert sorted(res.island_indices + res.removed_indices) == list(range(len(f.clauses)))
    assert res.island == tuple(f.clauses[i] for i in res.island_indices)
    assert res.removed == tuple(f.clauses[i] for i in res.removed_indices)
    assert list(res.island_indices) == sorted(res.island_indices)
    variables = [lit.variable for lit in res.primal_list]
    assert len(variables) == len(set(variables))
    assert is_primal_non_conflicting(res.island, res.induced_ordering)
    plits = set(res.primal_list)
    assert all(primal_literal(q, res.induced_ordering) in plits for q in res.island)
    assert evaluate(res.island_formula(), res.seed)
    assert len(res.primal_list) <= len(f.clauses)
    # ordering: primal variables first in pick order, then the rest ascending
    seq = res.induced_ordering.sequence
    assert seq[: len(variables)] == tuple(variables)
    assert list(seq[len(variables):]) == sorted(seq[len(variables):])
