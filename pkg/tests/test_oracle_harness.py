import random
import shutil

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from gen import ints, random_formula
from satisland import (
    Clause,
    Formula,
    GuardExceeded,
    Heuristic,
    count_solutions,
    island_extract,
    island_space_size,
    read_dimacs,
    run_suite,
    stats_report,
)
from satisland.oracle_harness import (
    GUARD_ENV,
    InstanceReport,
    default_guard,
    reduction_factor,
    reports_to_csv,
    reports_to_table,
)

from conftest import DATA


class TestCounting:
    def test_empty_island_space(self):
        assert island_space_size(island_extract(Formula(20, ()))) == 1_048_576

    def test_unit_island_space(self):
        assert island_space_size(island_extract(Formula.from_ints(3, [[1]]))) == 4

    def test_single_clause(self):
        f = Formula.from_ints(2, [[1, 2]])
        assert count_solutions(f) == len(oracles.solutions(ints(f.clauses), 2)) == 3

    def test_uf20_01(self):
        f = read_dimacs(DATA / "uf20-01.cnf")
        assert count_solutions(f) == 8
        assert island_space_size(island_extract(f)) == 1300

    def test_guard(self):
        with pytest.raises(GuardExceeded):
            count_solutions(Formula(12, ()), guard=1000)

    def test_env_guard(self, monkeypatch):
        monkeypatch.setenv(GUARD_ENV, "2**10")
        assert default_guard() == 1024
        with pytest.raises(GuardExceeded):
            count_solutions(Formula(11, ()))
        monkeypatch.setenv(GUARD_ENV, "4096")
        assert count_solutions(Formula(11, ())) == 2048
        monkeypatch.delenv(GUARD_ENV)
        assert default_guard() == 1 << 26

    def test_invariant_under_reordering(self):
        rng = random.Random(5)
        for _ in range(50):
            n = rng.randint(1, 9)
            f = random_formula(rng, n, rng.randint(0, 15))
            shuffled = list(f.clauses)
            rng.shuffle(shuffled)
            reversed_lits = [Clause(list(reversed(c.to_ints()))) for c in shuffled]
            assert count_solutions(f) == count_solutions(Formula(n, tuple(reversed_lits)))

    def test_space_bounds_count(self):
        rng = random.Random(19)
        for _ in range(80):
            n = rng.randint(1, 10)
            f = random_formula(rng, n, rng.randint(0, 25))
            res = island_extract(f)
            space, count = island_space_size(res), count_solutions(f)
            assert space >= count
            assert space == len(oracles.solutions(ints(res.island), n))
            if not res.removed:
                assert space == count


class TestReduction:
    def test_table_value(self):
        assert reduction_factor(20, 1300) == 807

    def test_half_up(self):
        assert reduction_factor(3, 16) == 1  # 0.5 rounds up
        assert reduction_factor(2, 8) == 1
        assert reduction_factor(4, 5) == 3  # 3.2
        assert reduction_factor(1, 4) == 1  # 0.5

    @given(st.integers(0, 40), st.integers(1, 10**6))
    def test_within_rounding(self, n, space):
        r = reduction_factor(n, space)
        assert abs(r * space - (1 << n)) <= space / 2

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            reduction_factor(3, 0)


class TestReports:
    def test_hanoi4(self):
        r = stats_report(read_dimacs(DATA / "hanoi4.cnf"))
        assert (r.num_clauses, r.num_vars, r.name) == (4934, 718, "hanoi4")
        assert r.island_clauses > 0 and r.confined_degree > 0
        assert r.island_space is None and r.model_count is None

    def test_uf20_01_enumerated(self):
        r = stats_report(read_dimacs(DATA / "uf20-01.cnf"), Heuristic.RATIO, enumerate_spaces=True)
        assert (r.island_clauses, r.island_space, r.reduction, r.model_count) == (72, 1300, 807, 8)
        assert r.coverage == 79.1

    def test_guard_degrades(self):
        r = stats_report(read_dimacs(DATA / "uf20-01.cnf"), enumerate_spaces=True, guard=1000)
        assert r.island_clauses == 72 and r.model_count is None and r.reduction is None

    def test_empty_formula(self):
        r = stats_report(Formula(0, ()), enumerate_spaces=True)
        assert r.coverage == 100.0 and r.island_clauses == 0 and r.num_clauses == 0
        assert r.model_count == 1 and r.island_space == 1

    def test_json_round_trip(self):
        r = stats_report(read_dimacs(DATA / "uf20-01.cnf"), enumerate_spaces=True)
        back = InstanceReport.from_json(r.to_json())
        assert back == r and back.wall_time == r.wall_time

    def test_csv_and_table(self):
        r = stats_report(read_dimacs(DATA / "uf20-01.cnf"), enumerate_spaces=True)
        lines = reports_to_csv([r]).splitlines()
        assert lines[0].split(",") == list(InstanceReport.COLUMNS)
        assert lines[1].startswith("uf20-01,91,72,79.1,20,")
        table = reports_to_table([r]).splitlines()
        assert table[0].split()[:3] == ["instance", "|C|", "|Q|"]
        assert "72 (79.1%)" in table[1] and "807" in table[1]


class TestSuite:
    def test_empty_directory(self, tmp_path):
        result = run_suite([tmp_path])
        assert result.reports == [] and result.mean_coverage is None and result.ok

    def test_mixed_files(self, tmp_path):
        shutil.copy(DATA / "uf20-01.cnf", tmp_path / "b.cnf")
        (tmp_path / "a.cnf").write_text("p cnf 2 1\n1 3 0\n")
        (tmp_path / "c.cnf").write_bytes(b"\xff\xfe\x00")
        (tmp_path / "notes.txt").write_text("ignored")
        result = run_suite([tmp_path])
        assert [r.name for r in result.reports] == ["b"]
        assert [p.rsplit("/", 1)[1] for p, _ in result.errors] == ["a.cnf", "c.cnf"]
        assert not result.ok

    def test_ordering_independent_of_workers(self, tmp_path):
        for name in ("f600", "uf20-01", "aim-100-1_6-yes1-1"):
            shutil.copy(DATA / f"{name}.cnf", tmp_path / f"{name}.cnf")
        serial = run_suite([tmp_path])
        parallel = run_suite([tmp_path], workers=3)
        assert [r.name for r in serial.reports] == ["aim-100-1_6-yes1-1", "f600", "uf20-01"]
        assert serial.reports == parallel.reports
        assert serial.mean_coverage == pytest.approx(sum(r.coverage for r in serial.reports) / 3)
