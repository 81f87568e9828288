"""Model counting, per-instance statistics and benchmark suites."""

from __future__ import annotations

import csv
import io
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Iterable, Sequence

from .cnf_core import DimacsError, Formula, read_dimacs
from .confined_search import island_neighborhood_size
from .greedy_extract import ExtractionResult, Heuristic, island_extract
from .island_theory import DEFAULT_GUARD, GuardExceeded, solution_codes

GUARD_ENV = "SATISLAND_GUARD"


def default_guard() -> int:
    """Enumeration budget from ``$SATISLAND_GUARD``, else 2**26 states."""
    raw = os.environ.get(GUARD_ENV)
    if not raw:
        return DEFAULT_GUARD
    raw = raw.strip()
    if raw.startswith("2**"):
        return 1 << int(raw[3:])
    return int(raw)


def island_space_size(res: ExtractionResult, guard: int | None = None) -> int:
    """Count total assignments satisfying the island clauses (all variables free otherwise)."""
    guard = default_guard() if guard is None else guard
    return int(solution_codes(res.island, res.source.num_vars, guard).size)


def count_solutions(f: Formula, guard: int | None = None) -> int:
    guard = default_guard() if guard is None else guard
    return int(solution_codes(f.clauses, f.num_vars, guard).size)


def reduction_factor(num_vars: int, space: int) -> int:
    """``2**num_vars / space`` rounded half up, in exact integer arithmetic."""
    if space <= 0:
        raise ValueError("space must be positive")
    total = 1 << num_vars
    return (2 * total + space) // (2 * space)


@dataclass(frozen=True)
class InstanceReport:
    name: str | None
    num_clauses: int
    island_clauses: int
    coverage: float
    num_vars: int
    confined_degree: int
    confined_pct: float
    heuristic: str
    island_space: int | None = None
    reduction: int | None = None
    model_count: int | None = None
    wall_time: float = field(default=0.0, compare=False)

    COLUMNS = (
        "name", "num_clauses", "island_clauses", "coverage", "num_vars", "confined_degree",
        "confined_pct", "island_space", "reduction", "model_count", "heuristic", "wall_time",
    )

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.COLUMNS}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> InstanceReport:
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in names})

    @classmethod
    def from_json(cls, text: str) -> InstanceReport:
        return cls.from_dict(json.loads(text))

    def csv_row(self) -> list:
        return ["" if v is None else v for v in self.to_dict().values()]


def reports_to_csv(reports: Iterable[InstanceReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(InstanceReport.COLUMNS)
    for r in reports:
        writer.writerow(r.csv_row())
    return buf.getvalue()


def reports_to_table(reports: Sequence[InstanceReport]) -> str:
    """Aligned human-readable table, one row per instance."""
    header = ["instance", "|C|", "|Q|", "|var(C)|", "|n(L)|", "|Space(Q)|", "2^n/|Space(Q)|", "|sol(C)|"]
    rows = [header]
    for r in reports:
        rows.append([
            r.name or "-",
            str(r.num_clauses),
            f"{r.island_clauses} ({r.coverage:.1f}%)",
            str(r.num_vars),
            f"{r.confined_degree} ({r.confined_pct:.1f}%)",
            "-" if r.island_space is None else str(r.island_space),
            "-" if r.reduction is None else str(r.reduction),
            "-" if r.model_count is None else str(r.model_count),
        ])
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    return "\n".join("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows)


def stats_report(
    f: Formula,
    h: Heuristic = Heuristic.RATIO,
    enumerate_spaces: bool = False,
    guard: int | None = None,
) -> InstanceReport:
    """Extract an island and collect the table statistics for one instance.

    When enumeration is requested but the guard refuses it, the optional
    fields are left as ``None``.
    """
    t0 = time.perf_counter()
    res = island_extract(f, h)
    degree = island_neighborhood_size(res)
    space = reduction = count = None
    if enumerate_spaces:
        try:
            space = island_space_size(res, guard)
            count = count_solutions(f, guard)
            reduction = reduction_factor(f.num_vars, space)
        except GuardExceeded:
            space = reduction = count = None
    return InstanceReport(
        name=f.name,
        num_clauses=len(f.clauses),
        island_clauses=len(res.island),
        coverage=round(res.coverage, 1),
        num_vars=f.num_vars,
        confined_degree=degree,
        confined_pct=round(100.0 * degree / f.num_vars, 1) if f.num_vars else 100.0,
        heuristic=h.value,
        island_space=space,
        reduction=reduction,
        model_count=count,
        wall_time=round(time.perf_counter() - t0, 4),
    )


@dataclass
class SuiteResult:
    reports: list[InstanceReport]
    errors: list[tuple[str, str]]

    @property
    def mean_coverage(self) -> float | None:
        """Mean island coverage in percent; ``None`` when no instance was read."""
        if not self.reports:
            return None
        return sum(r.coverage for r in self.reports) / len(self.reports)

    @property
    def ok(self) -> bool:
        return not self.errors


def collect_paths(paths: Iterable[str | Path]) -> list[Path]:
    out: list[Path] = []
    for p in map(Path, paths):
        if p.is_dir():
            out.extend(q for q in p.iterdir() if q.is_file() and q.suffix == ".cnf")
        else:
            out.append(p)
    return sorted(set(out))


def _one(path: Path, h: Heuristic, enumerate_spaces: bool, guard: int | None):
    try:
        return stats_report(read_dimacs(path), h, enumerate_spaces, guard), None
    except (OSError, DimacsError, UnicodeDecodeError) as exc:
        return None, f"{type(exc).__name__}: {exc}"


def run_suite(
    paths: Iterable[str | Path],
    h: Heuristic = Heuristic.RATIO,
    enumerate_spaces: bool = False,
    guard: int | None = None,
    workers: int = 1,
) -> SuiteResult:
    """Report every DIMACS file under ``paths`` (directories are scanned for ``*.cnf``).

    Files that fail to parse are listed in ``errors`` and skipped. Output
    order follows the sorted paths regardless of ``workers``.
    """
    files = collect_paths(paths)
    if workers > 1 and len(files) > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_one, files, [h] * len(files), [enumerate_spaces] * len(files), [guard] * len(files)))
    else:
        results = [_one(p, h, enumerate_spaces, guard) for p in files]
    reports, errors = [], []
    for path, (report, err) in zip(files, results):
        if err is None:
            reports.append(report)
        else:
            errors.append((str(path), err))
    return SuiteResult(reports, errors)

