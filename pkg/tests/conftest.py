import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(__file__).parent / "data"
BENCH_ENV = "SATISLAND_BENCHMARKS"


def benchmark_dirs():
    dirs = [DATA]
    extra = os.environ.get(BENCH_ENV)
    if extra:
        dirs.extend(Path(p) for p in extra.split(os.pathsep) if p)
    return dirs


def find_benchmark(*names):
    """First existing file among ``names`` in the data dir or ``$SATISLAND_BENCHMARKS``."""
    for d in benchmark_dirs():
        for name in names:
            if (d / name).is_file():
                return d / name
    return None


def uf20_path(index):
    """SATLIB names ``uf20-0<i>.cnf``; ``uf20-<i>.cnf`` also accepted."""
    return find_benchmark(f"uf20-0{index}.cnf", f"uf20-{index}.cnf")


def require_benchmark(path, label):
    if path is None:
        where = ", ".join(str(d) for d in benchmark_dirs())
        pytest.fail(f"benchmark {label} not available (searched {where}; set ${BENCH_ENV})", pytrace=False)
    return path


@pytest.fixture(scope="session")
def data_dir():
    return DATA


# --- acceptance summary ----------------------------------------------------------

_criteria: dict[int, list] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    entry = _criteria.setdefault(number, [title, True, []])
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        if rep.failed:
            entry[1] = False
            entry[2].append(item.name)



def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok, failed = _criteria[number]
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}"
        if failed:
            line += f"  (failed: {', '.join(failed)})"
        terminalreporter.write_line(line)
