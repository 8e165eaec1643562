from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from quandle_lab.constructions import (  # noqa: E402
    AlexanderSpec,
    alexander_field,
    alexander_general,
    cyclic_group,
    dihedral_quandle,
)
from quandle_lab.knots import load_knot_table  # noqa: E402

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def knot_table():
    return load_knot_table(DATA / "knots_le9.csv")


@pytest.fixture(scope="session")
def knots_by_name(knot_table):
    return {k.name: k for k in knot_table}


@pytest.fixture(scope="session")
def small_knots(knot_table):
    """Knots of at most 8 crossings."""
    return [k for k in knot_table if int(k.name.split("_")[0]) <= 8]


def mult_quandle(p: int, a: int):
    """Alexander quandle on Z_p with x * y = a x + (1 - a) y."""
    return alexander_general(cyclic_group(p), [(a * x) % p for x in range(p)])


@pytest.fixture(scope="session")
def C4():
    return alexander_field(AlexanderSpec(2, (1, 1, 1)))


@pytest.fixture(scope="session")
def R3():
    return dihedral_quandle(3)


@pytest.fixture(scope="session")
def R5():
    return dihedral_quandle(5)


# -- acceptance summary -------------------------------------------------------

_CRITERIA: dict[int, tuple[str, float, str]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        number = int(report.nodeid.split("test_criterion_")[1].split("_")[0])
        note = dict(report.user_properties).get("note", "")
        _CRITERIA[number] = ("PASS" if report.passed else "FAIL", report.duration, note)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        status, seconds, note = _CRITERIA[number]
        line = f"criterion {number}: {status} ({seconds:.2f} s)"
        terminalreporter.write_line(line + (f"  {note}" if note else ""))
