from __future__ import annotations

import itertools
import sys
from importlib import resources
from pathlib import Path

import pytest

from circflow.constructions import attach_h_gadgets, k2_multi, petersen_family
from circflow.graph import from_edges
from circflow.io import parse_multigraph

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(__file__).parent / "data"


def complete(n: int):
    return from_edges(n, itertools.combinations(range(n), 2))


def k33():
    return from_edges(6, [(a, b) for a in range(3) for b in range(3, 6)])


@pytest.fixture(scope="session")
def petersen():
    text = resources.files("circflow").joinpath("data/petersen.mg").read_text()
    return parse_multigraph(text)


@pytest.fixture(scope="session")
def p5():
    return petersen_family(2)


@pytest.fixture(scope="session")
def glued():
    return attach_h_gadgets(k2_multi(1), 2)[0]


@pytest.fixture(scope="session")
def k4():
    return complete(4)


@pytest.fixture(scope="session")
def k6():
    return complete(6)


# -- acceptance summary: one line per criterion at the end of the run

_acceptance: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        _acceptance[name] = report.outcome.upper()


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in sorted(_acceptance.items()):
        terminalreporter.write_line(f"{outcome:<7} {name}")
