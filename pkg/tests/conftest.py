import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from satcube.formula import Formula, clause_from_ints


def formula(n, *clauses):
    return Formula(n, [clause_from_ints(c) for c in clauses])


SINGLE = [(1, 2, 3)]
SHATTER = [(-1, 2, 3), (1, -2, 3), (1, 2, -3)]
FACE = [(1, 2, 3), (1, 2, -3), (1, -2, 3), (1, -2, -3)]
ALL8 = [(s1 * 1, s2 * 2, s3 * 3) for s1 in (1, -1) for s2 in (1, -1) for s3 in (1, -1)]


@pytest.fixture
def single():
    return formula(3, *SINGLE)


@pytest.fixture
def shatter():
    return formula(3, *SHATTER)


@pytest.fixture
def face():
    return formula(3, *FACE)


@pytest.fixture
def all8():
    return formula(3, *ALL8)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
