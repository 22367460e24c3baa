import numpy as np
import pytest

from histomerge import build_exact

P1 = [2, 4, 5, 6, 7, 10, 13, 16, 18, 20, 21, 25]
P2 = [3, 9, 11, 12, 14, 15, 17, 19, 22, 23, 24, 26, 27, 29, 30]

_ACCEPTANCE = []


@pytest.fixture
def p1():
    return np.array(P1)


@pytest.fixture
def p2():
    return np.array(P2)


@pytest.fixture
def h1():
    return build_exact(P1, 3)


@pytest.fixture
def h2():
    return build_exact(P2, 3)


@pytest.fixture
def acceptance():
    """Record one acceptance criterion outcome for the end-of-run summary."""

    def record(criterion, passed, detail=""):
        _ACCEPTANCE.append((criterion, bool(passed), detail))
        print(f"{'PASS' if passed else 'FAIL'} {criterion}: {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, passed, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {criterion}  {detail}")
