import math

import numpy as np
import pytest

from qwalk.corpus import load_corpus
from qwalk.graph import load
from qwalk.quat import Quaternion

K3_TEXT = "0 1\n1 2\n2 0"
S4_TEXT = "0 3\n1 3\n2 3"
K3_ALPHA = Quaternion(1.0, 0.5, math.sqrt(2) / 2, -0.5)
S4_ALPHA = Quaternion(4 / 3, 1 / 3, 2 / 3, math.sqrt(3) / 3)


@pytest.fixture(scope="session")
def k3():
    return load(K3_TEXT)


@pytest.fixture(scope="session")
def s4():
    return load(S4_TEXT)


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""

    def record(number: int, title: str, worst: float, limit: float) -> None:
        ok = bool(worst <= limit)
        line = f"{'PASS' if ok else 'FAIL'}  criterion {number}: {title}  worst={worst:.3e} limit={limit:.0e}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
