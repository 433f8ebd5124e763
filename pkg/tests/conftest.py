import math

import numpy as np
import pytest

from shortinv.poisson_engine import IntervalFamily


def random_family(p, H, K, J, seed, kind="general"):
    rng = np.random.default_rng(seed)
    lo, hi = math.floor(H / 2) + 1, math.ceil(p - H / 2) - 1
    klo, khi = math.floor(K / 2) + 1, math.ceil(p - K / 2) - 1
    c = [(int(rng.integers(lo, hi + 1)), int(rng.integers(klo, khi + 1))) for _ in range(J)]
    return IntervalFamily(p, H, K, tuple(c), kind)


@pytest.fixture
def family_factory():
    return random_family


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record one acceptance verdict, print it, and fail the test if it is negative."""
    def record(name, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
