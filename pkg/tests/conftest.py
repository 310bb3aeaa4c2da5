import numpy as np
import pytest

from symmpca.dynamics import model_from_seed
from symmpca.model import preset_eigenvalues

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def spaced_model():
    return model_from_seed(preset_eigenvalues("spaced"), 0)


@pytest.fixture(scope="session")
def nearby_model():
    return model_from_seed(preset_eigenvalues("nearby"), 0)


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per acceptance criterion and assert it."""

    def record(number, title, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} -- {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
