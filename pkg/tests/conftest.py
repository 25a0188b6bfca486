from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from persexc import load_complex, load_subcomplex

FIXTURES = Path(__file__).parent / "fixtures"

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def e1():
    return load_complex(FIXTURES / "e1.txt")


@pytest.fixture
def e3():
    X = load_complex(FIXTURES / "e3" / "X.txt")
    A = load_subcomplex(FIXTURES / "e3" / "A.txt", X)
    B = load_subcomplex(FIXTURES / "e3" / "B.txt", X)
    return X, A, B


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
