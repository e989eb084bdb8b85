import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from lagrep.lagrangian import LagrangianTuple
from lagrep.numerics import haar_unitary

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def random_tuple(n, ell, rng):
    """Lagrangian tuple with Haar-random frames."""
    return LagrangianTuple.from_frames([haar_unitary(n, rng) for _ in range(ell)])


def random_skew(n, rng):
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (Z - Z.conj().T)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# one summary line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, name, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key:2d} {'PASS' if ok else 'FAIL'}  {name}: {detail}")
