import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def sympy_taylor(expr, z, n):
    """Complex Taylor coefficients of a sympy expression about 0 up to degree n."""
    import sympy as sp

    poly = sp.series(expr, z, 0, n + 1).removeO()
    return np.array([complex(sp.N(poly.coeff(z, k))) for k in range(n + 1)])


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
