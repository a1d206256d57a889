import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_roots(rng, n=4, min_gap=0.05):
    """n roots uniform in the unit disk with a minimum pairwise distance."""
    while True:
        r = np.sqrt(rng.uniform(0, 1, n)) * np.exp(2j * np.pi * rng.uniform(0, 1, n))
        d = np.abs(r[:, None] - r[None, :])
        np.fill_diagonal(d, np.inf)
        if d.min() >= min_gap:
            return list(r)


# acceptance lines, filled by tests/test_acceptance.py and printed after the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: acceptance checks that take tens of seconds")
