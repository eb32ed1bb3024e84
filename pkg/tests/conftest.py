import pytest
from hypothesis import HealthCheck, settings

from plumbpoly import fixtures
from plumbpoly.lattice import build_context

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

ELLIPTIC = ("me6", "ex2", "fig1", "fig2", "fig2_12", "fig2_16", "pair43_a", "pair43_b")
RATIONAL = ("g1", "a2", "star4")


@pytest.fixture(scope="session")
def graphs():
    return fixtures.load_all()


@pytest.fixture(scope="session")
def ctxs(graphs):
    return {name: build_context(g) for name, g in graphs.items()}


# one verdict line per acceptance criterion, filled in by test_acceptance
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {n}: {ACCEPTANCE[n]}")
