import pytest

from plumbpoly.checks import FAIL, PASS, SKIP, combinatorial_checks, iter_failures, run_checks


@pytest.mark.parametrize("name", ["g1", "a2", "star4", "me6", "ex2", "fig2_12"])
def test_fixture_checks_pass(graphs, name):
    checks = run_checks(graphs[name])
    assert not list(iter_failures(checks)), [c for c in checks if c.status == FAIL]
    assert any(c.status == PASS for c in checks)


def test_rational_skips_elliptic_suites(graphs):
    names = {c.name: c.status for c in run_checks(graphs["a2"])}
    assert names["ellseq: elliptic sequence identities"] == SKIP


def test_combinatorial():
    assert all(c.ok for c in combinatorial_checks(8))
