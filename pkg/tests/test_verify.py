import pytest

from photonadd import verify


@pytest.fixture(scope="module")
def reports():
    return verify.run_all(tolerance=1e-9, seed=0)


def test_every_suite_passes(reports):
    failed = {r.name: r.failures[:3] for r in reports if not r.passed}
    assert not failed


def test_every_suite_runs_checks(reports):
    assert all(r.checks > 0 for r in reports)
    assert [r.name for r in reports] == [s.name for s in verify.SUITES]


def test_report_lists_failures():
    fake = [verify.SuiteReport("demo", 3, 0.5, [("x=1", 0.5), ("x=2", 0.25)])]
    text = verify.format_report(fake, 1e-9, 0)
    assert "[FAIL] demo" in text
    assert "x=1: err=5.000e-01" in text
    assert text.endswith("result: FAIL (0/1 suites)\n")


def test_report_truncates_long_failure_lists():
    fake = [verify.SuiteReport("demo", 40, 1.0, [(f"x={k}", 1.0) for k in range(40)])]
    assert "... and 15 more" in verify.format_report(fake, 0.0, 0)


def test_random_ensemble_is_seeded():
    a = [rho.matrix.tolist() for _, rho in verify.random_ensemble(5, count=5)]
    b = [rho.matrix.tolist() for _, rho in verify.random_ensemble(5, count=5)]
    c = [rho.matrix.tolist() for _, rho in verify.random_ensemble(6, count=5)]
    assert a == b and a != c


def test_rel_err():
    assert verify.rel_err(0, 0) == 0
    assert verify.rel_err(1.0, 1.1) == pytest.approx(0.1 / 1.1)
