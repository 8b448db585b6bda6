import pytest

from errors import InputError
from verification_suite import CheckResult, SuiteReport, VerificationSuite


@pytest.fixture(scope="module")
def suite(expansion, koszul, normal_forms):
    return VerificationSuite(expansion, koszul=koszul, normal_forms=normal_forms, seed=7,
                             idempotence_cases=25, instantiation_cases=10, matrix_cases=25,
                             weight_cases=5, duality_arity=3)


def run_one(suite, name, arities=None):
    (report,) = suite.run(name, arities)
    failed = [r.name for r in report.results if not r.passed]
    assert report.results, name
    assert not failed, failed
    return report


@pytest.mark.parametrize("name, arities", [
    ("tau-dernov", None),
    ("split", (2, 3)),
    ("independence-bicom-dual", None),
    ("census", None),
    ("self-duality", None),
    ("dual-dernov", None),
    ("cross-oracle", None),
    ("hadamard", None),
    ("weights", (1, 2, 3, 4)),
    ("lie-admissible", None),
    pytest.param("dimensions", None, marks=pytest.mark.slow),
    ("properties", (4,)),
])
def test_suite_passes(suite, name, arities):
    report = run_one(suite, name, arities)
    assert report.suite == name
    assert report.passed


def test_split_checks_every_dual_relation(suite):
    report = run_one(suite, "split", (2, 3))
    assert len(report.results) == 2 + 10


@pytest.mark.slow
def test_properties_up_to_degree_five(suite):
    run_one(suite, "properties", (5,))


@pytest.mark.slow
def test_split_additivity_at_arity_five(suite):
    run_one(suite, "split", (4, 5))


def test_unknown_suite(suite):
    with pytest.raises(InputError):
        suite.run("everything")
    assert "all" in suite.names
    assert "properties" in suite.names


def test_report_records_failures():
    report = SuiteReport("demo")
    report.record("holds", True)
    assert report.passed
    report.record("breaks", False, "1 != 2")
    assert not report.passed
    assert report.to_dict() == {
        "suite": "demo",
        "passed": False,
        "checks": [
            {"name": "holds", "passed": True, "detail": ""},
            {"name": "breaks", "passed": False, "detail": "1 != 2"},
        ],
    }
    assert report.results[1] == CheckResult("breaks", False, "1 != 2")


def test_hadamard_reports_the_dernov_excess_at_arity_four(suite):
    report = run_one(suite, "hadamard", (3, 4))
    checks = {r.name: r for r in report.results}
    assert checks["dernov arity 3 is novikov squared"].passed
    excess = checks["dernov arity 4 exceeds novikov squared"]
    assert excess.passed
    assert excess.detail == "491 vs 400 excess 91"


def test_tau_dernov_pins_the_kernel_at_arity_four(suite):
    report = run_one(suite, "tau-dernov", (4,))
    checks = {r.name: r for r in report.results}
    assert checks["tau image at arity 4 has dimension C(2n-2 n-1)^2"].detail == "rank 400 formula 400"
    assert checks["tau kernel at arity 4"].detail == "dim 491 rank 400 kernel 91"
