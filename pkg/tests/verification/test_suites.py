import random

import pytest

from src.algebra.novikov import Precision
from src.algebra.polytope import Polytope
from src.verification.generators import Generators
from src.verification.suites import SUITE_NAMES, SuiteRun, run_suite


@pytest.mark.parametrize("name", SUITE_NAMES)
def test_suite_passes_with_few_samples(name):
    report = run_suite(name, seed=3, precision=Precision(5), window=3, samples=3).report()
    failed = [c.check for c in report.checks if c.failures]
    assert failed == [], [c.detail for c in report.counterexamples]


def test_suite_runs_are_reproducible():
    first = run_suite("novikov", seed=11, precision=Precision(4), window=3, samples=5).report()
    second = run_suite("novikov", seed=11, precision=Precision(4), window=3, samples=5).report()
    assert first == second


def test_sample_override_sets_case_count():
    report = run_suite("novikov", seed=0, precision=Precision(4), window=3, samples=4).report()
    assert {c.check: c.cases for c in report.checks}["ultrametric"] == 4


def test_domain_errors_become_failures():
    run = SuiteRun.start("novikov", 0, Precision(4), 3, 1)

    def body():
        Polytope.interval(2, 1)
        return True, ""

    assert run.case("broken", 0, body) is False
    report = run.collector.report()
    assert report.checks[0].failures == 1
    assert "EmptyPolytopeError" in report.counterexamples[0].detail


def test_unexpected_errors_become_failures():
    run = SuiteRun.start("operator", 0, Precision(4), 3, 1)

    def body():
        random.Random(0).sample(range(3), 8)
        return True, ""

    assert run.case("crashing", 0, body) is False
    detail = run.collector.report().counterexamples[0].detail
    assert detail.startswith("unexpected ValueError")


def test_cech_suite_covers_non_product_laurent_splits():
    report = run_suite("cech", seed=4, precision=Precision(5), window=3, samples=4).report()
    checks = {c.check: c for c in report.checks}
    assert checks["laurent_cover_contraction"].cases == 4
    assert checks["laurent_cover_contraction"].failures == 0


@pytest.mark.parametrize("window", [1, 3])
def test_operator_suite_handles_small_windows(window):
    report = run_suite("operator", seed=3, precision=Precision(5), window=window, samples=3).report()
    assert report.verdict == "PASS", [c.detail for c in report.counterexamples]


def test_generated_boxes_nest():
    g = Generators(random.Random(5))
    for _ in range(20):
        outer = g.box(2)
        inner = g.sub_box(outer)
        assert all(outer.contains_point(v) for v in inner.vertices)


def test_separated_intervals_do_not_meet():
    g = Generators(random.Random(9))
    for _ in range(20):
        p0, p1 = g.separated_intervals()
        assert p0.support_max((1,)) < p1.support_min((1,)) or p1.support_max((1,)) < p0.support_min((1,))


def test_generated_scalars_reach_negative_valuations():
    g = Generators(random.Random(2))
    vals = [g.nonzero_novikov().val() for _ in range(200)]
    assert min(vals) < 0 < max(vals)
