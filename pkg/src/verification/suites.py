"""Seeded property suites for each engine module.

A suite is a function of a :class:`SuiteRun`; every property case it checks
is emitted as a PASS/FAIL event. Default sample counts follow the
acceptance list; ``--samples`` replaces all of them.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from src.algebra import category as cat_ops
from src.algebra.affinoid import (
    AffinoidContext,
    LaurentElement,
    convergence_certificate,
    equal_at,
    rebase,
    truncate_p,
    val_at_point,
    val_p,
)
from src.algebra.cech import (
    BOTH,
    MINUS,
    PLUS,
    CechCochain,
    augment,
    build,
    build_laurent,
    cover_identity_defect,
    h0_reconstruct,
    laurent_cover,
    laurent_identity_defect,
    locality_check,
    two_term_homotopy,
)
from src.algebra.errors import CocycleViolationError, NotACocycleError, NovikovError
from src.algebra.novikov import ONE, NovikovScalar, Precision
from src.algebra.operators import (
    ContractionForm,
    Convention,
    classify_hf,
    delta,
    differential,
    disjoint_identity_val,
    eps,
    hbar,
    graded_op_val,
    inclusion_homotopy_eval,
    inclusion_identity_defects,
    top_projection,
    trace,
    window,
)
from src.algebra.polytope import Cover, Polytope
from src.formats.text import format_laurent, format_novikov, format_operator, parse_novikov
from src.reporting.report_writer import SuiteCollector
from src.telemetry.report_emitter import ReportEmitter
from src.verification.generators import Generators

logger = logging.getLogger(__name__)

SUITE_NAMES = ("novikov", "affinoid", "operator", "cech", "category")


@dataclass
class SuiteRun:
    suite: str
    gen: Generators
    precision: Precision
    window: int
    samples: int | None
    emitter: ReportEmitter
    collector: SuiteCollector

    @classmethod
    def start(
        cls, suite: str, seed: int, precision: Precision, window: int, samples: int | None
    ) -> SuiteRun:
        collector = SuiteCollector(suite)
        # per-suite stream so "verify all" reproduces each single-suite run
        rng = random.Random(f"{seed}:{suite}")
        return cls(suite, Generators(rng), precision, window, samples, ReportEmitter(collector), collector)

    def count(self, default: int) -> int:
        return self.samples if self.samples is not None else default

    def case(self, check: str, index: int, body: Callable[[], tuple[bool, str]]) -> bool:
        try:
            passed, detail = body()
        except NovikovError as e:
            passed, detail = False, f"{type(e).__name__}: {e}"
        except Exception as e:
            logger.exception("verification_case_crashed", extra={"suite": self.suite, "check": check, "index": index})
            passed, detail = False, f"unexpected {type(e).__name__}: {e}"
        self.emitter.emit_case(self.suite, check, index, passed, detail)
        return passed


# novikov


def novikov_suite(run: SuiteRun) -> None:
    g = run.gen
    prec = run.precision

    def ultrametric() -> tuple[bool, str]:
        x, y = g.novikov(), g.novikov()
        return (x + y).val() >= min(x.val(), y.val()), f"x={format_novikov(x)} y={format_novikov(y)}"

    def multiplicative() -> tuple[bool, str]:
        x, y = g.novikov(), g.novikov()
        return (x * y).val() == x.val() + y.val(), f"x={format_novikov(x)} y={format_novikov(y)}"

    def ring_axioms() -> tuple[bool, str]:
        x, y, w = g.novikov(), g.novikov(), g.novikov()
        laws = [
            (x + y) + w == x + (y + w),
            x + y == y + x,
            (x * y) * w == x * (y * w),
            x * y == y * x,
            x * (y + w) == x * y + x * w,
            x + NovikovScalar.zero() == x,
            x * ONE == x,
            (x + x.neg()).is_zero(),
        ]
        return all(laws), f"x={format_novikov(x)} y={format_novikov(y)} w={format_novikov(w)}"

    def inverse_contract() -> tuple[bool, str]:
        x = g.nonzero_novikov()
        y = x.invert(prec)
        residual = (x * y - ONE).val()
        bounded = all(e < prec.cutoff - x.val() for e, _ in y.terms)
        return residual >= prec.cutoff and bounded, f"x={format_novikov(x)} inverse={format_novikov(y)}"

    def text_round_trip() -> tuple[bool, str]:
        x = g.novikov()
        text = format_novikov(x)
        shuffled = " + ".join(reversed(text.split(" + ")))
        return parse_novikov(text) == x and format_novikov(parse_novikov(shuffled)) == text, text

    for check, body, default in (
        ("ultrametric", ultrametric, 500),
        ("val_multiplicative", multiplicative, 500),
        ("ring_axioms", ring_axioms, 500),
        ("inverse_contract", inverse_contract, 500),
        ("text_round_trip", text_round_trip, 100),
    ):
        for i in range(run.count(default)):
            run.case(check, i, body)


# affinoid


def affinoid_suite(run: SuiteRun) -> None:
    g = run.gen
    prec = run.precision

    def vertex_formula() -> tuple[bool, str]:
        dim = g.rng.randint(1, 2)
        p = g.box(dim)
        ctx = AffinoidContext.of(p)
        f = g.laurent(dim)
        v = val_p(f, ctx)
        points = p.sample_points(g.rng, 1000)
        lower_bound = all(val_at_point(f, x, ctx) >= v for x in points)
        attained = min((val_at_point(f, x, ctx) for x in p.vertices), default=v) == v
        return lower_bound and attained, f"P={p.describe()} f={format_laurent(f)} val={v}"

    def monotone() -> tuple[bool, str]:
        dim = g.rng.randint(1, 2)
        p = g.box(dim)
        q = g.sub_box(p)
        f = g.laurent(dim)
        ok = val_p(f, AffinoidContext.of(q)) >= val_p(f, AffinoidContext.of(p))
        return ok, f"P={p.describe()} Q={q.describe()} f={format_laurent(f)}"

    def submultiplicative() -> tuple[bool, str]:
        dim = g.rng.randint(1, 2)
        ctx = AffinoidContext.of(g.box(dim))
        f, h = g.laurent(dim), g.laurent(dim)
        return val_p(f * h, ctx) >= val_p(f, ctx) + val_p(h, ctx), f"f={format_laurent(f)} g={format_laurent(h)}"

    def strict_witness() -> tuple[bool, str]:
        ctx = AffinoidContext.of(Polytope.interval(0, 1))
        f = LaurentElement.monomial((1,))
        h = LaurentElement.monomial((-1,), NovikovScalar.monomial(1))
        lhs, rhs = val_p(f * h, ctx), val_p(f, ctx) + val_p(h, ctx)
        return lhs > rhs, f"val(fg)={lhs} val(f)+val(g)={rhs}"

    def rebase_preserves() -> tuple[bool, str]:
        dim = g.rng.randint(1, 2)
        p = g.box(dim)
        ctx = AffinoidContext.of(p)
        q_new = p.sample_points(g.rng, 1)[0]
        f = g.laurent(dim)
        moved = rebase(f, ctx, q_new)
        return val_p(moved, AffinoidContext(p, q_new)) == val_p(f, ctx), f"f={format_laurent(f)}"

    def truncation() -> tuple[bool, str]:
        dim = g.rng.randint(1, 2)
        ctx = AffinoidContext.of(g.box(dim))
        f = g.laurent(dim)
        t = truncate_p(f, ctx, prec)
        return equal_at(f, t, ctx, prec) and all(
            ctx.term_val(b, c) < prec.cutoff for b, c in t.terms
        ), format_laurent(f)

    def certificate() -> tuple[bool, str]:
        width = Fraction(g.rng.randint(1, 4), 2)
        pairs = [(Fraction(g.rng.randint(0, 8)), Fraction(g.rng.randint(0, 4))) for _ in range(4)]
        eps_ok = min(Fraction(1, 2), width / 2) * Fraction(g.rng.randint(1, 9), 10)
        cert = convergence_certificate(width, eps_ok, pairs)
        ratio = 2 * eps_ok / width
        bounds_ok = all(
            b == (1 - ratio) * lam - ratio * cert.constant for b, (lam, _) in zip(cert.bounds, pairs)
        )
        rejects = not convergence_certificate(width, cert.limit, pairs).converges
        return cert.converges and bounds_ok and rejects, f"delta={width} eps={eps_ok} pairs={pairs}"

    run.case("submultiplicative_strict_witness", 0, strict_witness)
    for check, body, default in (
        ("vertex_formula_vs_sampling", vertex_formula, 20),
        ("monotone_under_inclusion", monotone, 100),
        ("submultiplicative", submultiplicative, 100),
        ("rebase_preserves_val", rebase_preserves, 100),
        ("truncation", truncation, 100),
        ("convergence_certificate", certificate, 50),
    ):
        for i in range(run.count(default)):
            run.case(check, i, body)


# operator


def _identity_defects_detail(defects: list) -> str:
    if not defects:
        return ""
    subset, alpha, diff = defects[0]
    return f"S={list(subset)} alpha={list(alpha)} defect={format_laurent(diff)}"


def operator_suite(run: SuiteRun) -> None:
    g = run.gen
    prec = run.precision
    plain_sum_failures = 0
    plain_sum_cases = 0

    def d_squared() -> tuple[bool, str]:
        psi = g.graded_operator(g.rng.randint(1, 2))
        convention = g.rng.choice(list(Convention))
        return differential(differential(psi, convention), convention).is_zero(), format_operator(psi)

    def inclusion(dim: int) -> Callable[[], tuple[bool, str]]:
        def body() -> tuple[bool, str]:
            nonlocal plain_sum_failures, plain_sum_cases
            psi = g.graded_operator(dim)
            defects = inclusion_identity_defects(psi, run.window)
            if dim >= 2:
                plain_sum_cases += 1
                if inclusion_identity_defects(psi, run.window, ContractionForm.PLAIN_SUM):
                    plain_sum_failures += 1
            return not defects, f"psi={format_operator(psi)} {_identity_defects_detail(defects)}".strip()

        return body

    def continuity() -> tuple[bool, str]:
        dim = g.rng.randint(1, 2)
        p0 = g.box(dim)
        p1 = g.sub_box(p0)
        source, target = AffinoidContext.of(p0), AffinoidContext.of(p1)
        psi = g.graded_operator(dim)
        bound = graded_op_val(psi, source, target)
        points = window(dim, run.window)
        for alpha in g.rng.sample(points, min(8, len(points))):
            for value in inclusion_homotopy_eval(psi, alpha, source, target).values():
                if val_p(value, target) - source.monomial_val(alpha) < bound:
                    return False, f"psi={format_operator(psi)} alpha={list(alpha)}"
        return True, ""

    def disjoint_vanishing(pair_index: int) -> Callable[[], tuple[bool, str]]:
        p0, p1 = pairs[pair_index]

        def body() -> tuple[bool, str]:
            source, target = AffinoidContext.of(p0), AffinoidContext.of(p1)
            psi = g.graded_operator(1)
            v = disjoint_identity_val(psi, source, target, prec)
            return v >= prec.cutoff, f"P0={p0.describe()} P1={p1.describe()} psi={format_operator(psi)} val={v}"

        return body

    def eps_delta() -> tuple[bool, str]:
        rho = g.functional(g.rng.randint(1, 2))
        return eps(delta(rho)) == rho, str(rho.entries)

    def duality(dim: int) -> Callable[[], tuple[bool, str]]:
        def body() -> tuple[bool, str]:
            psi = g.graded_operator(dim)
            lhs = differential(hbar(psi), Convention.DUAL).add(hbar(differential(psi, Convention.DUAL)))
            rhs = psi.sub(top_projection(psi))
            return lhs.sub(rhs).is_zero(), format_operator(psi)

        return body

    def trace_laws() -> tuple[bool, str]:
        dim = g.rng.randint(1, 2)
        phi, chi = g.finite_operator(dim), g.finite_operator(dim)
        c = g.novikov()
        j = g.rng.randint(1, dim)
        linear = trace(phi.add(chi.scale(c))) == trace(phi) + c * trace(chi)
        conjugation = trace(phi.shift_conjugate(j)) == trace(phi)
        return linear and conjugation, str(phi.entries)

    for i in range(run.count(200)):
        run.case("d_squared_zero", i, d_squared)
    for dim in (1, 2):
        body = inclusion(dim)
        for i in range(run.count(50)):
            run.case(f"inclusion_retraction_n{dim}", i, body)
    run.collector.note(
        "inclusion_retraction_n2",
        f"plain_sum form failed on {plain_sum_failures} of {plain_sum_cases}; staircase form used",
    )
    for i in range(run.count(50)):
        run.case("inclusion_continuity", i, continuity)
    pairs = [g.separated_intervals() for _ in range(5)]
    per_pair = max(1, run.count(50) // len(pairs))
    for k in range(len(pairs)):
        body = disjoint_vanishing(k)
        for i in range(per_pair):
            run.case("disjoint_vanishing", k * per_pair + i, body)
    for i in range(run.count(100)):
        run.case("eps_delta_identity", i, eps_delta)
    for dim in (1, 2):
        body = duality(dim)
        for i in range(run.count(50)):
            run.case(f"duality_homotopy_n{dim}", i, body)
    for i in range(run.count(100)):
        run.case("trace_laws", i, trace_laws)
    for i, (p0, p1, expected) in enumerate(hf_corpus()):
        run.case("hf_classification", i, lambda p0=p0, p1=p1, expected=expected: _hf_case(run, p0, p1, expected))


def hf_corpus() -> list[tuple[Polytope, Polytope, str]]:
    box = Polytope.box
    iv = Polytope.interval
    half = Fraction(1, 2)
    return [
        (iv(-1, 1), iv(0, 1), "InclusionIso"),
        (iv(0, 1), iv(0, 1), "InclusionIso"),
        (iv(0, 2), iv(half, 1), "InclusionIso"),
        (iv(0, 1), iv(-1, 2), "NestedDual"),
        (iv(Fraction(1, 4), Fraction(3, 4)), iv(0, 1), "NestedDual"),
        (iv(0, 1), iv(2, 3), "DisjointZero"),
        (iv(2, 3), iv(0, 1), "DisjointZero"),
        (iv(0, 1), iv(half, 2), "Unclassified"),
        (box([-1, -1], [1, 1]), box([0, 0], [1, 1]), "InclusionIso"),
        (box([0, 0], [1, 1]), box([-1, -1], [2, 2]), "NestedDual"),
        (box([0, 0], [1, 1]), box([2, 0], [3, 1]), "DisjointZero"),
        (box([0, 0], [1, 1]), box([half, 0], [2, 1]), "Unclassified"),
    ]


def _hf_case(run: SuiteRun, p0: Polytope, p1: Polytope, expected: str) -> tuple[bool, str]:
    result = classify_hf(p0, p1)
    detail = f"P0={p0.describe()} P1={p1.describe()} got {result.describe()}"
    if result.tag != expected:
        return False, detail + f" expected {expected}"
    g = run.gen
    psi = g.graded_operator(p0.dim)
    source, target = AffinoidContext.of(p0), AffinoidContext.of(p1)
    if result.tag == "InclusionIso":
        form = ContractionForm(result.witness["form"])
        if result.witness["to"] != p1.describe():
            return False, detail + " witness names the wrong target"
        return not inclusion_identity_defects(psi, 2, form), detail
    if result.tag == "NestedDual":
        lhs = differential(hbar(psi), Convention.DUAL).add(hbar(differential(psi, Convention.DUAL)))
        rho = g.functional(p0.dim)
        return lhs.sub(psi.sub(top_projection(psi))).is_zero() and eps(delta(rho)) == rho, detail
    if result.tag == "DisjointZero" and "axis" in result.witness:
        axis = int(result.witness["axis"])
        return disjoint_identity_val(psi, source, target, run.precision, axis) >= run.precision.cutoff, detail
    return True, detail


# cech


def three_interval_cover() -> Cover:
    iv = Polytope.interval
    q = Fraction
    return Cover.build(iv(0, 1), [("a", iv(0, q(1, 2))), ("b", iv(q(1, 4), q(3, 4))), ("c", iv(q(1, 2), 1))])


def four_box_cover() -> Cover:
    h = Fraction(1, 2)
    box = Polytope.box
    return Cover.build(
        box([0, 0], [1, 1]),
        [
            ("ll", box([0, 0], [h, h])),
            ("rl", box([h, 0], [1, h])),
            ("lr", box([0, h], [h, 1])),
            ("rr", box([h, h], [1, 1])),
        ],
    )


def locality_configurations() -> list[tuple[Polytope, Polytope, Polytope, Polytope]]:
    iv = Polytope.interval
    box = Polytope.box
    q = Fraction
    return [
        (iv(0, 1), iv(-1, 3), iv(q(-1, 2), q(3, 2)), iv(q(-1, 2), q(3, 2))),
        (iv(0, 1), iv(-2, 2), iv(q(-1, 4), q(5, 4)), iv(q(-1, 4), q(5, 4))),
        (
            box([0, 0], [1, 1]),
            box([-1, -1], [2, 2]),
            box([q(-1, 2), q(-1, 2)], [q(3, 2), q(3, 2)]),
            box([q(-1, 2), q(-1, 2)], [q(3, 2), q(3, 2)]),
        ),
    ]


def _random_cochain(g: Generators, faces: list, dim: int, degree: int, prec: Precision) -> CechCochain:
    return CechCochain(degree, {f: g.laurent(dim) for f in faces}, prec)


def cech_suite(run: SuiteRun) -> None:
    g = run.gen
    prec = run.precision

    def two_term(dim: int) -> Callable[[], tuple[bool, str]]:
        def body() -> tuple[bool, str]:
            base = g.box(dim)
            axis = g.rng.randint(1, dim)
            lo = min(v[axis - 1] for v in base.vertices)
            hi = max(v[axis - 1] for v in base.vertices)
            level = lo + (hi - lo) * Fraction(g.rng.randint(1, 3), 4)
            u = tuple(int(i == axis - 1) for i in range(dim))
            complex_ = build_laurent(base, [(u, level)])
            degree = g.rng.randint(0, 1)
            c = _random_cochain(g, complex_.faces_of_degree(degree), dim, degree, prec)
            defects = laurent_identity_defect(complex_, c)
            if degree == 1:
                f = c.value((BOTH,), dim)
                h = two_term_homotopy(base, u, level, c)
                hyper = val_p(f, complex_.context((BOTH,)))
                bounded = all(
                    val_p(h.value((side,), dim), complex_.context((side,))) >= hyper for side in (PLUS, MINUS)
                )
            else:
                bounded = True
            return not defects and bounded, f"P={base.describe()} axis={axis} level={level}"

        return body

    def naturality() -> tuple[bool, str]:
        base = g.box(1)
        small = g.sub_box(base)
        lo, hi = small.vertices[0][0], small.vertices[-1][0]
        level = (lo + hi) / 2
        if lo == hi:
            return True, "degenerate"
        f = g.laurent(1)
        big_c = build_laurent(base, [((1,), level)])
        small_c = build_laurent(small, [((1,), level)])
        big_h = two_term_homotopy(base, (1,), level, CechCochain(1, {(BOTH,): f}, prec))
        small_h = two_term_homotopy(
            small, (1,), level, CechCochain(1, {(BOTH,): truncate_p(f, small_c.context((BOTH,)), prec)}, prec)
        )
        ok = all(
            equal_at(
                truncate_p(big_h.value((side,), 1), small_c.context((side,)), prec),
                small_h.value((side,), 1),
                small_c.context((side,)),
                prec,
            )
            for side in (PLUS, MINUS)
            if (side,) in big_c.faces and (side,) in small_c.faces
        )
        return ok, f"P={base.describe()} Q={small.describe()} f={format_laurent(f)}"

    def reconstruct(cover: Cover) -> Callable[[], tuple[bool, str]]:
        complex_ = build(cover.base, cover)
        ctx = AffinoidContext.of(cover.base)

        def body() -> tuple[bool, str]:
            f = g.laurent(cover.dim)
            c = augment(f, complex_, prec)
            glued = h0_reconstruct(complex_, c)
            back = augment(glued, complex_, prec)
            same = all(
                equal_at(back.value(face, cover.dim), c.value(face, cover.dim), complex_.context(face), prec)
                for face in complex_.faces_of_degree(0)
            )
            return equal_at(glued, f, ctx, prec) and same, f"f={format_laurent(f)}"

        return body

    def non_cocycle(cover: Cover) -> Callable[[], tuple[bool, str]]:
        complex_ = build(cover.base, cover)

        def body() -> tuple[bool, str]:
            c = augment(LaurentElement.zero(cover.dim), complex_, prec)
            label = cover.labels[0]
            bumped = dict(c.values)
            bumped[(label,)] = LaurentElement.constant(cover.dim)
            try:
                h0_reconstruct(complex_, CechCochain(0, bumped, prec))
            except NotACocycleError as e:
                return True, str(e)
            return False, "perturbed cochain was accepted"

        return body

    def laurent_contraction() -> tuple[bool, str]:
        dim = g.rng.randint(1, 2)
        base = g.box(dim)
        splits = []
        for axis in g.rng.sample(range(1, dim + 1), g.rng.randint(1, dim)):
            lo = min(v[axis - 1] for v in base.vertices)
            hi = max(v[axis - 1] for v in base.vertices)
            splits.append((tuple(int(i == axis - 1) for i in range(dim)), (lo + hi) / 2))
        complex_ = build_laurent(base, splits)
        degree = g.rng.randint(0, len(splits))
        c = _random_cochain(g, complex_.faces_of_degree(degree), dim, degree, prec)
        defects = laurent_identity_defect(complex_, c)
        first = next(iter(defects), None)
        return not defects, f"P={base.describe()} degree={degree} face={''.join(first) if first else ''}"

    def laurent_cover_contraction() -> tuple[bool, str]:
        dim = g.rng.randint(1, 2)
        base = g.box(dim)
        axis = g.rng.randint(1, dim)
        lo = min(v[axis - 1] for v in base.vertices)
        hi = max(v[axis - 1] for v in base.vertices)
        u = tuple(int(i == axis - 1) for i in range(dim))
        # two parallel splits leave the cell between their far sides empty
        splits = [(u, lo + (hi - lo) * Fraction(k, 4)) for k in sorted(g.rng.sample([1, 2, 3], 2))]
        if dim == 2:
            other = 2 if axis == 1 else 1
            lo2 = min(v[other - 1] for v in base.vertices)
            hi2 = max(v[other - 1] for v in base.vertices)
            splits.append((tuple(int(i == other - 1) for i in range(dim)), (lo2 + hi2) / 2))
        complex_ = laurent_cover(base, splits)
        degree = g.rng.randint(0, max(len(face) for face in complex_.faces) - 1)
        c = _random_cochain(g, complex_.faces_of_degree(degree), dim, degree, prec)
        defects = cover_identity_defect(complex_, c)
        first = next(iter(defects), None)
        product = build_laurent(base, splits).is_product()
        return not defects and not product, (
            f"P={base.describe()} cells={len(complex_.labels)} degree={degree} face={','.join(first) if first else ''}"
        )

    def locality(index: int) -> Callable[[], tuple[bool, str]]:
        p, p_big, p_core, nu = locality_configurations()[index]

        def body() -> tuple[bool, str]:
            report = locality_check(p, p_big, p_core, nu)
            same = report.identification[0].tag == report.identification[1].tag
            return report.passed and same, f"P={p.describe()} pieces={len(report.pieces)}"

        return body

    for dim in (1, 2):
        body = two_term(dim)
        for i in range(run.count(50)):
            run.case(f"two_term_homotopy_{dim}d", i, body)
    for i in range(run.count(50)):
        run.case("two_term_naturality", i, naturality)
    for name, cover in (("three_intervals", three_interval_cover()), ("four_boxes", four_box_cover())):
        body = reconstruct(cover)
        for i in range(run.count(20)):
            run.case(f"h0_reconstruct_{name}", i, body)
        run.case(f"non_cocycle_rejected_{name}", 0, non_cocycle(cover))
    for i in range(run.count(50)):
        run.case("laurent_contraction", i, laurent_contraction)
    for i in range(run.count(20)):
        run.case("laurent_cover_contraction", i, laurent_cover_contraction)
    for i in range(len(locality_configurations())):
        run.case("locality_check", i, locality(i))


# category


def standard_star() -> cat_ops.DirectedCategory:
    q = Fraction
    iv = Polytope.interval
    cover = Cover.build(
        iv(0, 2),
        [("a", iv(0, q(3, 2))), ("b", iv(q(1, 2), 2)), ("ab", iv(q(1, 2), q(3, 2)))],
        [("a", "ab"), ("b", "ab")],
    )
    return cat_ops.build_category(cover)


def three_chain() -> cat_ops.DirectedCategory:
    iv = Polytope.interval
    cover = Cover.build(iv(0, 3), [("x", iv(0, 3)), ("y", iv(1, 3)), ("z", iv(2, 3))], [("x", "y"), ("y", "z")])
    return cat_ops.build_category(cover)


STAR_AUX = Polytope.interval(Fraction(1, 4), Fraction(7, 4))


def category_suite(run: SuiteRun) -> None:
    g = run.gen
    prec = run.precision
    star = standard_star()
    chain = three_chain()

    def random_module(cat: cat_ops.DirectedCategory, trivial: bool) -> cat_ops.RankOneModule:
        cocycle = {} if trivial else {("a", "ab"): g.monomial_unit(1), ("b", "ab"): g.monomial_unit(1)}
        return cat_ops.rank1_module(cat, "left", cocycle, prec)

    def power_series() -> LaurentElement:
        # nonnegative z-exponents keep every hom value of valuation >= 0 on the chain
        return LaurentElement.from_terms(1, ((tuple(abs(b) for b in beta), c) for beta, c in g.laurent(1).terms))

    def composition() -> tuple[bool, str]:
        f = cat_ops.Morphism("x", "y", power_series())
        h = cat_ops.Morphism("y", "z", power_series())
        k = cat_ops.Morphism("z", "z", power_series())
        ctx = chain.context("z")
        left = cat_ops.compose(chain, k, cat_ops.compose(chain, h, f, prec), prec)
        right = cat_ops.compose(chain, cat_ops.compose(chain, k, h, prec), f, prec)
        unit_l = cat_ops.compose(chain, chain.identity("y"), f, prec)
        unit_r = cat_ops.compose(chain, f, chain.identity("x"), prec)
        ctx_y = chain.context("y")
        ok = (
            equal_at(left.value, right.value, ctx, prec)
            and equal_at(unit_l.value, truncate_p(f.value, ctx_y, prec), ctx_y, prec)
            and equal_at(unit_r.value, truncate_p(f.value, ctx_y, prec), ctx_y, prec)
        )
        return ok, f"f={format_laurent(f.value)}"

    def surjectivity(trivial: bool) -> Callable[[], tuple[bool, str]]:
        def body() -> tuple[bool, str]:
            module = random_module(star, trivial)
            target = g.laurent(1)
            witness = cat_ops.tensor_surjectivity_witness(star, module, "ab", target, STAR_AUX, prec)
            return witness.residual_val >= prec.cutoff, f"target={format_laurent(target)}"

        return body

    def reconstruction(trivial: bool) -> Callable[[], tuple[bool, str]]:
        def body() -> tuple[bool, str]:
            module = random_module(star, trivial)
            y = g.laurent(1)
            family = {rho: module.transition(rho, "ab").mul(y) for rho in star.star("ab")}
            witness = cat_ops.hom_reconstruction_witness(star, module, "ab", family, STAR_AUX, prec)
            ok = equal_at(witness.value, y, AffinoidContext.of(STAR_AUX), witness.precision)
            return ok, f"Y={format_laurent(y)} precision={witness.precision}"

        return body

    for i in range(run.count(50)):
        run.case("composition_laws", i, composition)
    for trivial in (True, False):
        kind = "trivial" if trivial else "monomial"
        body = surjectivity(trivial)
        for i in range(run.count(20)):
            run.case(f"tensor_surjectivity_{kind}", i, body)
        body = reconstruction(trivial)
        for i in range(run.count(20)):
            run.case(f"hom_reconstruction_{kind}", i, body)

    def locality_restrict() -> tuple[bool, str]:
        module = random_module(star, True)
        good = all(cat_ops.locality_restrict_check(star, module, module, s).passed for s in star.objects)
        corrupted = star.with_extra_hom("b", "a")
        bad = cat_ops.locality_restrict_check(corrupted, module, module, "a")
        return good and not bad.passed, f"corrupted chain={bad.offending_chain}"

    def filtration() -> tuple[bool, str]:
        module = cat_ops.rank1_module(
            chain, "right", {("x", "y"): LaurentElement.monomial((1,)), ("y", "z"): LaurentElement.monomial((1,)),
                             ("x", "z"): LaurentElement.monomial((2,))}, prec
        )
        report = cat_ops.perfectness_filtration(chain, module, prec)
        complete = [s.sigma for s in report.stages] == list(chain.cover.decreasing_order())
        return report.passed and complete and report.extension_steps == 2, f"stages={len(report.stages)}"

    def cocycle_violation() -> tuple[bool, str]:
        try:
            cat_ops.rank1_module(
                chain, "left", {("x", "y"): LaurentElement.monomial((1,)), ("y", "z"): LaurentElement.monomial((1,))},
                prec,
            )
        except CocycleViolationError as e:
            return e.chain == ("x", "y", "z"), str(e)
        return False, "inconsistent transitions accepted"

    run.case("locality_restrict", 0, locality_restrict)
    run.case("perfectness_filtration", 0, filtration)
    run.case("cocycle_violation_rejected", 0, cocycle_violation)


SUITES: dict[str, Callable[[SuiteRun], None]] = {
    "novikov": novikov_suite,
    "affinoid": affinoid_suite,
    "operator": operator_suite,
    "cech": cech_suite,
    "category": category_suite,
}


def run_suite(name: str, seed: int, precision: Precision, window: int, samples: int | None) -> SuiteCollector:
    run = SuiteRun.start(name, seed, precision, window, samples)
    SUITES[name](run)
    run.collector.unrecorded = run.emitter.unrecorded
    logger.debug("verification_suite_done", extra={"suite": name})
    return run.collector
