from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.algebra.affinoid import AffinoidContext, LaurentElement, val_p
from src.algebra.errors import AxisOutOfRangeError, NotASubsetError, NotSeparatedError
from src.algebra.novikov import NovikovScalar, Precision
from src.algebra.operators import (
    ContractionForm,
    Convention,
    FiniteOperator,
    Functional,
    GradedOperator,
    classify_hf,
    delta,
    differential,
    disjoint_homotopy,
    disjoint_identity_val,
    eps,
    graded_op_val,
    hbar,
    inclusion_homotopy_eval,
    inclusion_identity_defects,
    op_val,
    projection_eval,
    separation,
    top_projection,
    trace,
)
from src.algebra.polytope import Polytope
from src.verification.suites import hf_corpus

T = NovikovScalar.monomial

scalars = st.builds(
    T,
    st.fractions(min_value=-2, max_value=3, max_denominator=2),
    st.integers(-3, 3).filter(bool),
)


def operators(dim):
    exps = st.tuples(*[st.integers(-2, 2)] * dim)
    return st.lists(st.tuples(st.tuples(exps, exps), scalars), max_size=3).map(
        lambda pairs: FiniteOperator.from_terms(dim, pairs)
    )


def graded(dim):
    labels = [()] if dim == 1 else [(), (1,), (2,)]
    labels += [(1,)] if dim == 1 else [(1, 2)]
    return st.lists(st.tuples(st.sampled_from(labels), operators(dim)), max_size=3).map(
        lambda parts: GradedOperator.from_components(dim, parts)
    )


@given(st.integers(1, 2).flatmap(graded), st.sampled_from(list(Convention)))
@settings(max_examples=100)
def test_differential_squares_to_zero(psi, convention):
    assert differential(differential(psi, convention), convention).is_zero()


def test_differential_of_shift_invariant_operator_vanishes():
    identity = GradedOperator.single(FiniteOperator.from_terms(1, [(((k,), (k,)), T(0)) for k in range(-2, 3)]))
    d = differential(identity)
    # only the ends of the finite window survive
    assert d.component((1,)) == FiniteOperator.from_terms(
        1, [(((-2,), (-2,)), T(0)), (((3,), (3,)), T(0, -1))]
    )


def test_shift_conjugate_moves_both_exponents():
    phi = FiniteOperator.elementary((1,), (0,), T(1))
    assert phi.shift_conjugate(1) == FiniteOperator.elementary((2,), (1,), T(1))


def test_axis_out_of_range():
    with pytest.raises(AxisOutOfRangeError):
        FiniteOperator.elementary((1,), (0,)).shift_conjugate(2)


def test_apply_picks_source_monomial():
    phi = FiniteOperator.from_terms(1, [(((2,), (0,)), T(1)), (((1,), (1,)), T(0))])
    assert phi.apply((0,)) == LaurentElement.monomial((2,), T(1))


def test_op_val_uses_both_polytopes():
    phi = FiniteOperator.elementary((1,), (0,))
    source = AffinoidContext.of(Polytope.interval(0, 1))
    target = AffinoidContext.of(Polytope.interval(1, 2))
    assert op_val(phi, source, target) == 1


@given(st.integers(1, 2).flatmap(graded))
@settings(max_examples=60)
def test_inclusion_homotopy_contracts(psi):
    assert inclusion_identity_defects(psi, 2) == []


def test_inclusion_homotopy_requires_subset():
    psi = GradedOperator.single(FiniteOperator.elementary((0,), (0,)), (1,))
    with pytest.raises(NotASubsetError):
        inclusion_homotopy_eval(
            psi, (0,), AffinoidContext.of(Polytope.interval(0, 1)), AffinoidContext.of(Polytope.interval(0, 2))
        )


INCLUSION_SOURCE = AffinoidContext.of(Polytope.interval(-1, 2))
INCLUSION_TARGET = AffinoidContext.of(Polytope.interval(0, 1))


@pytest.mark.parametrize(
    "gamma, alpha_in, alpha, expected",
    [
        ((0,), (0,), (-1,), LaurentElement.monomial((-1,), T(0, -1))),
        ((1,), (1,), (3,), LaurentElement.monomial((3,))),
    ],
)
def test_inclusion_homotopy_values(gamma, alpha_in, alpha, expected):
    psi = GradedOperator.single(FiniteOperator.elementary(gamma, alpha_in), (1,))
    values = inclusion_homotopy_eval(psi, alpha, INCLUSION_SOURCE, INCLUSION_TARGET)
    assert values == {(): expected}


def test_inclusion_homotopy_vanishes_at_zero_exponent():
    psi = GradedOperator.single(FiniteOperator.elementary((1,), (0,)), (1,))
    assert inclusion_homotopy_eval(psi, (0,), INCLUSION_SOURCE, INCLUSION_TARGET) == {}


@given(graded(1), st.integers(-3, 3))
@settings(max_examples=60)
def test_inclusion_homotopy_is_continuous(psi, a):
    bound = graded_op_val(psi, INCLUSION_SOURCE, INCLUSION_TARGET)
    for value in inclusion_homotopy_eval(psi, (a,), INCLUSION_SOURCE, INCLUSION_TARGET).values():
        assert val_p(value, INCLUSION_TARGET) - INCLUSION_SOURCE.monomial_val((a,)) >= bound


def test_projection_eval_multiplies_by_value_at_one():
    shift = GradedOperator.single(FiniteOperator.elementary((1,), (0,)))
    assert projection_eval(shift, (2,)) == LaurentElement.monomial((3,))
    assert projection_eval(GradedOperator.single(FiniteOperator.elementary((0,), (0,))), (5,)) == (
        LaurentElement.monomial((5,))
    )


def test_projection_eval_vanishes_when_one_maps_to_zero():
    psi = GradedOperator.single(FiniteOperator.elementary((1,), (1,)))
    assert projection_eval(psi, (2,)).is_zero()


@given(st.integers(1, 2).flatmap(lambda n: st.lists(
    st.tuples(st.tuples(*[st.integers(-2, 2)] * n), scalars), max_size=3
).map(lambda pairs, n=n: Functional.from_terms(n, pairs))))
def test_eps_after_delta_is_identity(rho):
    assert eps(delta(rho)) == rho


@given(st.integers(1, 2).flatmap(graded))
@settings(max_examples=60)
def test_duality_homotopy_identity(psi):
    lhs = differential(hbar(psi), Convention.DUAL).add(hbar(differential(psi, Convention.DUAL)))
    assert lhs.sub(psi.sub(top_projection(psi))).is_zero()


@given(operators(2), operators(2), scalars)
def test_trace_is_linear_and_shift_invariant(phi, chi, c):
    assert trace(phi.add(chi.scale(c))) == trace(phi) + c * trace(chi)
    assert trace(phi.shift_conjugate(2)) == trace(phi)


def test_trace_counts_diagonal_only():
    phi = FiniteOperator.from_terms(1, [(((0,), (0,)), T(1)), (((1,), (1,)), T(2)), (((1,), (0,)), T(0))])
    assert trace(phi) == T(1) + T(2)


@pytest.mark.parametrize("p0, p1, expected", hf_corpus())
def test_classify_hf_corpus(p0, p1, expected):
    assert classify_hf(p0, p1).tag == expected


def test_classify_hf_describe():
    result = classify_hf(Polytope.interval(-1, 1), Polytope.interval(0, 1))
    assert result.describe() == "InclusionIso deg=0 ring=Gamma^[0,1] from=[-1,1] to=[0,1] form=staircase"


def test_classify_hf_inclusion_witness_names_contraction():
    p0, p1 = Polytope.box([-1, -1], [1, 1]), Polytope.box([0, 0], [1, 1])
    witness = classify_hf(p0, p1).witness
    assert witness["from"] == p0.describe()
    assert witness["to"] == p1.describe()
    form = ContractionForm(witness["form"])
    psi = GradedOperator.single(FiniteOperator.elementary((1, 0), (0, 1)), (1, 2))
    assert inclusion_identity_defects(psi, 2, form) == []


def test_classify_hf_disjoint_reports_axis():
    result = classify_hf(Polytope.interval(0, 1), Polytope.interval(2, 3))
    assert result.witness["axis"] == "1"
    assert result.witness["orientation"] == "-1"


def test_separation_requires_gap():
    with pytest.raises(NotSeparatedError):
        separation(Polytope.interval(0, 1), Polytope.interval(1, 2))


def test_separation_gap():
    sep = separation(Polytope.interval(3, 4), Polytope.interval(0, Fraction(1, 2)))
    assert (sep.orientation, sep.gap) == (1, Fraction(5, 2))


@pytest.mark.parametrize(
    "p0, p1",
    [
        (Polytope.interval(0, 1), Polytope.interval(2, 3)),
        (Polytope.interval(2, 3), Polytope.interval(0, 1)),
        (Polytope.interval(0, 1), Polytope.interval(Fraction(3, 2), 2)),
    ],
)
def test_disjoint_homotopy_contracts_to_cutoff(p0, p1):
    prec = Precision(10)
    psi = GradedOperator.from_components(
        1,
        [
            ((), FiniteOperator.from_terms(1, [(((1,), (0,)), T(0)), (((-1,), (2,)), T(1))])),
            ((1,), FiniteOperator.elementary((0,), (1,), T(Fraction(1, 2)))),
        ],
    )
    source, target = AffinoidContext.of(p0), AffinoidContext.of(p1)
    assert disjoint_identity_val(psi, source, target, prec) >= prec.cutoff


def test_disjoint_homotopy_rejects_overlap():
    ctx = AffinoidContext.of(Polytope.interval(0, 1))
    psi = GradedOperator.single(FiniteOperator.elementary((0,), (0,)), (1,))
    with pytest.raises(NotSeparatedError):
        disjoint_homotopy(psi, ctx, ctx, Precision(4))


def test_hbar_sums_back_along_the_image_grade():
    psi = GradedOperator.single(FiniteOperator.elementary((2,), (0,)), (1,))
    expected = FiniteOperator.from_terms(1, [(((2,), (0,)), T(0)), (((1,), (-1,)), T(0))])
    assert hbar(psi) == GradedOperator.single(expected)


def test_hbar_vanishes_on_grade_zero():
    psi = GradedOperator.single(FiniteOperator.elementary((0,), (5,)), (1,))
    assert hbar(psi).is_zero()


@given(st.integers(1, 2).flatmap(lambda n: st.lists(
    st.tuples(st.tuples(*[st.integers(-2, 2)] * n), scalars), max_size=3
).map(lambda pairs, n=n: Functional.from_terms(n, pairs))))
def test_hbar_vanishes_on_image_of_delta(rho):
    top = tuple(range(1, rho.dim + 1))
    assert hbar(GradedOperator.single(delta(rho), top)).is_zero()


def test_disjoint_homotopy_keeps_terms_below_guaranteed_bound():
    source = AffinoidContext.of(Polytope.interval(1, 2))
    target = AffinoidContext.of(Polytope.interval(-2, -1))
    assert separation(source.polytope, target.polytope).gap == 2
    psi = GradedOperator.single(FiniteOperator.elementary((0,), (0,)), (1,))
    h = disjoint_homotopy(psi, source, target, Precision(7))
    assert [key for key, _ in h.component(()).entries] == [((-3,), (-3,)), ((-2,), (-2,)), ((-1,), (-1,))]
