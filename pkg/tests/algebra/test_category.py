from fractions import Fraction

import pytest

from src.algebra.affinoid import AffinoidContext, LaurentElement, equal_at
from src.algebra.category import (
    Morphism,
    compose,
    hom_reconstruction_witness,
    locality_restrict_check,
    perfectness_filtration,
    rank1_module,
    tensor_surjectivity_witness,
    unit_inverse,
)
from src.algebra.errors import (
    CocycleViolationError,
    CoverAssumptionViolated,
    NotComparableError,
    NotCompatibleError,
)
from src.algebra.novikov import NovikovScalar, Precision
from src.algebra.polytope import Polytope
from src.verification.suites import STAR_AUX, standard_star, three_chain

T = NovikovScalar.monomial
prec = Precision(8)


def z(k, e=0):
    return LaurentElement.monomial((k,), T(e))


@pytest.fixture
def chain():
    return three_chain()


@pytest.fixture
def star():
    return standard_star()


def twisted(star):
    return rank1_module(star, "left", {("a", "ab"): z(1), ("b", "ab"): z(-1, 1)}, prec)


def test_compose_multiplies_on_smallest_polytope(chain):
    f = Morphism("x", "y", z(1))
    g = Morphism("y", "z", z(1, 1))
    composed = compose(chain, g, f, prec)
    assert (composed.source, composed.target) == ("x", "z")
    assert composed.value == z(2, 1)


def test_compose_is_associative_with_units(chain):
    f = Morphism("x", "y", z(1) + z(0, 2))
    g = Morphism("y", "z", z(2))
    k = Morphism("z", "z", z(0, 1))
    ctx = chain.context("z")
    left = compose(chain, k, compose(chain, g, f, prec), prec)
    right = compose(chain, compose(chain, k, g, prec), f, prec)
    assert equal_at(left.value, right.value, ctx, prec)
    unit = compose(chain, chain.identity("y"), f, prec)
    assert equal_at(unit.value, f.value, chain.context("y"), prec)


def test_compose_rejects_wrong_direction(chain):
    with pytest.raises(NotComparableError):
        compose(chain, Morphism("y", "x", z(0)), Morphism("z", "y", z(0)), prec)


def test_hom_space_uses_target_ring(chain):
    assert chain.hom_context("x", "z").polytope.same_set(Polytope.interval(2, 3))
    with pytest.raises(NotComparableError):
        chain.hom_context("z", "x")


def test_unit_inverse_of_monomial():
    assert unit_inverse(LaurentElement.monomial((2,), T(1, 4))) == LaurentElement.monomial(
        (-2,), T(-1, Fraction(1, 4))
    )


def test_cocycle_violation_reports_chain(chain):
    with pytest.raises(CocycleViolationError) as info:
        rank1_module(chain, "left", {("x", "y"): z(1), ("y", "z"): z(1)}, prec)
    assert info.value.chain == ("x", "y", "z")


def test_consistent_cocycle_accepted(chain):
    module = rank1_module(chain, "right", {("x", "y"): z(1), ("y", "z"): z(1), ("x", "z"): z(2)}, prec)
    assert module.transition("x", "z") == z(2)
    assert module.transition("y", "y") == LaurentElement.constant(1)


def test_transition_must_be_a_unit(chain):
    with pytest.raises(CocycleViolationError):
        rank1_module(chain, "left", {("x", "y"): z(1) + z(0)}, prec)


@pytest.mark.parametrize("module_of", [lambda s: rank1_module(s, "left", {}, prec), twisted], ids=["trivial", "monomial"])
def test_tensor_surjectivity_witness(star, module_of):
    target = z(3) + z(-2, 1) + z(0, Fraction(1, 2))
    witness = tensor_surjectivity_witness(star, module_of(star), "ab", target, STAR_AUX, prec)
    assert witness.residual_val >= prec.cutoff
    assert set(witness.components) <= set(star.star("ab"))


@pytest.mark.parametrize("module_of", [lambda s: rank1_module(s, "left", {}, prec), twisted], ids=["trivial", "monomial"])
def test_hom_reconstruction_witness(star, module_of):
    module = module_of(star)
    y = z(2) + z(-1, 2)
    family = {rho: module.transition(rho, "ab").mul(y) for rho in star.star("ab")}
    witness = hom_reconstruction_witness(star, module, "ab", family, STAR_AUX, prec)
    assert equal_at(witness.value, y, AffinoidContext.of(STAR_AUX), witness.precision)


def test_hom_reconstruction_rejects_incompatible_family(star):
    module = rank1_module(star, "left", {}, prec)
    with pytest.raises(NotCompatibleError) as info:
        hom_reconstruction_witness(star, module, "ab", {"a": z(0)}, STAR_AUX, prec)
    assert info.value.pair == ("a", "ab")


def test_auxiliary_polytope_must_contain_piece_in_interior(star):
    module = rank1_module(star, "left", {}, prec)
    with pytest.raises(CoverAssumptionViolated):
        tensor_surjectivity_witness(star, module, "ab", z(0), star.polytope("ab"), prec)


def test_locality_restrict_holds_and_detects_corruption(star):
    module = rank1_module(star, "left", {}, prec)
    assert all(locality_restrict_check(star, module, module, s).passed for s in star.objects)
    report = locality_restrict_check(star.with_extra_hom("b", "a"), module, module, "a")
    assert not report.passed
    assert "b" in report.offending_chain


def test_perfectness_filtration_follows_decreasing_order(chain):
    module = rank1_module(chain, "right", {("x", "y"): z(1), ("y", "z"): z(1), ("x", "z"): z(2)}, prec)
    report = perfectness_filtration(chain, module, prec)
    assert [stage.sigma for stage in report.stages] == ["z", "y", "x"]
    assert report.stages[0].is_base
    assert report.extension_steps == 2
    assert report.passed
