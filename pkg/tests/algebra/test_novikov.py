import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.algebra.errors import DomainError
from src.algebra.novikov import ONE, NovikovScalar, Precision

exponents = st.fractions(min_value=-4, max_value=6, max_denominator=4)
coefficients = st.fractions(min_value=-5, max_value=5, max_denominator=4)
scalars = st.lists(st.tuples(exponents, coefficients), max_size=4).map(NovikovScalar.from_terms)
nonzero_scalars = scalars.filter(lambda x: not x.is_zero())


def test_from_terms_normalizes_order_and_merges():
    x = NovikovScalar.from_terms([(2, 3), (Fraction(1, 2), 1), (2, -3), (0, 5)])
    assert x.terms == ((Fraction(0), Fraction(5)), (Fraction(1, 2), Fraction(1)))


def test_val_of_example_sum():
    x = NovikovScalar.from_terms([(Fraction(1, 2), 1), (2, 2)])
    assert x.val() == Fraction(1, 2)


def test_val_of_zero_is_infinite():
    assert NovikovScalar.zero().val() == math.inf


@given(scalars, scalars)
@settings(max_examples=200)
def test_ultrametric_inequality(x, y):
    assert (x + y).val() >= min(x.val(), y.val())


@given(scalars, scalars)
@settings(max_examples=200)
def test_val_is_multiplicative(x, y):
    assert (x * y).val() == x.val() + y.val()


@given(scalars, scalars, scalars)
@settings(max_examples=100)
def test_ring_axioms(x, y, w):
    assert (x + y) + w == x + (y + w)
    assert x * (y + w) == x * y + x * w
    assert (x * y) * w == x * (y * w)
    assert x * y == y * x
    assert (x - x).is_zero()
    assert x * ONE == x


@given(nonzero_scalars, st.integers(min_value=1, max_value=10))
@settings(max_examples=200)
def test_inverse_contract(x, cutoff):
    prec = Precision(cutoff)
    y = x.invert(prec)
    assert (x * y - ONE).val() >= cutoff
    assert all(e < cutoff - x.val() for e, _ in y.terms)


def test_monomial_inverse_is_exact():
    x = NovikovScalar.monomial(Fraction(3, 2), 4)
    assert x.invert(Precision(1)) == NovikovScalar.monomial(Fraction(-3, 2), Fraction(1, 4))


def test_inverse_of_one_plus_t():
    x = NovikovScalar.from_terms([(0, 1), (1, 1)])
    assert x.invert(Precision(3)) == NovikovScalar.from_terms([(0, 1), (1, -1), (2, 1)])


def test_invert_zero_raises():
    with pytest.raises(DomainError):
        NovikovScalar.zero().invert(Precision(4))


def test_truncate_drops_terms_at_cutoff():
    x = NovikovScalar.from_terms([(0, 1), (2, 1), (3, 1)])
    assert x.truncate(Precision(2)) == NovikovScalar.one()


@given(scalars, nonzero_scalars)
@settings(max_examples=100)
def test_div_is_accurate_to_cutoff(x, y):
    prec = Precision(6)
    q = x.div(y, prec)
    assert (q * y - x).val() >= prec.cutoff + y.val()


def test_div_by_zero_raises():
    with pytest.raises(DomainError):
        ONE.div(NovikovScalar.zero(), Precision(3))


def test_precision_shifted():
    assert Precision(Fraction(5, 2)).shifted(-1).cutoff == Fraction(3, 2)
