import math
from fractions import Fraction

import pytest

from src.algebra.affinoid import LaurentElement
from src.algebra.novikov import NovikovScalar, Precision
from src.algebra.operators import FiniteOperator, GradedOperator
from src.algebra.polytope import Polytope
from src.formats.text import (
    TextFormatError,
    format_cochain,
    format_laurent,
    format_module,
    format_novikov,
    format_operator,
    format_polytope,
    format_rational,
    format_valuation,
    parse_cochain,
    parse_cover,
    parse_laurent,
    parse_module,
    parse_novikov,
    parse_operator,
    parse_polytope,
    parse_rational,
)

T = NovikovScalar.monomial


def test_rational_canonical_form():
    assert format_rational(Fraction(4, 6)) == "2/3"
    assert format_rational(Fraction(-3, 1)) == "-3"
    assert parse_rational(" -6/4 ") == Fraction(-3, 2)


def test_double_slash_reports_column():
    with pytest.raises(TextFormatError) as info:
        parse_rational("1//2")
    assert info.value.column == 2


def test_zero_denominator_rejected():
    with pytest.raises(TextFormatError):
        parse_rational("3/0")


def test_valuation_of_zero_prints_inf():
    assert format_valuation(math.inf) == "inf"
    assert format_valuation(Fraction(1, 2)) == "1/2"


def test_novikov_parse_normalizes_term_order():
    x = parse_novikov("2*T^(2) + 1*T^(1/2)")
    assert x == NovikovScalar.from_terms([(Fraction(1, 2), 1), (2, 2)])
    assert format_novikov(x) == "1*T^(1/2) + 2*T^(2)"


def test_novikov_shorthand_forms():
    assert parse_novikov("T") == T(1)
    assert parse_novikov("3 + T^2") == NovikovScalar.from_terms([(0, 3), (2, 1)])
    assert format_novikov(NovikovScalar.zero()) == "0"


def test_novikov_garbage_is_a_format_error():
    with pytest.raises(TextFormatError):
        parse_novikov("1*T^(1/2) +")


def test_laurent_round_trip_is_canonical():
    text = "(1*T^(1)) * z[-1,0] + (2)*z[1,2]"
    f = parse_laurent(text)
    assert f == LaurentElement.from_terms(2, [((-1, 0), T(1)), ((1, 2), T(0, 2))])
    assert parse_laurent(format_laurent(f)) == f


def test_laurent_zero_needs_dimension():
    assert parse_laurent("0", dim=2).is_zero()
    with pytest.raises(TextFormatError):
        parse_laurent("0")


def test_laurent_dimension_mismatch_between_terms():
    with pytest.raises(TextFormatError):
        parse_laurent("(1)*z[1] + (1)*z[1,1]")


def test_operator_text():
    psi = parse_operator("(1)*e[1][0] ^ b{1} + (1*T^(1/2))*e[0][0]")
    assert psi.component((1,)) == FiniteOperator.elementary((1,), (0,))
    assert psi.component(()) == FiniteOperator.elementary((0,), (0,), T(Fraction(1, 2)))
    assert parse_operator(format_operator(psi)) == psi
    assert format_operator(GradedOperator.zero(1)) == "0"


def test_operator_label_outside_axes_rejected():
    with pytest.raises(TextFormatError):
        parse_operator("(1)*e[0][0] ^ b{2}")


def test_polytope_text():
    p = parse_polytope("P{dim=1; q=[1/2]; ineq [1] >= 0; ineq [-1] >= -1}")
    assert p.same_set(Polytope.interval(0, 1))
    assert p.basepoint == (Fraction(1, 2),)
    assert parse_polytope(format_polytope(p)).same_set(p)


def test_polytope_wrong_normal_length():
    with pytest.raises(TextFormatError):
        parse_polytope("P{dim=2; ineq [1] >= 0}")


COVER = """
# two overlapping intervals
base P{dim=1; ineq [1] >= 0; ineq [-1] >= -2}
piece a P{dim=1; ineq [1] >= 0; ineq [-1] >= -3/2}
piece b P{dim=1; ineq [1] >= 1/2; ineq [-1] >= -2}
piece ab P{dim=1; ineq [1] >= 1/2; ineq [-1] >= -3/2}
a <= ab
b <= ab
"""


def test_cover_file():
    spec = parse_cover(COVER)
    assert [label for label, _ in spec.pieces] == ["a", "b", "ab"]
    assert spec.relations == (("a", "ab"), ("b", "ab"))
    cover = spec.build()
    assert cover.leq("a", "ab")


def test_cover_file_needs_base_first():
    with pytest.raises(TextFormatError) as info:
        parse_cover("piece a P{dim=1; ineq [1] >= 0; ineq [-1] >= -1}")
    assert info.value.line == 1


def test_cochain_file_with_sign_faces():
    c = parse_cochain("prec 5\nface {=}: (1)*z[1] + (1)*z[-1]\n", 1, Precision(8))
    assert c.precision.cutoff == 5
    assert c.value(("=",), 1) == parse_laurent("(1)*z[1] + (1)*z[-1]")


def test_cochain_file_with_labels():
    text = "degree 1\nface {a,b}: (1)*z[0]\nface {b,c}: (1*T^(1))*z[2]\n"
    c = parse_cochain(text, 1, Precision(4))
    assert c.degree == 1
    assert set(c.values) == {("a", "b"), ("b", "c")}
    assert format_cochain(c).splitlines()[0] == "degree 1"


def test_cochain_degree_mismatch_reports_line():
    with pytest.raises(TextFormatError) as info:
        parse_cochain("degree 1\nface {a}: (1)*z[0]\n", 1, Precision(4))
    assert info.value.line == 2


def test_module_file():
    spec = parse_module("side left\ng[a<=ab] = (1)*z[1]\n", 1)
    assert spec.side == "left"
    assert spec.cocycle[("a", "ab")] == LaurentElement.monomial((1,))
    assert parse_module(format_module(spec), 1) == spec


def test_module_side_is_checked():
    with pytest.raises(TextFormatError):
        parse_module("side middle\n", 1)
