import random
from fractions import Fraction

import pytest

from src.algebra.errors import (
    DimensionMismatchError,
    EmptyPolytopeError,
    InvalidCoverError,
    RefinementFailure,
    UnboundedPolytopeError,
    ZeroNormalError,
)
from src.algebra.polytope import (
    Cover,
    EmptyPolytope,
    Halfspace,
    Polytope,
    intersect,
    is_subset,
    laurent_refinement,
    laurent_split,
    primitive_hyperplane,
    refinement_cells,
)

half = Fraction(1, 2)


def triangle(size=2):
    return Polytope.from_halfspaces(
        2, [Halfspace((1, 0), 0), Halfspace((0, 1), 0), Halfspace((-1, -1), -size)]
    )


def test_triangle_vertices_are_exact_and_sorted():
    assert triangle().vertices == ((0, 0), (0, 2), (2, 0))


def test_vertices_skip_redundant_constraints_and_stay_rational():
    p = Polytope.from_halfspaces(
        2,
        [Halfspace((1, 0), 0), Halfspace((0, 1), 0), Halfspace((-3, -2), -1), Halfspace((-1, 0), -5)],
    )
    assert p.vertices == ((0, 0), (0, half), (Fraction(1, 3), 0))
    assert all(isinstance(x, Fraction) for v in p.vertices for x in v)


def test_default_basepoint_is_origin():
    assert triangle().basepoint == (0, 0)


def test_unbounded_halfspaces_raise():
    with pytest.raises(UnboundedPolytopeError):
        Polytope.from_halfspaces(2, [Halfspace((1, 0), 0), Halfspace((0, 1), 0)])


def test_strip_is_unbounded():
    with pytest.raises(UnboundedPolytopeError):
        Polytope.from_halfspaces(2, [Halfspace((1, 0), 0), Halfspace((-1, 0), -1)])


def test_contradictory_halfspaces_raise_empty():
    with pytest.raises(EmptyPolytopeError):
        Polytope.from_halfspaces(1, [Halfspace((1,), 2), Halfspace((-1,), -1)])


def test_zero_normal_rejected():
    with pytest.raises(ZeroNormalError):
        Halfspace((0, 0), 1)


def test_normal_length_must_match_dimension():
    with pytest.raises(DimensionMismatchError):
        Polytope.from_halfspaces(2, [Halfspace((1,), 0)])


def test_support_min_and_max():
    p = Polytope.box([0, -1], [2, 1])
    assert p.support_min((1, 1)) == -1
    assert p.support_max((1, -1)) == 3


def test_interval_describe():
    assert Polytope.interval(-1, half).describe() == "[-1,1/2]"


def test_intersect_of_boxes():
    p = intersect(Polytope.box([0, 0], [2, 2]), Polytope.box([1, 1], [3, 3]))
    assert p.same_set(Polytope.box([1, 1], [2, 2]))


def test_disjoint_intersection_is_empty():
    p = intersect(Polytope.interval(0, 1), Polytope.interval(2, 3))
    assert isinstance(p, EmptyPolytope)
    assert not p


def test_touching_intersection_is_a_point():
    p = intersect(Polytope.interval(0, 1), Polytope.interval(1, 2))
    assert p.vertices == ((1,),)


def test_strict_subset_needs_interior():
    inner = Polytope.interval(0, 1)
    assert is_subset(inner, Polytope.interval(0, 2))
    assert not is_subset(inner, Polytope.interval(0, 2), strict=True)
    assert is_subset(inner, Polytope.interval(-1, 2), strict=True)


def test_sample_points_lie_in_polytope():
    p = triangle()
    for point in p.sample_points(random.Random(3), 50):
        assert p.contains_point(point)


def test_laurent_split_of_box():
    plus, minus, both = laurent_split(Polytope.interval(0, 2), (1,), 1)
    assert plus.same_set(Polytope.interval(1, 2))
    assert minus.same_set(Polytope.interval(0, 1))
    assert both.vertices == ((1,),)


def test_laurent_split_outside_gives_empty_side():
    plus, minus, both = laurent_split(Polytope.interval(0, 2), (1,), 5)
    assert isinstance(plus, EmptyPolytope)
    assert minus.same_set(Polytope.interval(0, 2))
    assert isinstance(both, EmptyPolytope)


def test_primitive_hyperplane_normalizes_sign_and_gcd():
    assert primitive_hyperplane((-2, 4), 3) == ((1, -2), Fraction(-3, 2))


def test_cover_order_and_star():
    base = Polytope.interval(0, 2)
    cover = Cover.build(
        base,
        {"a": Polytope.interval(0, Fraction(3, 2)), "b": Polytope.interval(half, 2),
         "ab": Polytope.interval(half, Fraction(3, 2))},
        [("a", "ab"), ("b", "ab")],
    )
    assert cover.leq("a", "ab")
    assert cover.leq("a", "a")
    assert not cover.leq("ab", "a")
    assert cover.star("ab") == ("a", "b", "ab")
    assert cover.maximal() == ("ab",)
    assert cover.decreasing_order()[0] == "ab"


def test_cover_relation_requires_containment():
    with pytest.raises(InvalidCoverError):
        Cover.build(
            Polytope.interval(0, 2),
            [("a", Polytope.interval(0, 1)), ("b", Polytope.interval(1, 2))],
            [("a", "b")],
        )


def test_cover_piece_outside_base_rejected():
    with pytest.raises(InvalidCoverError):
        Cover.build(Polytope.interval(0, 1), [("a", Polytope.interval(0, 2))])


def test_uncovered_point_found():
    cover = Cover.build(
        Polytope.interval(0, 3), [("a", Polytope.interval(0, 1)), ("b", Polytope.interval(2, 3))]
    )
    point = cover.uncovered_point()
    assert point is not None and 1 < point[0] < 2


def test_laurent_refinement_of_three_intervals():
    cover = Cover.build(
        Polytope.interval(0, 1),
        [("a", Polytope.interval(0, half)), ("b", Polytope.interval(Fraction(1, 4), Fraction(3, 4))),
         ("c", Polytope.interval(half, 1))],
    )
    splits = laurent_refinement(cover)
    assert [level for _, level in splits] == [Fraction(1, 4), half, Fraction(3, 4)]
    cells = refinement_cells(cover.base, splits)
    assert len(cells) == 4


def test_laurent_refinement_failure_names_cell():
    base = Polytope.box([0, 0], [2, 2])
    cover = Cover.build(base, [("t", triangle()), ("r", Polytope.box([1, 0], [2, 2]))])
    with pytest.raises(RefinementFailure) as info:
        laurent_refinement(cover)
    assert info.value.cell is not None


def test_intersection_piece_need_not_cover_alone():
    cover = Cover.build(
        Polytope.interval(0, 1),
        {"a": Polytope.interval(0, Fraction(2, 3)), "b": Polytope.interval(Fraction(1, 3), 1),
         "ab": Polytope.interval(Fraction(1, 3), Fraction(2, 3))},
        [("a", "ab"), ("b", "ab")],
    )
    assert cover.maximal() == ("ab",)
    assert cover.uncovered_point() is None
