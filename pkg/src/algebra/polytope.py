"""Integral affine polytopes over the rationals.

A polytope is stored by its halfspaces ``<x, a_i> >= b_i`` (integral a_i,
rational b_i) together with its exact vertex list, enumerated on
construction by cddlib in rational arithmetic.
"""

from __future__ import annotations

import itertools
import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import cdd

from src.algebra.errors import (
    DimensionMismatchError,
    EmptyPolytopeError,
    InvalidCoverError,
    RefinementFailure,
    UnboundedPolytopeError,
    ZeroNormalError,
)

logger = logging.getLogger(__name__)

Point = tuple[Fraction, ...]
IntVector = tuple[int, ...]


def dot(u: Sequence[int | Fraction], v: Sequence[int | Fraction]) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(u, v, strict=True)), Fraction(0))


def _generators(halfspaces: Sequence[Halfspace]) -> cdd.Matrix:
    """V-representation of ``{x : <x, a_i> >= b_i}`` in exact rational arithmetic."""
    # cdd rows read b + A x >= 0
    mat = cdd.Matrix([[-h.offset, *h.normal] for h in halfspaces], number_type="fraction")
    mat.rep_type = cdd.RepType.INEQUALITY
    return cdd.Polyhedron(mat).get_generators()


@dataclass(frozen=True, slots=True)
class Halfspace:
    """The constraint ``<x, normal> >= offset``."""

    normal: IntVector
    offset: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "normal", tuple(int(a) for a in self.normal))
        object.__setattr__(self, "offset", Fraction(self.offset))
        if not any(self.normal):
            raise ZeroNormalError("halfspace normal must be nonzero")

    def slack(self, point: Sequence[Fraction]) -> Fraction:
        return dot(self.normal, point) - self.offset

    def contains(self, point: Sequence[Fraction], strict: bool = False) -> bool:
        s = self.slack(point)
        return s > 0 if strict else s >= 0

    def flipped(self) -> Halfspace:
        return Halfspace(tuple(-a for a in self.normal), -self.offset)


@dataclass(frozen=True, slots=True)
class EmptyPolytope:
    """Result value of an intersection or split that is empty."""

    dim: int

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class Polytope:
    dim: int
    constraints: tuple[Halfspace, ...]
    vertices: tuple[Point, ...]
    basepoint: Point = field(default=())

    @classmethod
    def from_halfspaces(
        cls,
        dim: int,
        constraints: Iterable[Halfspace],
        basepoint: Sequence[Fraction] | None = None,
    ) -> Polytope:
        halfspaces = tuple(dict.fromkeys(constraints))
        if not halfspaces:
            raise UnboundedPolytopeError("a polytope needs at least one constraint")
        for h in halfspaces:
            if len(h.normal) != dim:
                raise DimensionMismatchError(dim, len(h.normal), "halfspace normal")
        q = tuple(Fraction(x) for x in basepoint) if basepoint is not None else (Fraction(0),) * dim
        if len(q) != dim:
            raise DimensionMismatchError(dim, len(q), "basepoint")
        vertices = _vertices(dim, halfspaces)
        return cls(dim=dim, constraints=halfspaces, vertices=vertices, basepoint=q)

    @classmethod
    def box(
        cls,
        lows: Sequence[Fraction | int],
        highs: Sequence[Fraction | int],
        basepoint: Sequence[Fraction] | None = None,
    ) -> Polytope:
        dim = len(lows)
        constraints = []
        for j, (lo, hi) in enumerate(zip(lows, highs, strict=True)):
            e = tuple(int(i == j) for i in range(dim))
            constraints.append(Halfspace(e, Fraction(lo)))
            constraints.append(Halfspace(tuple(-a for a in e), -Fraction(hi)))
        return cls.from_halfspaces(dim, constraints, basepoint)

    @classmethod
    def interval(cls, low: Fraction | int, high: Fraction | int, basepoint: Fraction | int = 0) -> Polytope:
        return cls.box([low], [high], [Fraction(basepoint)])

    def with_basepoint(self, basepoint: Sequence[Fraction]) -> Polytope:
        q = tuple(Fraction(x) for x in basepoint)
        if len(q) != self.dim:
            raise DimensionMismatchError(self.dim, len(q), "basepoint")
        return Polytope(self.dim, self.constraints, self.vertices, q)

    def support_min(self, beta: Sequence[int | Fraction]) -> Fraction:
        if len(beta) != self.dim:
            raise DimensionMismatchError(self.dim, len(beta), "functional")
        return min(dot(beta, v) for v in self.vertices)

    def support_max(self, beta: Sequence[int | Fraction]) -> Fraction:
        return -self.support_min(tuple(-b for b in beta))

    def contains_point(self, point: Sequence[Fraction], strict: bool = False) -> bool:
        return all(h.contains(point, strict) for h in self.constraints)

    def interior_point(self) -> Point:
        """Vertex centroid, a point of the relative interior."""
        k = len(self.vertices)
        return tuple(sum((v[i] for v in self.vertices), Fraction(0)) / k for i in range(self.dim))

    def sample_points(self, rng: random.Random, count: int, resolution: int = 64) -> list[Point]:
        points = []
        for _ in range(count):
            weights = [rng.randint(0, resolution) for _ in self.vertices]
            if not any(weights):
                weights[rng.randrange(len(weights))] = 1
            total = sum(weights)
            points.append(
                tuple(
                    sum((Fraction(w, total) * v[i] for w, v in zip(weights, self.vertices)), Fraction(0))
                    for i in range(self.dim)
                )
            )
        return points

    def grid_points(self, steps: int = 12) -> list[Point]:
        lows = [min(v[i] for v in self.vertices) for i in range(self.dim)]
        highs = [max(v[i] for v in self.vertices) for i in range(self.dim)]
        axes = [
            [lo + (hi - lo) * Fraction(k, steps) for k in range(steps + 1)] if hi > lo else [lo]
            for lo, hi in zip(lows, highs)
        ]
        grid = [p for p in itertools.product(*axes) if self.contains_point(p)]
        return grid + [v for v in self.vertices if v not in grid]

    def same_set(self, other: Polytope | EmptyPolytope) -> bool:
        return isinstance(other, Polytope) and set(self.vertices) == set(other.vertices)

    def describe(self) -> str:
        """Short human label: an interval for n = 1, the vertex list otherwise."""
        if self.dim == 1:
            lo, hi = self.vertices[0][0], self.vertices[-1][0]
            return f"[{lo},{hi}]"
        return "conv{" + ", ".join("[" + ",".join(str(x) for x in v) + "]" for v in self.vertices) + "}"


AnyPolytope = Polytope | EmptyPolytope


def _vertices(dim: int, halfspaces: tuple[Halfspace, ...]) -> tuple[Point, ...]:
    generators = _generators(halfspaces)
    rows = [tuple(Fraction(x) for x in generators[i]) for i in range(generators.row_size)]
    if not rows:
        raise EmptyPolytopeError("constraints have no common solution")
    if generators.lin_set:
        raise UnboundedPolytopeError("constraint normals do not span: the set contains a line")
    rays = [row[1:] for row in rows if row[0] == 0]
    if rays:
        raise UnboundedPolytopeError(
            "polytope is unbounded along " + "[" + ",".join(str(x) for x in rays[0]) + "]"
        )
    logger.debug("vertices_enumerated", extra={"dim": dim, "constraints": len(halfspaces), "vertices": len(rows)})
    return tuple(sorted({tuple(x / row[0] for x in row[1:]) for row in rows}))


def from_halfspaces(dim: int, constraints: Iterable[Halfspace]) -> Polytope:
    return Polytope.from_halfspaces(dim, constraints)


def support_min(p: Polytope, beta: Sequence[int | Fraction]) -> Fraction:
    return p.support_min(beta)


def intersect(p: AnyPolytope, other: AnyPolytope) -> AnyPolytope:
    if p.dim != other.dim:
        raise DimensionMismatchError(p.dim, other.dim, "polytope")
    if isinstance(p, EmptyPolytope) or isinstance(other, EmptyPolytope):
        return EmptyPolytope(p.dim)
    try:
        return Polytope.from_halfspaces(p.dim, p.constraints + other.constraints, p.basepoint)
    except EmptyPolytopeError:
        return EmptyPolytope(p.dim)


def is_subset(p: AnyPolytope, other: AnyPolytope, strict: bool = False) -> bool:
    """Containment of p in other; with strict, p must lie in the interior."""
    if p.dim != other.dim:
        raise DimensionMismatchError(p.dim, other.dim, "polytope")
    if isinstance(p, EmptyPolytope):
        return True
    if isinstance(other, EmptyPolytope):
        return False
    return all(other.contains_point(v, strict) for v in p.vertices)


def laurent_split(
    p: Polytope, u: Sequence[int], level: Fraction
) -> tuple[AnyPolytope, AnyPolytope, AnyPolytope]:
    """Pieces of p where <u, x> >= level, <= level, and = level."""
    upper = Halfspace(tuple(u), Fraction(level))
    lower = upper.flipped()
    plus = clip(p, upper)
    minus = clip(p, lower)
    both = intersect(plus, minus) if plus and minus else EmptyPolytope(p.dim)
    return plus, minus, both


def clip(p: Polytope, h: Halfspace) -> AnyPolytope:
    try:
        return Polytope.from_halfspaces(p.dim, p.constraints + (h,), p.basepoint)
    except EmptyPolytopeError:
        return EmptyPolytope(p.dim)


def primitive_hyperplane(normal: Sequence[int], offset: Fraction) -> tuple[IntVector, Fraction]:
    """Normalize <x, normal> = offset: primitive normal, first nonzero entry positive."""
    g = math.gcd(*normal)
    u = [a // g for a in normal]
    level = Fraction(offset) / g
    if next(a for a in u if a != 0) < 0:
        u = [-a for a in u]
        level = -level
    return tuple(u), level


@dataclass(frozen=True)
class Cover:
    """Pieces of a base polytope indexed by an ordered, partially ordered label set.

    ``relations`` holds the reflexive-transitive closure of the declared
    order; ``tau <= sigma`` requires ``P_sigma`` inside ``P_tau``.
    """

    base: Polytope
    labels: tuple[str, ...]
    pieces: dict[str, Polytope]
    relations: frozenset[tuple[str, str]]

    @classmethod
    def build(
        cls,
        base: Polytope,
        pieces: dict[str, Polytope] | Sequence[tuple[str, Polytope]],
        relations: Iterable[tuple[str, str]] = (),
    ) -> Cover:
        items = list(pieces.items()) if isinstance(pieces, dict) else list(pieces)
        labels = tuple(label for label, _ in items)
        if len(set(labels)) != len(labels):
            raise InvalidCoverError("cover labels must be distinct")
        mapping = {label: piece for label, piece in items}
        for label, piece in mapping.items():
            if piece.dim != base.dim:
                raise DimensionMismatchError(base.dim, piece.dim, f"piece {label}")
            if not is_subset(piece, base):
                raise InvalidCoverError(f"piece {label} is not contained in the base")
        closure = _transitive_closure(labels, relations)
        for tau, sigma in closure:
            if tau != sigma and (sigma, tau) in closure:
                raise InvalidCoverError(f"order relation is cyclic between {tau} and {sigma}")
            if not is_subset(mapping[sigma], mapping[tau]):
                raise InvalidCoverError(f"{tau} <= {sigma} but P_{sigma} is not inside P_{tau}")
        return cls(base=base, labels=labels, pieces=mapping, relations=closure)

    @property
    def dim(self) -> int:
        return self.base.dim

    def leq(self, tau: str, sigma: str) -> bool:
        return (tau, sigma) in self.relations

    def star(self, sigma: str) -> tuple[str, ...]:
        """Labels below sigma, sigma included, in cover order."""
        return tuple(t for t in self.labels if self.leq(t, sigma))

    def maximal(self) -> tuple[str, ...]:
        return tuple(s for s in self.labels if not any(s != t and self.leq(s, t) for t in self.labels))

    def decreasing_order(self) -> tuple[str, ...]:
        """A linear extension listing every label after all labels above it."""
        remaining = list(self.labels)
        ordered: list[str] = []
        while remaining:
            for s in remaining:
                if all(t in ordered for t in remaining if t != s and self.leq(s, t)):
                    ordered.append(s)
                    remaining.remove(s)
                    break
        return tuple(ordered)

    def uncovered_point(self, steps: int = 12) -> Point | None:
        for point in self.base.grid_points(steps):
            if not any(piece.contains_point(point) for piece in self.pieces.values()):
                return point
        return None


def _transitive_closure(labels: tuple[str, ...], relations: Iterable[tuple[str, str]]) -> frozenset[tuple[str, str]]:
    closure = {(s, s) for s in labels}
    for tau, sigma in relations:
        if tau not in labels or sigma not in labels:
            raise InvalidCoverError(f"relation {tau} <= {sigma} names an unknown label")
        closure.add((tau, sigma))
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(closure), repeat=2):
            if b == c and (a, d) not in closure:
                closure.add((a, d))
                changed = True
    return frozenset(closure)


def refinement_splits(cover: Cover) -> list[tuple[IntVector, Fraction]]:
    """Facet hyperplanes of all pieces that cut the base, normalized and sorted."""
    found: set[tuple[IntVector, Fraction]] = set()
    for piece in cover.pieces.values():
        for h in piece.constraints:
            u, level = primitive_hyperplane(h.normal, h.offset)
            if cover.base.support_min(u) < level < cover.base.support_max(u):
                found.add((u, level))
    return sorted(found)


def refinement_cells(
    base: Polytope, splits: Sequence[tuple[IntVector, Fraction]]
) -> dict[tuple[str, ...], Polytope]:
    """Nonempty sign cells of a split set, keyed by ('+'|'-') per split."""
    cells: dict[tuple[str, ...], Polytope] = {}
    for signs in itertools.product("+-", repeat=len(splits)):
        cell: AnyPolytope = base
        for sign, (u, level) in zip(signs, splits):
            plus, minus, _ = laurent_split(cell, u, level)
            cell = plus if sign == "+" else minus
            if not cell:
                break
        if cell:
            cells[signs] = cell
    return cells


def laurent_refinement(cover: Cover) -> list[tuple[IntVector, Fraction]]:
    splits = refinement_splits(cover)
    for signs, cell in refinement_cells(cover.base, splits).items():
        if not any(is_subset(cell, piece) for piece in cover.pieces.values()):
            logger.info("laurent_refinement_failed", extra={"cell": "".join(signs)})
            raise RefinementFailure(
                f"Laurent cell {cell.describe()} lies in no piece of the cover", cell=signs
            )
    return splits
