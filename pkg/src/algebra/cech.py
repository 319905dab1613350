"""Cech complexes of polytope covers and Tate's contraction for Laurent covers.

Two kinds of complex live here:

* :class:`CechComplex` - faces are ordered tuples of cover labels whose
  pieces meet. The differential inserts a label at position i with sign
  (-1)^i.
* :class:`LaurentComplex` - faces are sign words over a list of splits
  (u, level): ``+`` for <u,x> >= level, ``-`` for <= level, ``=`` for the
  hyperplane. It is the tensor product of the two-term complexes, and it
  carries an explicit contraction when every face is nonempty.

Split sets whose sign cells do not form a product go through
:func:`laurent_cover`, the ordered complex over the cells, which
:func:`cover_homotopy` contracts one monomial at a time.

Values are Laurent representatives; restriction between faces keeps the
representative and only truncation at the stated precision changes it.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import sympy

from src.algebra.affinoid import (
    AffinoidContext,
    LaurentElement,
    truncate_p,
    val_p,
)
from src.algebra.errors import (
    DimensionMismatchError,
    NotACocycleError,
    NotACoverError,
    NotLaurentCoverError,
    PrecisionLossError,
    PreconditionViolated,
)
from src.algebra.novikov import NovikovScalar, Precision
from src.algebra.operators import HFClassification, classify_hf
from src.algebra.polytope import (
    AnyPolytope,
    Cover,
    EmptyPolytope,
    IntVector,
    Polytope,
    clip,
    intersect,
    is_subset,
    laurent_refinement,
    laurent_split,
    refinement_cells,
)

logger = logging.getLogger(__name__)

Face = tuple[str, ...]

PLUS, MINUS, BOTH = "+", "-", "="


@dataclass(frozen=True)
class CechCochain:
    degree: int
    values: Mapping[Face, LaurentElement]
    precision: Precision

    def value(self, face: Face, dim: int) -> LaurentElement:
        return self.values.get(face, LaurentElement.zero(dim))

    def nonzero(self) -> dict[Face, LaurentElement]:
        return {f: v for f, v in self.values.items() if not v.is_zero()}

    def add(self, other: CechCochain) -> CechCochain:
        faces = list(dict.fromkeys([*self.values, *other.values]))
        dim = next(iter(v.dim for v in [*self.values.values(), *other.values.values()]), 0)
        return CechCochain(
            self.degree,
            {f: self.value(f, dim).add(other.value(f, dim)) for f in faces},
            self.precision,
        )


@dataclass(frozen=True)
class CechComplex:
    base: Polytope
    labels: tuple[str, ...]
    pieces: Mapping[str, Polytope]
    faces: Mapping[Face, Polytope] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.base.dim

    def context(self, face: Face) -> AffinoidContext:
        return AffinoidContext(self.faces[face], self.base.basepoint)

    def faces_of_degree(self, degree: int) -> list[Face]:
        return [f for f in self.faces if len(f) == degree + 1]

    def as_cover(self) -> Cover:
        return Cover.build(self.base, [(label, self.pieces[label]) for label in self.labels])

    def ordered(self, labels: Iterable[str]) -> Face:
        wanted = set(labels)
        return tuple(label for label in self.labels if label in wanted)


def build(base: Polytope, pieces: Sequence[tuple[str, Polytope]] | Cover, grid_steps: int = 12) -> CechComplex:
    cover = pieces if isinstance(pieces, Cover) else Cover.build(base, pieces)
    missing = cover.uncovered_point(grid_steps)
    if missing is not None:
        raise NotACoverError(
            "pieces do not cover the base near [" + ",".join(str(x) for x in missing) + "]",
            point=missing,
        )
    faces: dict[Face, Polytope] = {}
    for size in range(1, len(cover.labels) + 1):
        for face in itertools.combinations(cover.labels, size):
            polytope: AnyPolytope = cover.pieces[face[0]]
            for label in face[1:]:
                polytope = intersect(polytope, cover.pieces[label])
            if isinstance(polytope, Polytope):
                faces[face] = polytope
    logger.debug("cech_complex_built", extra={"faces": len(faces)})
    return CechComplex(base=cover.base, labels=cover.labels, pieces=dict(cover.pieces), faces=faces)


def cech_differential(complex_: CechComplex, c: CechCochain) -> CechCochain:
    out: dict[Face, LaurentElement] = {}
    for face in complex_.faces_of_degree(c.degree + 1):
        total = LaurentElement.zero(complex_.dim)
        for position, label in enumerate(face):
            rest = face[:position] + face[position + 1 :]
            term = c.value(rest, complex_.dim)
            total = total.add(term if position % 2 == 0 else term.neg())
        out[face] = truncate_p(total, complex_.context(face), c.precision)
    return CechCochain(c.degree + 1, out, c.precision)


def augment(f: LaurentElement, complex_: CechComplex, prec: Precision) -> CechCochain:
    if f.dim != complex_.dim:
        raise DimensionMismatchError(complex_.dim, f.dim, "Laurent element")
    return CechCochain(
        0,
        {face: truncate_p(f, complex_.context(face), prec) for face in complex_.faces_of_degree(0)},
        prec,
    )


def is_cocycle_at(complex_: CechComplex, c: CechCochain) -> Face | None:
    """First face where the coboundary survives truncation, or None."""
    for face, value in cech_differential(complex_, c).values.items():
        if not value.is_zero():
            return face
    return None


def tate_split(f: LaurentElement, axis: int | None = None, direction: Sequence[int] | None = None) -> tuple[LaurentElement, LaurentElement]:
    """(F+, F-) with F+ the terms of positive exponent along the split direction."""
    if direction is None:
        if axis is None:
            raise ValueError("tate_split needs an axis or a direction")
        direction = tuple(int(i == axis - 1) for i in range(f.dim))
    return f.split_by(direction)


@dataclass(frozen=True)
class LaurentComplex:
    base: Polytope
    splits: tuple[tuple[IntVector, Fraction], ...]
    faces: Mapping[Face, Polytope] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.base.dim

    def degree(self, face: Face) -> int:
        return face.count(BOTH)

    def faces_of_degree(self, degree: int) -> list[Face]:
        return [f for f in self.faces if self.degree(f) == degree]

    def context(self, face: Face) -> AffinoidContext:
        return AffinoidContext(self.faces[face], self.base.basepoint)

    def is_product(self) -> bool:
        return len(self.faces) == 3 ** len(self.splits)


def build_laurent(base: Polytope, splits: Iterable[tuple[Sequence[int], Fraction]]) -> LaurentComplex:
    normalized = tuple((tuple(int(x) for x in u), Fraction(level)) for u, level in splits)
    faces: dict[Face, Polytope] = {}
    for face in itertools.product((MINUS, PLUS, BOTH), repeat=len(normalized)):
        cell: AnyPolytope = base
        for sign, (u, level) in zip(face, normalized):
            plus, minus, both = laurent_split(cell, u, level)
            cell = {PLUS: plus, MINUS: minus, BOTH: both}[sign]
            if isinstance(cell, EmptyPolytope):
                break
        if isinstance(cell, Polytope):
            faces[face] = cell
    return LaurentComplex(base=base, splits=normalized, faces=faces)


def laurent_differential(complex_: LaurentComplex, c: CechCochain) -> CechCochain:
    """(dc) on a face sums, over its '=' slots m, (c with m -> '+') - (c with m -> '-'),
    signed by the number of earlier '=' slots."""
    out: dict[Face, LaurentElement] = {}
    for face in complex_.faces_of_degree(c.degree + 1):
        total = LaurentElement.zero(complex_.dim)
        earlier = 0
        for m, sign in enumerate(face):
            if sign != BOTH:
                continue
            upper = c.value(face[:m] + (PLUS,) + face[m + 1 :], complex_.dim)
            lower = c.value(face[:m] + (MINUS,) + face[m + 1 :], complex_.dim)
            term = upper.sub(lower)
            total = total.add(term if earlier % 2 == 0 else term.neg())
            earlier += 1
        out[face] = truncate_p(total, complex_.context(face), c.precision)
    return CechCochain(c.degree + 1, out, c.precision)


def laurent_augment(f: LaurentElement, complex_: LaurentComplex, prec: Precision) -> CechCochain:
    return CechCochain(
        0,
        {face: truncate_p(f, complex_.context(face), prec) for face in complex_.faces_of_degree(0)},
        prec,
    )


Values = dict[Face, LaurentElement]


def _contract(values: Values, splits: Sequence[tuple[IntVector, Fraction]], dim: int) -> Values:
    """H = h_1 (x) 1 + iota_1 r_1 (x) H' on exact representatives."""
    if not splits:
        return {}
    u = splits[0][0]
    rest = splits[1:]
    out: Values = {}

    def put(face: Face, value: LaurentElement) -> None:
        if not value.is_zero():
            out[face] = out[face].add(value) if face in out else value

    tails = {face[1:] for face in values}
    for tail in tails:
        hyper = values.get((BOTH,) + tail)
        if hyper is not None:
            upper, lower = hyper.split_by(u)
            put((PLUS,) + tail, upper)
            put((MINUS,) + tail, lower.neg())
    # iota_1 r_1 (x) H' on the slices with first sign + or -
    sliced: Values = {}
    for tail in tails:
        f_plus = values.get((PLUS,) + tail, LaurentElement.zero(dim))
        f_minus = values.get((MINUS,) + tail, LaurentElement.zero(dim))
        retracted = f_plus.split_by(u)[1].add(f_minus.split_by(u)[0])
        if not retracted.is_zero():
            sliced[tail] = retracted
    for tail, value in _contract(sliced, rest, dim).items():
        put((PLUS,) + tail, value)
        put((MINUS,) + tail, value)
    return out


def _retract(values: Values, splits: Sequence[tuple[IntVector, Fraction]], dim: int) -> LaurentElement:
    """r = r_1 . r' on degree-0 data: (F on +, G on -) -> F- + G+ per split."""
    if not splits:
        return values.get((), LaurentElement.zero(dim))
    u = splits[0][0]
    rest = splits[1:]
    plus = _retract({f[1:]: v for f, v in values.items() if f[0] == PLUS}, rest, dim)
    minus = _retract({f[1:]: v for f, v in values.items() if f[0] == MINUS}, rest, dim)
    return plus.split_by(u)[1].add(minus.split_by(u)[0])


def _require_product(complex_: LaurentComplex) -> None:
    if not complex_.is_product():
        raise NotLaurentCoverError(
            f"only {len(complex_.faces)} of {3 ** len(complex_.splits)} faces are nonempty; "
            "the contraction needs every split to cut every cell"
        )


def laurent_homotopy(complex_: LaurentComplex, c: CechCochain) -> CechCochain:
    """H(c) for a cochain of degree >= 1, truncated per face."""
    _require_product(complex_)
    if c.degree < 1:
        raise ValueError("laurent_homotopy lowers degree; use laurent_retraction in degree 0")
    raw = _contract(dict(c.values), complex_.splits, complex_.dim)
    out = {
        face: truncate_p(raw.get(face, LaurentElement.zero(complex_.dim)), complex_.context(face), c.precision)
        for face in complex_.faces_of_degree(c.degree - 1)
    }
    return CechCochain(c.degree - 1, out, c.precision)


def laurent_retraction(complex_: LaurentComplex, c: CechCochain) -> LaurentElement:
    _require_product(complex_)
    value = _retract(dict(c.values), complex_.splits, complex_.dim)
    return truncate_p(value, AffinoidContext.of(complex_.base), c.precision)


def two_term_homotopy(
    base: Polytope, u: Sequence[int], level: Fraction, c: CechCochain
) -> CechCochain | LaurentElement:
    """Tate's null-homotopy for the cover of P by <u,x> >= level and <= level.

    Degree 1 data F on the hyperplane goes to (F+ on +, -F- on -); degree 0
    data (F on +, G on -) goes to F- + G+ over P.
    """
    complex_ = build_laurent(base, [(u, level)])
    if c.degree == 1:
        return laurent_homotopy(complex_, c)
    return laurent_retraction(complex_, c)


def laurent_identity_defect(complex_: LaurentComplex, c: CechCochain) -> dict[Face, LaurentElement]:
    """Faces where dH + Hd (+ iota r in degree 0) fails to return c at precision."""
    dim = complex_.dim
    dc = laurent_differential(complex_, c)
    lhs: Values = dict(laurent_homotopy(complex_, dc).values)
    if c.degree == 0:
        glued = laurent_retraction(complex_, c)
        for face, value in laurent_augment(glued, complex_, c.precision).values.items():
            lhs[face] = lhs.get(face, LaurentElement.zero(dim)).add(value)
    else:
        for face, value in laurent_differential(complex_, laurent_homotopy(complex_, c)).values.items():
            lhs[face] = lhs.get(face, LaurentElement.zero(dim)).add(value)
    defects = {}
    for face in complex_.faces_of_degree(c.degree):
        diff = lhs.get(face, LaurentElement.zero(dim)).sub(c.value(face, dim))
        if val_p(diff, complex_.context(face)) < c.precision.cutoff:
            defects[face] = diff
    return defects


def laurent_cover(base: Polytope, splits: Sequence[tuple[IntVector, Fraction]]) -> CechComplex:
    """Ordered Cech complex over the nonempty sign cells of a split set.

    Cells are labelled by their sign word, so ``"+-"`` is the cell on the
    upper side of the first split and the lower side of the second.
    """
    normalized = [(tuple(int(x) for x in u), Fraction(level)) for u, level in splits]
    cells = refinement_cells(base, normalized)
    return build(base, [("".join(signs), cell) for signs, cell in cells.items()])


Term = tuple[IntVector, Fraction]


def _terms(c: CechCochain) -> dict[Term, dict[Face, Fraction]]:
    """Rational coefficients of each T^e z^beta, face by face."""
    out: dict[Term, dict[Face, Fraction]] = {}
    for face, value in c.values.items():
        for beta, scalar in value.terms:
            for exponent, coefficient in scalar.terms:
                out.setdefault((beta, exponent), {})[face] = coefficient
    return out


def _alive(complex_: CechComplex, degree: int, term: Term, prec: Precision) -> list[Face]:
    beta, exponent = term
    return [
        face
        for face in complex_.faces_of_degree(degree)
        if exponent + complex_.context(face).monomial_val(beta) < prec.cutoff
    ]


def _coboundary_matrix(rows: list[Face], cols: list[Face]) -> sympy.Matrix:
    index = {face: j for j, face in enumerate(cols)}
    matrix = sympy.zeros(len(rows), len(cols))
    for i, face in enumerate(rows):
        for position in range(len(face)):
            rest = face[:position] + face[position + 1 :]
            if rest in index:
                matrix[i, index[rest]] = (-1) ** position
    return matrix


def _assemble(complex_: CechComplex, degree: int, pieces: dict[Face, list], prec: Precision) -> CechCochain:
    dim = complex_.dim
    return CechCochain(
        degree,
        {
            face: truncate_p(LaurentElement.from_terms(dim, pieces.get(face, [])), complex_.context(face), prec)
            for face in complex_.faces_of_degree(degree)
        },
        prec,
    )


def cover_homotopy(complex_: CechComplex, c: CechCochain) -> CechCochain:
    """Contraction of an ordered Cech complex at precision, for any cover.

    At precision the coefficient of T^e z^beta lives on the faces where that
    term stays below the cutoff. Those faces form the nerve of a convex cover
    of a convex set, so the coboundary is exact there, and its Moore-Penrose
    inverse is the degree-lowering half of a contraction.
    """
    if c.degree < 1:
        raise ValueError("cover_homotopy lowers degree; use cover_projection in degree 0")
    inverses: dict[tuple[tuple[Face, ...], tuple[Face, ...]], sympy.Matrix] = {}
    pieces: dict[Face, list] = {}
    for term, entries in _terms(c).items():
        rows = _alive(complex_, c.degree, term, c.precision)
        cols = _alive(complex_, c.degree - 1, term, c.precision)
        if not rows or not cols:
            continue
        key = (tuple(rows), tuple(cols))
        if key not in inverses:
            inverses[key] = _coboundary_matrix(rows, cols).pinv()
        x = sympy.Matrix(
            [sympy.Rational(q.numerator, q.denominator) for q in (entries.get(face, Fraction(0)) for face in rows)]
        )
        beta, exponent = term
        for face, y in zip(cols, inverses[key] * x):
            if y != 0:
                pieces.setdefault(face, []).append(
                    (beta, NovikovScalar.monomial(exponent, Fraction(int(y.p), int(y.q))))
                )
    return _assemble(complex_, c.degree - 1, pieces, c.precision)


def cover_projection(complex_: CechComplex, c: CechCochain) -> CechCochain:
    """Degree-0 complement of the contraction: each term replaced by its mean over
    the pieces that keep it."""
    if c.degree != 0:
        raise ValueError("cover_projection expects a degree-0 cochain")
    pieces: dict[Face, list] = {}
    for term, entries in _terms(c).items():
        rows = _alive(complex_, 0, term, c.precision)
        if not rows:
            continue
        mean = sum((entries.get(face, Fraction(0)) for face in rows), Fraction(0)) / len(rows)
        if mean == 0:
            continue
        beta, exponent = term
        for face in rows:
            pieces.setdefault(face, []).append((beta, NovikovScalar.monomial(exponent, mean)))
    return _assemble(complex_, 0, pieces, c.precision)


def cover_identity_defect(complex_: CechComplex, c: CechCochain) -> dict[Face, LaurentElement]:
    """Faces where dh + hd + proj fails to return c at precision."""
    dim = complex_.dim
    lhs: Values = {}
    if complex_.faces_of_degree(c.degree + 1):
        lhs.update(cover_homotopy(complex_, cech_differential(complex_, c)).values)
    second = cover_projection(complex_, c) if c.degree == 0 else cech_differential(complex_, cover_homotopy(complex_, c))
    for face, value in second.values.items():
        lhs[face] = lhs.get(face, LaurentElement.zero(dim)).add(value)
    defects = {}
    for face in complex_.faces_of_degree(c.degree):
        diff = lhs.get(face, LaurentElement.zero(dim)).sub(c.value(face, dim))
        if val_p(diff, complex_.context(face)) < c.precision.cutoff:
            defects[face] = diff
    if defects:
        logger.info("cover_identity_failed", extra={"degree": c.degree, "faces": len(defects)})
    return defects


Projection = tuple[tuple[IntVector, str], ...]


def gluing_projections(
    cells: Iterable[tuple[str, ...]], splits: Sequence[tuple[IntVector, Fraction]]
) -> dict[tuple[str, ...], Projection]:
    """Per cell, the monomial filters that sequential gluing applies to its value.

    At each split met on both sides the '+' branch keeps <beta,u> <= 0 and
    the '-' branch keeps <beta,u> >= 1; one-sided splits pass values through.
    The filters of all cells sum to the identity.
    """
    present = set(cells)
    result: dict[tuple[str, ...], Projection] = {}

    def walk(prefix: tuple[str, ...], filters: Projection) -> None:
        if len(prefix) == len(splits):
            if prefix in present:
                result[prefix] = filters
            return
        u = splits[len(prefix)][0]
        upper = any(c[: len(prefix) + 1] == prefix + (PLUS,) for c in present)
        lower = any(c[: len(prefix) + 1] == prefix + (MINUS,) for c in present)
        if upper and lower:
            walk(prefix + (PLUS,), filters + ((u, MINUS),))
            walk(prefix + (MINUS,), filters + ((u, PLUS),))
        elif upper:
            walk(prefix + (PLUS,), filters)
        elif lower:
            walk(prefix + (MINUS,), filters)

    walk((), ())
    return result


def project(f: LaurentElement, filters: Projection) -> LaurentElement:
    for u, side in filters:
        upper, lower = f.split_by(u)
        f = upper if side == PLUS else lower
    return f


def glue(cells: Mapping[tuple[str, ...], LaurentElement], splits: Sequence[tuple[IntVector, Fraction]], dim: int) -> LaurentElement:
    total = LaurentElement.zero(dim)
    for cell, filters in gluing_projections(cells, splits).items():
        total = total.add(project(cells[cell], filters))
    return total


def h0_reconstruct(complex_: CechComplex, c: CechCochain) -> LaurentElement:
    """Global element over the base whose augmentation is the degree-0 cocycle c."""
    if c.degree != 0:
        raise ValueError("h0_reconstruct expects a degree-0 cochain")
    bad = is_cocycle_at(complex_, c)
    if bad is not None:
        raise NotACocycleError(f"values disagree on {{{','.join(bad)}}}", face=bad)
    splits = laurent_refinement(complex_.as_cover())
    cells = refinement_cells(complex_.base, splits)
    cell_values: dict[tuple[str, ...], LaurentElement] = {}
    for signs, cell in cells.items():
        label = next(label for label in complex_.labels if is_subset(cell, complex_.pieces[label]))
        cell_values[signs] = c.value((label,), complex_.dim)
    glued = glue(cell_values, splits, complex_.dim)
    result = truncate_p(glued, AffinoidContext.of(complex_.base), c.precision)
    check = augment(result, complex_, c.precision)
    for face, value in check.values.items():
        if val_p(value.sub(c.value(face, complex_.dim)), complex_.context(face)) < c.precision.cutoff:
            raise PrecisionLossError(f"reconstruction does not restrict to the value on {face[0]}")
    return result


@dataclass(frozen=True)
class LocalityPiece:
    polytope: Polytope
    classification: HFClassification
    is_core: bool


@dataclass(frozen=True)
class LocalityReport:
    passed: bool
    pieces: tuple[LocalityPiece, ...]
    identification: tuple[HFClassification, HFClassification]
    counterexample: Polytope | None = None


def locality_check(
    p: Polytope, p_big: Polytope, p_core: Polytope, neighbourhood: Polytope
) -> LocalityReport:
    """Cover P' by P'' and the parts of P' outside the facets of the neighbourhood.

    Every piece other than P'' must be disjoint from P, so that
    HF(P, P') and HF(P, P'') agree through restriction.
    """
    if not is_subset(p_core, p_big):
        raise PreconditionViolated(f"{p_core.describe()} is not inside {p_big.describe()}")
    if not is_subset(p, neighbourhood):
        raise PreconditionViolated(f"{neighbourhood.describe()} is not a neighbourhood of {p.describe()}")
    near_big = intersect(p_big, neighbourhood)
    near_core = intersect(p_core, neighbourhood)
    same = (
        isinstance(near_big, EmptyPolytope) and isinstance(near_core, EmptyPolytope)
    ) or (isinstance(near_big, Polytope) and near_big.same_set(near_core))
    if not same:
        raise PreconditionViolated("P' and P'' differ on the neighbourhood")
    pieces = [LocalityPiece(p_core, classify_hf(p, p_core), True)]
    for h in neighbourhood.constraints:
        outside = clip(p_big, h.flipped())
        if isinstance(outside, EmptyPolytope) or is_subset(outside, p_core):
            continue
        pieces.append(LocalityPiece(outside, classify_hf(p, outside), False))
    counterexample = next(
        (piece.polytope for piece in pieces if not piece.is_core and piece.classification.tag != "DisjointZero"),
        None,
    )
    identification = (classify_hf(p, p_big), classify_hf(p, p_core))
    if counterexample is not None:
        logger.info("locality_check_failed", extra={"piece": counterexample.describe()})
    return LocalityReport(
        passed=counterexample is None,
        pieces=tuple(pieces),
        identification=identification,
        counterexample=counterexample,
    )
