"""Laurent elements over the Novikov field and polytope valuations.

An element of the completed ring is handled through a finite representative
``sum c_beta z^beta`` measured against an :class:`AffinoidContext` (a polytope
P and a basepoint q)::

    val_P(f) = min over terms of  val(c_beta) + min_{p in P} <beta, p - q>
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from src.algebra.errors import (
    DimensionMismatchError,
    NonpositiveDeltaError,
    NotASubsetError,
    PreconditionViolated,
)
from src.algebra.novikov import ONE, NovikovScalar, Precision, Valuation
from src.algebra.polytope import IntVector, Point, Polytope, dot, is_subset


@dataclass(frozen=True)
class LaurentElement:
    dim: int
    terms: tuple[tuple[IntVector, NovikovScalar], ...] = ()

    @classmethod
    def from_terms(
        cls, dim: int, pairs: Iterable[tuple[Sequence[int], NovikovScalar]]
    ) -> LaurentElement:
        merged: dict[IntVector, NovikovScalar] = {}
        for beta, c in pairs:
            key = tuple(int(b) for b in beta)
            if len(key) != dim:
                raise DimensionMismatchError(dim, len(key), "exponent vector")
            merged[key] = merged[key].add(c) if key in merged else c
        return cls(dim, tuple(sorted((b, c) for b, c in merged.items() if not c.is_zero())))

    @classmethod
    def from_mapping(cls, dim: int, mapping: Mapping[IntVector, NovikovScalar]) -> LaurentElement:
        return cls.from_terms(dim, mapping.items())

    @classmethod
    def zero(cls, dim: int) -> LaurentElement:
        return cls(dim, ())

    @classmethod
    def monomial(cls, beta: Sequence[int], coefficient: NovikovScalar = ONE) -> LaurentElement:
        return cls.from_terms(len(beta), [(beta, coefficient)])

    @classmethod
    def constant(cls, dim: int, coefficient: NovikovScalar = ONE) -> LaurentElement:
        return cls.monomial((0,) * dim, coefficient)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def as_dict(self) -> dict[IntVector, NovikovScalar]:
        return dict(self.terms)

    def coefficient(self, beta: Sequence[int]) -> NovikovScalar:
        return self.as_dict().get(tuple(beta), NovikovScalar.zero())

    def _check(self, other: LaurentElement) -> None:
        if other.dim != self.dim:
            raise DimensionMismatchError(self.dim, other.dim, "Laurent element")

    def add(self, other: LaurentElement) -> LaurentElement:
        self._check(other)
        return LaurentElement.from_terms(self.dim, self.terms + other.terms)

    def neg(self) -> LaurentElement:
        return LaurentElement(self.dim, tuple((b, c.neg()) for b, c in self.terms))

    def sub(self, other: LaurentElement) -> LaurentElement:
        return self.add(other.neg())

    def scale(self, factor: NovikovScalar) -> LaurentElement:
        return LaurentElement.from_terms(self.dim, ((b, c.mul(factor)) for b, c in self.terms))

    def shift(self, beta: Sequence[int]) -> LaurentElement:
        """Multiply by the monomial z^beta."""
        return LaurentElement(
            self.dim, tuple((tuple(x + y for x, y in zip(b, beta, strict=True)), c) for b, c in self.terms)
        )

    def mul(self, other: LaurentElement) -> LaurentElement:
        self._check(other)
        return LaurentElement.from_terms(
            self.dim,
            (
                (tuple(x + y for x, y in zip(b1, b2)), c1.mul(c2))
                for b1, c1 in self.terms
                for b2, c2 in other.terms
            ),
        )

    def split_by(self, direction: Sequence[int]) -> tuple[LaurentElement, LaurentElement]:
        """Tate split: terms with <beta, w> >= 1 and terms with <beta, w> <= 0."""
        plus = [(b, c) for b, c in self.terms if dot(b, direction) >= 1]
        minus = [(b, c) for b, c in self.terms if dot(b, direction) <= 0]
        return LaurentElement(self.dim, tuple(plus)), LaurentElement(self.dim, tuple(minus))

    def __add__(self, other: LaurentElement) -> LaurentElement:
        return self.add(other)

    def __sub__(self, other: LaurentElement) -> LaurentElement:
        return self.sub(other)

    def __neg__(self) -> LaurentElement:
        return self.neg()

    def __mul__(self, other: LaurentElement) -> LaurentElement:
        return self.mul(other)


@dataclass(frozen=True)
class AffinoidContext:
    polytope: Polytope
    basepoint: Point

    def __post_init__(self) -> None:
        q = tuple(Fraction(x) for x in self.basepoint)
        if len(q) != self.polytope.dim:
            raise DimensionMismatchError(self.polytope.dim, len(q), "basepoint")
        object.__setattr__(self, "basepoint", q)

    @classmethod
    def of(cls, polytope: Polytope) -> AffinoidContext:
        return cls(polytope, polytope.basepoint)

    @property
    def dim(self) -> int:
        return self.polytope.dim

    def monomial_val(self, beta: Sequence[int]) -> Fraction:
        """val_P(z^beta) = min_{p in P} <beta, p - q>."""
        return self.polytope.support_min(beta) - dot(beta, self.basepoint)

    def term_val(self, beta: Sequence[int], c: NovikovScalar) -> Valuation:
        return c.val() + self.monomial_val(beta) if not c.is_zero() else math.inf


def _check_dims(f: LaurentElement, ctx: AffinoidContext) -> None:
    if f.dim != ctx.dim:
        raise DimensionMismatchError(ctx.dim, f.dim, "Laurent element")


def val_p(f: LaurentElement, ctx: AffinoidContext) -> Valuation:
    _check_dims(f, ctx)
    return min((ctx.term_val(b, c) for b, c in f.terms), default=math.inf)


def val_at_point(f: LaurentElement, point: Sequence[Fraction], ctx: AffinoidContext) -> Valuation:
    """Valuation at a single point p of the polytope, val(c) + <beta, p - q> minimized."""
    _check_dims(f, ctx)
    shift = tuple(Fraction(p) - q for p, q in zip(point, ctx.basepoint))
    return min((c.val() + dot(b, shift) for b, c in f.terms), default=math.inf)


def truncate_p(f: LaurentElement, ctx: AffinoidContext, prec: Precision) -> LaurentElement:
    """Drop every T-term whose contribution to val_P is >= the cutoff."""
    _check_dims(f, ctx)
    kept = []
    for beta, c in f.terms:
        local = prec.shifted(-ctx.monomial_val(beta))
        kept.append((beta, c.truncate(local)))
    return LaurentElement.from_terms(f.dim, kept)


def equal_at(f: LaurentElement, g: LaurentElement, ctx: AffinoidContext, prec: Precision) -> bool:
    return val_p(f.sub(g), ctx) >= prec.cutoff


def restrict(
    f: LaurentElement, source: AffinoidContext, target: AffinoidContext, prec: Precision
) -> LaurentElement:
    _check_dims(f, source)
    if not is_subset(target.polytope, source.polytope):
        raise NotASubsetError(
            f"{target.polytope.describe()} is not contained in {source.polytope.describe()}"
        )
    if target.basepoint != source.basepoint:
        raise PreconditionViolated("restriction keeps the basepoint; use rebase first")
    return truncate_p(f, target, prec)


def mul_p(f: LaurentElement, g: LaurentElement, ctx: AffinoidContext, prec: Precision) -> LaurentElement:
    _check_dims(f, ctx)
    _check_dims(g, ctx)
    return truncate_p(f.mul(g), ctx, prec)


def rebase(f: LaurentElement, ctx: AffinoidContext, new_basepoint: Sequence[Fraction]) -> LaurentElement:
    """Move the basepoint: z_q^beta becomes T^<beta, q' - q> z_q'^beta."""
    _check_dims(f, ctx)
    q_new = tuple(Fraction(x) for x in new_basepoint)
    if len(q_new) != ctx.dim:
        raise DimensionMismatchError(ctx.dim, len(q_new), "basepoint")
    flux = tuple(a - b for a, b in zip(q_new, ctx.basepoint))
    return LaurentElement(f.dim, tuple((b, c.shift(dot(b, flux))) for b, c in f.terms))


@dataclass(frozen=True)
class ConvergenceCertificate:
    converges: bool
    constant: Fraction
    bounds: tuple[Fraction, ...]
    limit: Fraction


def convergence_certificate(
    delta: Fraction, epsilon: Fraction, pairs: Sequence[tuple[Fraction, Fraction]]
) -> ConvergenceCertificate:
    """Check the bounded-length convergence criterion for sum c_i T^lambda_i z^gamma_i.

    ``pairs`` are (lambda_i, n_i) with n_i >= 0 the norm of gamma_i. With
    A = max(delta n_i - lambda_i), the series converges on the
    epsilon-neighbourhood once epsilon < min(1/2, delta/2), each term having
    valuation at least (1 - 2 epsilon/delta) lambda_i - 2 epsilon A / delta.
    """
    delta = Fraction(delta)
    epsilon = Fraction(epsilon)
    if delta <= 0:
        raise NonpositiveDeltaError(f"delta must be positive, got {delta}")
    limit = min(Fraction(1, 2), delta / 2)
    constant = max((delta * Fraction(n) - Fraction(lam) for lam, n in pairs), default=Fraction(0))
    ratio = 2 * epsilon / delta
    bounds = tuple((1 - ratio) * Fraction(lam) - ratio * constant for lam, _ in pairs)
    return ConvergenceCertificate(
        converges=epsilon < limit, constant=constant, bounds=bounds, limit=limit
    )
