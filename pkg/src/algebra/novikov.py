"""Exact arithmetic in the Novikov field with rational exponents and coefficients.

Elements are finite sums ``c_1 T^e_1 + ... + c_k T^e_k`` kept in normal form:
exponents strictly ascending, no zero coefficients. Infinite series only
appear as a finite representative together with a :class:`Precision`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from src.algebra.errors import DomainError

Rational = Fraction
Valuation = Fraction | float  # float only for math.inf


def as_fraction(value: int | str | Fraction) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


@dataclass(frozen=True, slots=True)
class Precision:
    """T-adic cutoff E: terms of valuation >= E are discarded."""

    cutoff: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "cutoff", as_fraction(self.cutoff))

    def shifted(self, amount: Fraction | int) -> Precision:
        return Precision(self.cutoff + amount)

    def __str__(self) -> str:
        return str(self.cutoff)


@dataclass(frozen=True, slots=True)
class NovikovScalar:
    terms: tuple[tuple[Fraction, Fraction], ...] = ()

    @classmethod
    def from_terms(cls, pairs: Iterable[tuple[Fraction | int, Fraction | int]]) -> NovikovScalar:
        """Normalize arbitrary (exponent, coefficient) pairs, merging repeats."""
        merged: dict[Fraction, Fraction] = {}
        for exponent, coefficient in pairs:
            e = as_fraction(exponent)
            merged[e] = merged.get(e, Fraction(0)) + as_fraction(coefficient)
        return cls(tuple(sorted((e, c) for e, c in merged.items() if c != 0)))

    @classmethod
    def zero(cls) -> NovikovScalar:
        return cls(())

    @classmethod
    def one(cls) -> NovikovScalar:
        return cls(((Fraction(0), Fraction(1)),))

    @classmethod
    def constant(cls, c: Fraction | int) -> NovikovScalar:
        return cls.monomial(0, c)

    @classmethod
    def monomial(cls, exponent: Fraction | int, coefficient: Fraction | int = 1) -> NovikovScalar:
        c = as_fraction(coefficient)
        if c == 0:
            return cls(())
        return cls(((as_fraction(exponent), c),))

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def leading_term(self) -> tuple[Fraction, Fraction]:
        if not self.terms:
            raise DomainError("zero has no leading term")
        return self.terms[0]

    def val(self) -> Valuation:
        return self.terms[0][0] if self.terms else math.inf

    def add(self, other: NovikovScalar) -> NovikovScalar:
        return NovikovScalar.from_terms(self.terms + other.terms)

    def neg(self) -> NovikovScalar:
        return NovikovScalar(tuple((e, -c) for e, c in self.terms))

    def sub(self, other: NovikovScalar) -> NovikovScalar:
        return self.add(other.neg())

    def scale(self, factor: Fraction | int) -> NovikovScalar:
        f = as_fraction(factor)
        if f == 0:
            return NovikovScalar(())
        return NovikovScalar(tuple((e, c * f) for e, c in self.terms))

    def shift(self, amount: Fraction | int) -> NovikovScalar:
        """Multiply by T^amount."""
        a = as_fraction(amount)
        return NovikovScalar(tuple((e + a, c) for e, c in self.terms))

    def mul(self, other: NovikovScalar) -> NovikovScalar:
        return NovikovScalar.from_terms(
            (e1 + e2, c1 * c2) for e1, c1 in self.terms for e2, c2 in other.terms
        )

    def truncate(self, prec: Precision) -> NovikovScalar:
        return NovikovScalar(tuple((e, c) for e, c in self.terms if e < prec.cutoff))

    def invert(self, prec: Precision) -> NovikovScalar:
        """Truncated inverse y with val(x*y - 1) >= prec.cutoff.

        Writes x = c0 T^v (1 + u) with val(u) > 0 and sums the geometric
        series in -u until the next power has valuation >= E. Monomials are
        inverted exactly whatever the precision.
        """
        if self.is_zero():
            raise DomainError("cannot invert zero")
        v, c0 = self.terms[0]
        head = NovikovScalar.monomial(-v, 1 / c0)
        u = self.mul(head).sub(NovikovScalar.one())
        if u.is_zero():
            return head
        # y = head * sum (-u)^k, accurate once val((-u)^k) >= E
        minus_u = u.neg()
        total = NovikovScalar.one()
        power = NovikovScalar.one()
        while True:
            power = power.mul(minus_u).truncate(prec)
            if power.is_zero():
                break
            total = total.add(power)
        return total.mul(head).truncate(prec.shifted(-v))

    def div(self, other: NovikovScalar, prec: Precision) -> NovikovScalar:
        """self / other, accurate to valuation prec.cutoff."""
        if other.is_zero():
            raise DomainError("division by zero")
        if self.is_zero():
            return self
        shift = self.val() - other.val()
        return self.mul(other.invert(prec.shifted(-shift))).truncate(prec)

    def __add__(self, other: NovikovScalar) -> NovikovScalar:
        return self.add(other)

    def __sub__(self, other: NovikovScalar) -> NovikovScalar:
        return self.sub(other)

    def __neg__(self) -> NovikovScalar:
        return self.neg()

    def __mul__(self, other: NovikovScalar) -> NovikovScalar:
        return self.mul(other)

    def __bool__(self) -> bool:
        return bool(self.terms)


ZERO = NovikovScalar.zero()
ONE = NovikovScalar.one()


def val(x: NovikovScalar) -> Valuation:
    return x.val()


def add(x: NovikovScalar, y: NovikovScalar) -> NovikovScalar:
    return x.add(y)


def mul(x: NovikovScalar, y: NovikovScalar) -> NovikovScalar:
    return x.mul(y)


def invert(x: NovikovScalar, prec: Precision) -> NovikovScalar:
    return x.invert(prec)


def truncate(x: NovikovScalar, prec: Precision) -> NovikovScalar:
    return x.truncate(prec)
