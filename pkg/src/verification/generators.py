"""Seeded random values for the verification suites.

Every generator draws from the ``random.Random`` it is handed, so a suite
run is fully determined by its seed.
"""

from __future__ import annotations

import random
from fractions import Fraction

from src.algebra.affinoid import LaurentElement
from src.algebra.novikov import NovikovScalar
from src.algebra.operators import FiniteOperator, Functional, GradedOperator, all_subsets
from src.algebra.polytope import Polytope


class Generators:
    def __init__(self, rng: random.Random) -> None:
        self.rng = rng

    def rational(self, bound: int = 5, denominator: int = 4) -> Fraction:
        return Fraction(self.rng.randint(-bound * denominator, bound * denominator), self.rng.randint(1, denominator))

    def nonzero_rational(self, bound: int = 5, denominator: int = 4) -> Fraction:
        while True:
            x = self.rational(bound, denominator)
            if x:
                return x

    def exponent(self, low: int = -4, high: int = 4, denominator: int = 2) -> Fraction:
        return Fraction(self.rng.randint(low * denominator, high * denominator), denominator)

    def novikov(self, max_terms: int = 3, low: int = -4, high: int = 4) -> NovikovScalar:
        count = self.rng.randint(0, max_terms)
        return NovikovScalar.from_terms(
            (self.exponent(low, high), self.nonzero_rational()) for _ in range(count)
        )

    def nonzero_novikov(self, max_terms: int = 3, low: int = -4, high: int = 4) -> NovikovScalar:
        while True:
            x = self.novikov(max_terms, low, high)
            if not x.is_zero():
                return x

    def int_vector(self, dim: int, radius: int = 3) -> tuple[int, ...]:
        return tuple(self.rng.randint(-radius, radius) for _ in range(dim))

    def laurent(self, dim: int, max_terms: int = 4, radius: int = 3) -> LaurentElement:
        count = self.rng.randint(0, max_terms)
        return LaurentElement.from_terms(
            dim, ((self.int_vector(dim, radius), self.nonzero_novikov(2)) for _ in range(count))
        )

    def finite_operator(self, dim: int, max_terms: int = 3, radius: int = 2) -> FiniteOperator:
        count = self.rng.randint(1, max_terms)
        return FiniteOperator.from_terms(
            dim,
            (((self.int_vector(dim, radius), self.int_vector(dim, radius)), self.nonzero_novikov(2))
             for _ in range(count)),
        )

    def graded_operator(self, dim: int, max_terms: int = 3, radius: int = 2) -> GradedOperator:
        subsets = all_subsets(dim)
        chosen = self.rng.sample(subsets, self.rng.randint(1, len(subsets)))
        return GradedOperator.from_components(
            dim, [(s, self.finite_operator(dim, max_terms, radius)) for s in chosen]
        )

    def functional(self, dim: int, max_terms: int = 3, radius: int = 3) -> Functional:
        count = self.rng.randint(0, max_terms)
        return Functional.from_terms(
            dim, ((self.int_vector(dim, radius), self.nonzero_novikov(2)) for _ in range(count))
        )

    def box(self, dim: int, radius: int = 3, denominator: int = 2) -> Polytope:
        lows, highs = [], []
        for _ in range(dim):
            a = Fraction(self.rng.randint(-radius * denominator, radius * denominator - 1), denominator)
            b = a + Fraction(self.rng.randint(1, 2 * denominator), denominator)
            lows.append(a)
            highs.append(b)
        return Polytope.box(lows, highs)

    def sub_box(self, outer: Polytope) -> Polytope:
        """A random box inside an axis-aligned box."""
        lows, highs = [], []
        for i in range(outer.dim):
            lo = min(v[i] for v in outer.vertices)
            hi = max(v[i] for v in outer.vertices)
            a = lo + (hi - lo) * Fraction(self.rng.randint(0, 3), 8)
            b = hi - (hi - lo) * Fraction(self.rng.randint(0, 3), 8)
            lows.append(a)
            highs.append(b)
        return Polytope.box(lows, highs, outer.basepoint)

    def separated_intervals(self) -> tuple[Polytope, Polytope]:
        """Two intervals with a positive gap, in random order."""
        a = Fraction(self.rng.randint(-6, 2), 2)
        left = Polytope.interval(a, a + Fraction(self.rng.randint(1, 4), 2))
        gap_start = left.vertices[-1][0] + Fraction(self.rng.randint(1, 3), 2)
        right = Polytope.interval(gap_start, gap_start + Fraction(self.rng.randint(1, 4), 2))
        return (left, right) if self.rng.random() < 0.5 else (right, left)

    def monomial_unit(self, dim: int) -> LaurentElement:
        """A unit c * T^l * z^k with small k and l."""
        return LaurentElement.monomial(
            self.int_vector(dim, 1),
            NovikovScalar.monomial(Fraction(self.rng.randint(-2, 2), 2), self.nonzero_rational(2, 1)),
        )
