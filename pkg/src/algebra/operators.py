"""Floer cochains Hom^c(Gamma^P0, Gamma^P1) (x) H*(T^n) and their homotopies.

A cochain is a :class:`GradedOperator`: one :class:`FiniteOperator` per
exterior label S (a sorted tuple of axes in 1..n). A finite operator is a
finite sum of elementary maps ``e[g][a]`` sending z^a to z^g.

Two differentials are available. ``STANDARD`` uses
``phi - z_j phi z_j^-1`` on axis j, ``DUAL`` uses ``phi - z_j^-1 phi z_j``.
The inclusion and disjoint homotopies contract the standard complex; the
duality homotopy hbar contracts the dual one.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from src.algebra.affinoid import AffinoidContext, LaurentElement
from src.algebra.errors import (
    AxisOutOfRangeError,
    DimensionMismatchError,
    NotASubsetError,
    NotSeparatedError,
)
from src.algebra.novikov import ONE, NovikovScalar, Precision, Valuation
from src.algebra.polytope import (
    EmptyPolytope,
    IntVector,
    Polytope,
    intersect,
    is_subset,
)

Subset = tuple[int, ...]
EntryKey = tuple[IntVector, IntVector]


class Convention(enum.Enum):
    STANDARD = "standard"
    DUAL = "dual"

    @property
    def step(self) -> int:
        return 1 if self is Convention.STANDARD else -1


class ContractionForm(enum.Enum):
    STAIRCASE = "staircase"
    PLAIN_SUM = "plain_sum"


def koszul_sign(j: int, subset: Iterable[int]) -> int:
    return -1 if sum(1 for i in subset if i < j) % 2 else 1


def _unit(dim: int, j: int, scale: int = 1) -> IntVector:
    return tuple(scale if i == j - 1 else 0 for i in range(dim))


def _plus(a: IntVector, b: IntVector) -> IntVector:
    return tuple(x + y for x, y in zip(a, b))


def _check_axis(j: int, dim: int) -> None:
    if not 1 <= j <= dim:
        raise AxisOutOfRangeError(j, dim)


@dataclass(frozen=True)
class FiniteOperator:
    dim: int
    entries: tuple[tuple[EntryKey, NovikovScalar], ...] = ()

    @classmethod
    def from_terms(
        cls, dim: int, pairs: Iterable[tuple[tuple[Sequence[int], Sequence[int]], NovikovScalar]]
    ) -> FiniteOperator:
        merged: dict[EntryKey, NovikovScalar] = {}
        for (gamma, alpha), c in pairs:
            key = (tuple(int(x) for x in gamma), tuple(int(x) for x in alpha))
            if len(key[0]) != dim or len(key[1]) != dim:
                raise DimensionMismatchError(dim, len(key[0]), "elementary exponents")
            merged[key] = merged[key].add(c) if key in merged else c
        return cls(dim, tuple(sorted((k, c) for k, c in merged.items() if not c.is_zero())))

    @classmethod
    def zero(cls, dim: int) -> FiniteOperator:
        return cls(dim, ())

    @classmethod
    def elementary(
        cls, gamma: Sequence[int], alpha: Sequence[int], coefficient: NovikovScalar = ONE
    ) -> FiniteOperator:
        return cls.from_terms(len(gamma), [((gamma, alpha), coefficient)])

    def is_zero(self) -> bool:
        return not self.entries

    def __bool__(self) -> bool:
        return bool(self.entries)

    def _check(self, other: FiniteOperator) -> None:
        if other.dim != self.dim:
            raise DimensionMismatchError(self.dim, other.dim, "operator")

    def add(self, other: FiniteOperator) -> FiniteOperator:
        self._check(other)
        return FiniteOperator.from_terms(self.dim, self.entries + other.entries)

    def neg(self) -> FiniteOperator:
        return FiniteOperator(self.dim, tuple((k, c.neg()) for k, c in self.entries))

    def sub(self, other: FiniteOperator) -> FiniteOperator:
        return self.add(other.neg())

    def scale(self, factor: NovikovScalar | int) -> FiniteOperator:
        if isinstance(factor, int):
            factor = NovikovScalar.constant(factor)
        return FiniteOperator.from_terms(self.dim, ((k, c.mul(factor)) for k, c in self.entries))

    def shifted(self, offset: IntVector) -> FiniteOperator:
        """e[g][a] -> e[g + offset][a + offset]."""
        return FiniteOperator(
            self.dim, tuple(((_plus(g, offset), _plus(a, offset)), c) for (g, a), c in self.entries)
        )

    def shift_conjugate(self, j: int, direction: int = 1) -> FiniteOperator:
        """z_j^d . phi . z_j^-d for d = direction."""
        _check_axis(j, self.dim)
        return self.shifted(_unit(self.dim, j, direction))

    def apply(self, alpha: Sequence[int]) -> LaurentElement:
        alpha = tuple(alpha)
        if len(alpha) != self.dim:
            raise DimensionMismatchError(self.dim, len(alpha), "monomial exponent")
        return LaurentElement.from_terms(self.dim, ((g, c) for (g, a), c in self.entries if a == alpha))

    def compose(self, other: FiniteOperator) -> FiniteOperator:
        """self . other."""
        self._check(other)
        return FiniteOperator.from_terms(
            self.dim,
            (
                ((g1, a2), c1.mul(c2))
                for (g1, a1), c1 in self.entries
                for (g2, a2), c2 in other.entries
                if a1 == g2
            ),
        )

    def sources(self) -> set[IntVector]:
        return {a for (_, a), _ in self.entries}

    def __add__(self, other: FiniteOperator) -> FiniteOperator:
        return self.add(other)

    def __sub__(self, other: FiniteOperator) -> FiniteOperator:
        return self.sub(other)

    def __neg__(self) -> FiniteOperator:
        return self.neg()


@dataclass(frozen=True)
class GradedOperator:
    dim: int
    components: tuple[tuple[Subset, FiniteOperator], ...] = ()

    @classmethod
    def from_components(
        cls, dim: int, components: Mapping[Sequence[int], FiniteOperator] | Iterable[tuple[Sequence[int], FiniteOperator]]
    ) -> GradedOperator:
        items = components.items() if isinstance(components, Mapping) else components
        merged: dict[Subset, FiniteOperator] = {}
        for subset, op in items:
            key = tuple(sorted(int(j) for j in subset))
            if len(set(key)) != len(key):
                raise ValueError(f"exterior label {key} repeats an axis")
            for j in key:
                _check_axis(j, dim)
            if op.dim != dim:
                raise DimensionMismatchError(dim, op.dim, "component operator")
            merged[key] = merged[key].add(op) if key in merged else op
        return cls(dim, tuple(sorted((k, v) for k, v in merged.items() if not v.is_zero())))

    @classmethod
    def zero(cls, dim: int) -> GradedOperator:
        return cls(dim, ())

    @classmethod
    def single(cls, op: FiniteOperator, subset: Sequence[int] = ()) -> GradedOperator:
        return cls.from_components(op.dim, [(subset, op)])

    def component(self, subset: Sequence[int]) -> FiniteOperator:
        return dict(self.components).get(tuple(sorted(subset)), FiniteOperator.zero(self.dim))

    def is_zero(self) -> bool:
        return not self.components

    def __bool__(self) -> bool:
        return bool(self.components)

    def add(self, other: GradedOperator) -> GradedOperator:
        if other.dim != self.dim:
            raise DimensionMismatchError(self.dim, other.dim, "graded operator")
        return GradedOperator.from_components(self.dim, self.components + other.components)

    def neg(self) -> GradedOperator:
        return GradedOperator(self.dim, tuple((s, op.neg()) for s, op in self.components))

    def sub(self, other: GradedOperator) -> GradedOperator:
        return self.add(other.neg())

    def map_components(self, fn: Callable[[FiniteOperator], FiniteOperator]) -> GradedOperator:
        return GradedOperator.from_components(self.dim, [(s, fn(op)) for s, op in self.components])

    def __add__(self, other: GradedOperator) -> GradedOperator:
        return self.add(other)

    def __sub__(self, other: GradedOperator) -> GradedOperator:
        return self.sub(other)


@dataclass(frozen=True)
class Functional:
    """A finite combination of the duals rho_a of the monomials z^a."""

    dim: int
    entries: tuple[tuple[IntVector, NovikovScalar], ...] = ()

    @classmethod
    def from_terms(cls, dim: int, pairs: Iterable[tuple[Sequence[int], NovikovScalar]]) -> Functional:
        element = LaurentElement.from_terms(dim, pairs)
        return cls(dim, element.terms)

    def is_zero(self) -> bool:
        return not self.entries

    def evaluate(self, alpha: Sequence[int]) -> NovikovScalar:
        return dict(self.entries).get(tuple(alpha), NovikovScalar.zero())


def all_subsets(dim: int) -> list[Subset]:
    return [s for k in range(dim + 1) for s in itertools.combinations(range(1, dim + 1), k)]


def shift_conjugate(phi: FiniteOperator, j: int) -> FiniteOperator:
    return phi.shift_conjugate(j)


def apply(phi: FiniteOperator, alpha: Sequence[int]) -> LaurentElement:
    return phi.apply(alpha)


def differential(psi: GradedOperator, convention: Convention = Convention.STANDARD) -> GradedOperator:
    pieces: list[tuple[Subset, FiniteOperator]] = []
    for subset, op in psi.components:
        for j in range(1, psi.dim + 1):
            if j in subset:
                continue
            d_j = op.sub(op.shift_conjugate(j, convention.step))
            pieces.append((subset + (j,), d_j.scale(koszul_sign(j, subset))))
    return GradedOperator.from_components(psi.dim, pieces)


def op_val(phi: FiniteOperator, source: AffinoidContext, target: AffinoidContext) -> Valuation:
    if source.dim != phi.dim or target.dim != phi.dim:
        raise DimensionMismatchError(phi.dim, source.dim, "operator context")
    return min(
        (c.val() + target.monomial_val(g) - source.monomial_val(a) for (g, a), c in phi.entries),
        default=math.inf,
    )


def graded_op_val(psi: GradedOperator, source: AffinoidContext, target: AffinoidContext) -> Valuation:
    return min((op_val(op, source, target) for _, op in psi.components), default=math.inf)


def trace(phi: FiniteOperator) -> NovikovScalar:
    total = NovikovScalar.zero()
    for (g, a), c in phi.entries:
        if g == a:
            total = total.add(c)
    return total


def eps(phi: FiniteOperator) -> Functional:
    """z^a -> trace(phi . z^a): each e[g][b] contributes to rho_{b-g}."""
    return Functional.from_terms(
        phi.dim, ((tuple(b - g for g, b in zip(gamma, beta)), c) for (gamma, beta), c in phi.entries)
    )


def delta(rho: Functional) -> FiniteOperator:
    zero = (0,) * rho.dim
    return FiniteOperator.from_terms(rho.dim, (((zero, a), c) for a, c in rho.entries))


def _hbar_axis(phi: FiniteOperator, j: int) -> FiniteOperator:
    pairs = []
    for (g, a), c in phi.entries:
        g_j = g[j - 1]
        if g_j >= 1:
            steps, sign = range(0, g_j), 1
        elif g_j <= -1:
            steps, sign = range(g_j, 0), -1
        else:
            continue
        for t in steps:
            back = _unit(phi.dim, j, -t)
            pairs.append(((_plus(g, back), _plus(a, back)), c.scale(sign)))
    return FiniteOperator.from_terms(phi.dim, pairs)


def _flatten_axis(phi: FiniteOperator, k: int) -> FiniteOperator:
    """Shift every entry along axis k so its target has k-th exponent 0."""
    return FiniteOperator.from_terms(
        phi.dim,
        (((_plus(g, _unit(phi.dim, k, -g[k - 1])), _plus(a, _unit(phi.dim, k, -g[k - 1]))), c)
         for (g, a), c in phi.entries),
    )


def hbar(psi: GradedOperator) -> GradedOperator:
    """Duality homotopy, a contraction of the DUAL complex onto delta.eps in top degree.

    Output label S receives hbar_j of the S+{j} component for the smallest
    axis j outside S, after flattening the axes below j.
    """
    n = psi.dim
    pieces: list[tuple[Subset, FiniteOperator]] = []
    for subset in all_subsets(n):
        missing = [j for j in range(1, n + 1) if j not in subset]
        if not missing:
            continue
        j = missing[0]
        source = psi.component(tuple(sorted(subset + (j,))))
        if source.is_zero():
            continue
        value = _hbar_axis(source, j)
        for k in range(1, j):
            value = _flatten_axis(value, k)
        pieces.append((subset, value.scale(koszul_sign(j, subset))))
    return GradedOperator.from_components(n, pieces)


def top_projection(psi: GradedOperator) -> GradedOperator:
    """delta.eps on the top exterior label, zero elsewhere."""
    top = tuple(range(1, psi.dim + 1))
    return GradedOperator.from_components(psi.dim, [(top, delta(eps(psi.component(top))))])


class LazyOperator:
    """A graded operator known only through its values on monomials.

    ``oracle(S, alpha)`` returns the S-component evaluated at z^alpha.
    Values are memoized; oracles must be deterministic.
    """

    def __init__(self, dim: int, oracle: Callable[[Subset, IntVector], LaurentElement]) -> None:
        self.dim = dim
        self._oracle = oracle
        self._cache: dict[tuple[Subset, IntVector], LaurentElement] = {}

    @classmethod
    def from_graded(cls, psi: GradedOperator) -> LazyOperator:
        return cls(psi.dim, lambda s, alpha: psi.component(s).apply(alpha))

    def evaluate(self, subset: Sequence[int], alpha: Sequence[int]) -> LaurentElement:
        key = (tuple(sorted(subset)), tuple(alpha))
        if key not in self._cache:
            self._cache[key] = self._oracle(*key)
        return self._cache[key]

    def sub(self, other: LazyOperator) -> LazyOperator:
        return LazyOperator(self.dim, lambda s, a: self.evaluate(s, a).sub(other.evaluate(s, a)))


def lazy_differential(phi: LazyOperator, convention: Convention = Convention.STANDARD) -> LazyOperator:
    step = convention.step

    def oracle(subset: Subset, alpha: IntVector) -> LaurentElement:
        total = LaurentElement.zero(phi.dim)
        for j in subset:
            rest = tuple(i for i in subset if i != j)
            shift = _unit(phi.dim, j, step)
            # (z^s phi z^-s)(z^alpha) = z^s phi(z^(alpha - s))
            conj = phi.evaluate(rest, _plus(alpha, tuple(-x for x in shift))).shift(shift)
            term = phi.evaluate(rest, alpha).sub(conj)
            total = total.add(term if koszul_sign(j, rest) > 0 else term.neg())
        return total

    return LazyOperator(phi.dim, oracle)


def _h_axis(values: Callable[[IntVector], LaurentElement], dim: int, j: int, alpha: IntVector) -> LaurentElement:
    a_j = alpha[j - 1]
    if a_j >= 0:
        steps, sign = range(0, a_j), 1
    else:
        steps, sign = range(a_j, 0), -1
    total = LaurentElement.zero(dim)
    for i in steps:
        total = total.add(values(_plus(alpha, _unit(dim, j, -i))).shift(_unit(dim, j, i)))
    return total if sign > 0 else total.neg()


def _pi_prefix(values: Callable[[IntVector], LaurentElement], dim: int, upto: int, alpha: IntVector) -> LaurentElement:
    """pi_1 ... pi_upto: evaluate with those coordinates zeroed, then multiply back."""
    head = tuple(alpha[i] if i < upto else 0 for i in range(dim))
    zeroed = tuple(0 if i < upto else alpha[i] for i in range(dim))
    return values(zeroed).shift(head)


def inclusion_contraction(phi: LazyOperator, form: ContractionForm = ContractionForm.STAIRCASE) -> LazyOperator:
    """H = sum_j pi_1 ... pi_(j-1) (h_j (x) iota_j), or the plain sum of h_j (x) iota_j."""
    n = phi.dim

    def oracle(subset: Subset, alpha: IntVector) -> LaurentElement:
        total = LaurentElement.zero(n)
        for j in range(1, n + 1):
            if j in subset:
                continue
            if form is ContractionForm.STAIRCASE and any(k < j for k in subset):
                continue
            source = tuple(sorted(subset + (j,)))

            def h_values(beta: IntVector, _src: Subset = source, _j: int = j) -> LaurentElement:
                return _h_axis(lambda gamma: phi.evaluate(_src, gamma), n, _j, beta)

            if form is ContractionForm.STAIRCASE:
                term = _pi_prefix(h_values, n, j - 1, alpha)
            else:
                term = h_values(alpha)
            total = total.add(term if koszul_sign(j, subset) > 0 else term.neg())
        return total

    return LazyOperator(n, oracle)


def projection_eval(psi: GradedOperator | LazyOperator, alpha: Sequence[int]) -> LaurentElement:
    """z^alpha . psi_0(1): the multiplication operator by psi(1)."""
    lazy = psi if isinstance(psi, LazyOperator) else LazyOperator.from_graded(psi)
    return lazy.evaluate((), (0,) * lazy.dim).shift(tuple(alpha))


def inclusion_homotopy_eval(
    psi: GradedOperator,
    alpha: Sequence[int],
    source: AffinoidContext,
    target: AffinoidContext,
    form: ContractionForm = ContractionForm.STAIRCASE,
) -> dict[Subset, LaurentElement]:
    """h(psi) at z^alpha for every output label with a nonzero value."""
    if not is_subset(target.polytope, source.polytope):
        raise NotASubsetError(
            f"{target.polytope.describe()} is not contained in {source.polytope.describe()}"
        )
    h = inclusion_contraction(LazyOperator.from_graded(psi), form)
    values = {s: h.evaluate(s, tuple(alpha)) for s in all_subsets(psi.dim)}
    return {s: v for s, v in values.items() if not v.is_zero()}


def lazy_projection(phi: LazyOperator) -> LazyOperator:
    def oracle(subset: Subset, alpha: IntVector) -> LaurentElement:
        if subset:
            return LaurentElement.zero(phi.dim)
        return projection_eval(phi, alpha)

    return LazyOperator(phi.dim, oracle)


def window(dim: int, radius: int) -> list[IntVector]:
    return list(itertools.product(range(-radius, radius + 1), repeat=dim))


def inclusion_identity_defects(
    psi: GradedOperator, radius: int, form: ContractionForm = ContractionForm.STAIRCASE
) -> list[tuple[Subset, IntVector, LaurentElement]]:
    """Points of the window where dH + Hd differs from id - projection."""
    phi = LazyOperator.from_graded(psi)
    h = inclusion_contraction(phi, form)
    lhs_a = lazy_differential(h)
    lhs_b = inclusion_contraction(lazy_differential(phi), form)
    proj = lazy_projection(phi)
    defects = []
    for subset in all_subsets(psi.dim):
        for alpha in window(psi.dim, radius):
            lhs = lhs_a.evaluate(subset, alpha).add(lhs_b.evaluate(subset, alpha))
            rhs = phi.evaluate(subset, alpha).sub(proj.evaluate(subset, alpha))
            diff = lhs.sub(rhs)
            if not diff.is_zero():
                defects.append((subset, alpha, diff))
    return defects


@dataclass(frozen=True)
class Separation:
    axis: int
    orientation: int
    gap: Fraction


def separation(source: Polytope, target: Polytope, axis: int = 1) -> Separation:
    """Gap along an axis; orientation +1 when the source lies on the positive side."""
    _check_axis(axis, source.dim)
    e = _unit(source.dim, axis)
    positive = source.support_min(e) - target.support_max(e)
    if positive > 0:
        return Separation(axis, 1, positive)
    negative = target.support_min(e) - source.support_max(e)
    if negative > 0:
        return Separation(axis, -1, negative)
    raise NotSeparatedError(
        f"{source.describe()} and {target.describe()} are not separated along axis {axis}"
    )


def guard_margin(source: AffinoidContext, target: AffinoidContext) -> Fraction:
    """Largest drop in op_val a single standard differential step can cause."""
    margin = Fraction(0)
    for j in range(1, source.dim + 1):
        e = _unit(source.dim, j)
        minus_e = _unit(source.dim, j, -1)
        margin = max(margin, -(target.monomial_val(e) + source.monomial_val(minus_e)))
    return margin


def disjoint_homotopy(
    psi: GradedOperator,
    source: AffinoidContext,
    target: AffinoidContext,
    prec: Precision,
    axis: int = 1,
) -> GradedOperator:
    """Truncated null-homotopy for polytopes separated along ``axis``.

    Orientation +1: h = -sum_{i>=1} z^-i psi z^i (x) iota; orientation -1:
    h = sum_{i>=0} z^i psi z^-i (x) iota. Term i gains at least i * gap in
    op_val, so the series stops once the bound reaches the cutoff.
    """
    sep = separation(source.polytope, target.polytope, axis)
    start, sign = (1, -1) if sep.orientation > 0 else (0, 1)
    n = psi.dim
    pieces: list[tuple[Subset, FiniteOperator]] = []
    for subset, op in psi.components:
        if axis not in subset:
            continue
        out = tuple(s for s in subset if s != axis)
        contraction_sign = koszul_sign(axis, out)
        for (g, a), c in op.entries:
            base = c.val() + target.monomial_val(g) - source.monomial_val(a)
            i = start
            while base + i * sep.gap < prec.cutoff:
                offset = _unit(n, axis, -i * sep.orientation)
                term = FiniteOperator.elementary(_plus(g, offset), _plus(a, offset), c.scale(sign * contraction_sign))
                pieces.append((out, term))
                i += 1
    return GradedOperator.from_components(n, pieces)


def disjoint_identity_val(
    psi: GradedOperator,
    source: AffinoidContext,
    target: AffinoidContext,
    prec: Precision,
    axis: int = 1,
) -> Valuation:
    """op_val of (dh + hd - id)psi, with h built at the cutoff raised by the guard margin."""
    guard = prec.shifted(guard_margin(source, target))
    h_psi = disjoint_homotopy(psi, source, target, guard, axis)
    h_d_psi = disjoint_homotopy(differential(psi), source, target, guard, axis)
    defect = differential(h_psi).add(h_d_psi).sub(psi)
    return graded_op_val(defect, source, target)


@dataclass(frozen=True)
class HFClassification:
    tag: str
    degree: int | None = None
    ring: str | None = None
    witness: dict[str, str] = field(default_factory=dict)

    def describe(self) -> str:
        parts = [self.tag]
        if self.degree is not None:
            parts.append(f"deg={self.degree}")
        if self.ring is not None:
            parts.append(f"ring={self.ring}")
        parts.extend(f"{k}={v}" for k, v in self.witness.items())
        return " ".join(parts)


def _ring_label(p: Polytope) -> str:
    return f"Gamma^{p.describe()}"


def _separating_direction(p0: Polytope, p1: Polytope, bound: int = 3) -> tuple[int, ...] | None:
    candidates = sorted(
        itertools.product(range(-bound, bound + 1), repeat=p0.dim),
        key=lambda u: (sum(abs(x) for x in u), u),
    )
    for u in candidates:
        if any(u) and p0.support_min(u) > p1.support_max(u):
            return u
    return None


def classify_hf(p0: Polytope, p1: Polytope) -> HFClassification:
    """Cohomology of CF(P0, P1) = Hom^c(Gamma^P0, Gamma^P1) (x) H*(T^n), by case."""
    if p0.dim != p1.dim:
        raise DimensionMismatchError(p0.dim, p1.dim, "polytope")
    if is_subset(p1, p0):
        # the staircase contraction retracts Gamma^P0 onto Gamma^P1
        return HFClassification(
            "InclusionIso",
            0,
            _ring_label(p1),
            {"from": p0.describe(), "to": p1.describe(), "form": ContractionForm.STAIRCASE.value},
        )
    if is_subset(p0, p1, strict=True):
        return HFClassification(
            "NestedDual", p0.dim, None, {"dual": f"Hom({_ring_label(p0)},Lambda)"}
        )
    if isinstance(intersect(p0, p1), EmptyPolytope):
        for axis in range(1, p0.dim + 1):
            try:
                sep = separation(p0, p1, axis)
            except NotSeparatedError:
                continue
            return HFClassification(
                "DisjointZero",
                witness={"axis": str(sep.axis), "orientation": f"{sep.orientation:+d}", "gap": str(sep.gap)},
            )
        direction = _separating_direction(p0, p1) or _separating_direction(p1, p0)
        label = "[" + ",".join(str(x) for x in direction) + "]" if direction else "unresolved"
        return HFClassification("DisjointZero", witness={"direction": label})
    return HFClassification("Unclassified")
