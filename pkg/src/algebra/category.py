"""The directed category of polytopes over a cover poset and its rank-one modules.

Objects are cover labels. For tau <= sigma the morphism space is the ring of
the smaller polytope, Gamma^{P_sigma}; incomparable pairs have zero morphisms.
Composition restricts to the smallest polytope and multiplies.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Literal, Mapping, Sequence

from src.algebra.affinoid import (
    AffinoidContext,
    LaurentElement,
    equal_at,
    mul_p,
    restrict,
    truncate_p,
    val_p,
)
from src.algebra.cech import (
    CechCochain,
    build,
    gluing_projections,
    h0_reconstruct,
    project,
)
from src.algebra.errors import (
    CocycleViolationError,
    CoverAssumptionViolated,
    NotACocycleError,
    NotACoverError,
    NotComparableError,
    NotCompatibleError,
    PrecisionLossError,
    RefinementFailure,
)
from src.algebra.novikov import NovikovScalar, Precision, Valuation
from src.algebra.polytope import Cover, Polytope, intersect, is_subset, laurent_refinement, refinement_cells

logger = logging.getLogger(__name__)

Side = Literal["left", "right"]


@dataclass(frozen=True)
class Morphism:
    source: str
    target: str
    value: LaurentElement


@dataclass(frozen=True)
class DirectedCategory:
    cover: Cover
    extra_homs: frozenset[tuple[str, str]] = frozenset()

    @property
    def objects(self) -> tuple[str, ...]:
        return self.cover.labels

    @property
    def dim(self) -> int:
        return self.cover.dim

    def polytope(self, label: str) -> Polytope:
        return self.cover.pieces[label]

    def context(self, label: str) -> AffinoidContext:
        return AffinoidContext(self.polytope(label), self.cover.base.basepoint)

    def hom_nonzero(self, tau: str, sigma: str) -> bool:
        return self.cover.leq(tau, sigma) or (tau, sigma) in self.extra_homs

    def hom_context(self, tau: str, sigma: str) -> AffinoidContext:
        if not self.cover.leq(tau, sigma):
            raise NotComparableError(tau, sigma)
        return self.context(sigma)

    def nonzero_homs(self) -> list[tuple[str, str]]:
        return [(t, s) for t in self.objects for s in self.objects if self.hom_nonzero(t, s)]

    def star(self, sigma: str) -> tuple[str, ...]:
        return self.cover.star(sigma)

    def identity(self, sigma: str) -> Morphism:
        return Morphism(sigma, sigma, LaurentElement.constant(self.dim))

    def unit(self, tau: str, sigma: str) -> Morphism:
        self.hom_context(tau, sigma)
        return Morphism(tau, sigma, LaurentElement.constant(self.dim))

    def with_extra_hom(self, tau: str, sigma: str) -> DirectedCategory:
        """A corrupted copy with a morphism space the poset does not allow."""
        return replace(self, extra_homs=self.extra_homs | {(tau, sigma)})


def build_category(cover: Cover) -> DirectedCategory:
    return DirectedCategory(cover)


def compose(cat: DirectedCategory, g: Morphism, f: Morphism, prec: Precision) -> Morphism:
    """g . f for f: tau -> sigma and g: sigma -> rho."""
    if f.target != g.source:
        raise NotComparableError(f.target, g.source)
    tau, sigma, rho = f.source, f.target, g.target
    for a, b in ((tau, sigma), (sigma, rho)):
        if not cat.cover.leq(a, b):
            raise NotComparableError(a, b)
    target_ctx = cat.context(rho)
    restricted = restrict(f.value, cat.context(sigma), target_ctx, prec)
    return Morphism(tau, rho, mul_p(g.value, restricted, target_ctx, prec))


def is_unit_monomial(g: LaurentElement) -> bool:
    return len(g.terms) == 1 and g.terms[0][1].is_monomial()


def unit_inverse(g: LaurentElement) -> LaurentElement:
    (beta, c), = g.terms
    exponent, coefficient = c.leading_term()
    return LaurentElement.monomial(
        tuple(-b for b in beta), NovikovScalar.monomial(-exponent, 1 / coefficient)
    )


@dataclass(frozen=True)
class RankOneModule:
    """Free of rank one on every object, with unit transitions g[tau<=sigma]."""

    category: DirectedCategory
    side: Side
    cocycle: Mapping[tuple[str, str], LaurentElement] = field(default_factory=dict)

    def transition(self, tau: str, sigma: str) -> LaurentElement:
        if not self.category.cover.leq(tau, sigma):
            raise NotComparableError(tau, sigma)
        return self.cocycle.get((tau, sigma), LaurentElement.constant(self.category.dim))

    def act(self, f: Morphism, m: LaurentElement, prec: Precision) -> LaurentElement:
        """Structure map: (f: tau -> sigma, m in L(tau)) -> g . f . m|_sigma in L(sigma)."""
        cat = self.category
        ctx = cat.context(f.target)
        restricted = restrict(m, cat.context(f.source), ctx, prec)
        g = self.transition(f.source, f.target)
        return mul_p(mul_p(g, f.value, ctx, prec), restricted, ctx, prec)


def rank1_module(
    cat: DirectedCategory,
    side: Side,
    cocycle: Mapping[tuple[str, str], LaurentElement],
    prec: Precision,
) -> RankOneModule:
    for (tau, sigma), g in cocycle.items():
        if not cat.cover.leq(tau, sigma):
            raise CocycleViolationError(f"transition given for incomparable {tau}, {sigma}", (tau, sigma))
        if not is_unit_monomial(g):
            raise CocycleViolationError(
                f"transition g[{tau}<={sigma}] must be a single monomial c*T^l*z^k", (tau, sigma)
            )
    module = RankOneModule(cat, side, dict(cocycle))
    for tau, sigma, rho in itertools.product(cat.objects, repeat=3):
        if not (cat.cover.leq(tau, sigma) and cat.cover.leq(sigma, rho)):
            continue
        ctx = cat.context(rho)
        lhs = mul_p(
            module.transition(sigma, rho),
            restrict(module.transition(tau, sigma), cat.context(sigma), ctx, prec),
            ctx,
            prec,
        )
        if not equal_at(lhs, truncate_p(module.transition(tau, rho), ctx, prec), ctx, prec):
            logger.info("cocycle_violation", extra={"chain": f"{tau}<={sigma}<={rho}"})
            raise CocycleViolationError(
                f"g[{sigma}<={rho}] * g[{tau}<={sigma}] != g[{tau}<={rho}]", (tau, sigma, rho)
            )
    return module


def _auxiliary_cover(cat: DirectedCategory, sigma: str, aux: Polytope) -> tuple[tuple[str, ...], dict[str, Polytope]]:
    """Pieces P cap P_rho for rho in the star of sigma; P must contain P_sigma in its interior."""
    if not is_subset(cat.polytope(sigma), aux, strict=True):
        raise CoverAssumptionViolated(
            f"{cat.polytope(sigma).describe()} is not in the interior of {aux.describe()}"
        )
    star = cat.star(sigma)
    pieces: dict[str, Polytope] = {}
    for rho in star:
        piece = intersect(aux, cat.polytope(rho))
        if isinstance(piece, Polytope):
            pieces[rho] = piece.with_basepoint(cat.cover.base.basepoint)
    base = aux.with_basepoint(cat.cover.base.basepoint)
    cover = Cover.build(base, list(pieces.items()))
    if cover.uncovered_point() is not None:
        raise CoverAssumptionViolated(f"the star of {sigma} does not cover {aux.describe()}")
    return tuple(pieces), pieces


@dataclass(frozen=True)
class SurjectivityWitness:
    sigma: str
    components: Mapping[str, tuple[Morphism, LaurentElement]]
    image: LaurentElement
    residual_val: Valuation


def tensor_surjectivity_witness(
    cat: DirectedCategory,
    module: RankOneModule,
    sigma: str,
    target: LaurentElement,
    aux: Polytope,
    prec: Precision,
) -> SurjectivityWitness:
    """Preimage of target under sum over the star of hom(rho, sigma) (x) L(rho) -> L(sigma).

    The target is split by the gluing projections of the Laurent refinement
    of {P cap P_rho}; each cell's share is carried by the first rho whose
    piece contains the cell, paired with the generator of L(rho).
    """
    labels, pieces = _auxiliary_cover(cat, sigma, aux)
    base = aux.with_basepoint(cat.cover.base.basepoint)
    try:
        splits = laurent_refinement(Cover.build(base, list(pieces.items())))
    except RefinementFailure as exc:
        raise CoverAssumptionViolated(str(exc)) from exc
    cells = refinement_cells(base, splits)
    shares: dict[str, LaurentElement] = {rho: LaurentElement.zero(cat.dim) for rho in labels}
    for cell, filters in gluing_projections(cells, splits).items():
        owner = next(rho for rho in labels if is_subset(cells[cell], pieces[rho]))
        shares[owner] = shares[owner].add(project(target, filters))
    sigma_ctx = cat.context(sigma)
    generator = LaurentElement.constant(cat.dim)
    components: dict[str, tuple[Morphism, LaurentElement]] = {}
    image = LaurentElement.zero(cat.dim)
    for rho in labels:
        carried = unit_inverse(module.transition(rho, sigma)).mul(shares[rho])
        f = Morphism(rho, sigma, carried)
        components[rho] = (f, generator)
        image = image.add(module.act(f, generator, Precision(prec.cutoff + _loss(module, labels, sigma, sigma_ctx))))
    residual = val_p(image.sub(target), sigma_ctx)
    return SurjectivityWitness(sigma, components, truncate_p(image, sigma_ctx, prec), residual)


def _loss(module: RankOneModule, labels: Sequence[str], sigma: str, ctx: AffinoidContext) -> int:
    # headroom so truncating g . f at the cutoff keeps the product exact below it
    worst = max((-val_p(unit_inverse(module.transition(rho, sigma)), ctx) for rho in labels), default=0)
    return max(0, math.ceil(worst) + 1)


@dataclass(frozen=True)
class HomWitness:
    sigma: str
    value: LaurentElement
    precision: Precision


def hom_reconstruction_witness(
    cat: DirectedCategory,
    module: RankOneModule,
    sigma: str,
    family: Mapping[str, LaurentElement],
    aux: Polytope,
    prec: Precision,
) -> HomWitness:
    """Glue a compatible family y_rho over P cap P_rho into one Y over P.

    Compatibility: y_rho0 restricted equals g[rho0<=rho1] y_rho1. The output
    satisfies y_rho = g[rho<=sigma] Y on each piece, at the returned precision
    (the input cutoff lowered by the worst valuation of an inverse transition).
    """
    labels, pieces = _auxiliary_cover(cat, sigma, aux)
    q = cat.cover.base.basepoint
    contexts = {rho: AffinoidContext(pieces[rho], q) for rho in labels}
    values = {rho: family.get(rho, LaurentElement.zero(cat.dim)) for rho in labels}
    for rho0, rho1 in itertools.permutations(labels, 2):
        if not cat.cover.leq(rho0, rho1):
            continue
        ctx = contexts[rho1]
        lhs = restrict(values[rho0], contexts[rho0], ctx, prec)
        rhs = mul_p(module.transition(rho0, rho1), values[rho1], ctx, prec)
        if not equal_at(lhs, rhs, ctx, prec):
            raise NotCompatibleError(f"values on {rho0} and {rho1} disagree", (rho0, rho1))
    loss = max(
        (max(0, -val_p(unit_inverse(module.transition(rho, sigma)), contexts[rho])) for rho in labels),
        default=0,
    )
    working = prec.shifted(-loss)
    untwisted = {
        (rho,): truncate_p(unit_inverse(module.transition(rho, sigma)).mul(values[rho]), contexts[rho], working)
        for rho in labels
    }
    try:
        complex_ = build(aux.with_basepoint(q), [(rho, pieces[rho]) for rho in labels])
        glued = h0_reconstruct(complex_, CechCochain(0, untwisted, working))
    except (NotACocycleError, PrecisionLossError) as exc:
        raise NotCompatibleError(f"family does not glue over {aux.describe()}: {exc}") from exc
    except (NotACoverError, RefinementFailure) as exc:
        raise CoverAssumptionViolated(str(exc)) from exc
    return HomWitness(sigma, glued, working)


@dataclass(frozen=True)
class LocalityRestrictReport:
    sigma: str
    passed: bool
    chains_checked: int
    offending_chain: tuple[str, ...] | None = None


def locality_restrict_check(
    cat: DirectedCategory,
    left: RankOneModule,
    right: RankOneModule,
    sigma: str,
    max_length: int | None = None,
) -> LocalityRestrictReport:
    """Every bar-complex chain rho_0 -> ... -> rho_k feeding hom(-, sigma) stays in the star of sigma.

    ``left`` and ``right`` are nonzero on every object, so a chain contributes
    exactly when its morphism spaces and hom(rho_k, sigma) are nonzero.
    """
    star = set(cat.star(sigma))
    length = max_length if max_length is not None else len(cat.objects)
    checked = 0
    frontier: list[tuple[str, ...]] = [(rho,) for rho in cat.objects]
    for _ in range(length + 1):
        extended: list[tuple[str, ...]] = []
        for chain in frontier:
            if cat.hom_nonzero(chain[-1], sigma):
                checked += 1
                if not set(chain) <= star:
                    logger.info("locality_restrict_failed", extra={"chain": "->".join(chain)})
                    return LocalityRestrictReport(sigma, False, checked, chain)
            extended.extend(
                chain + (nxt,) for nxt in cat.objects if nxt != chain[-1] and cat.hom_nonzero(chain[-1], nxt)
            )
        frontier = extended
    return LocalityRestrictReport(sigma, True, checked)


@dataclass(frozen=True)
class FiltrationStage:
    sigma: str
    is_base: bool
    upper: tuple[str, ...]
    yoneda_support: tuple[str, ...]
    transitions: Mapping[str, LaurentElement]
    comparisons_passed: bool


@dataclass(frozen=True)
class FiltrationReport:
    stages: tuple[FiltrationStage, ...]

    @property
    def extension_steps(self) -> int:
        return sum(1 for stage in self.stages if not stage.is_base)

    @property
    def passed(self) -> bool:
        return all(stage.comparisons_passed for stage in self.stages)


def _samples(dim: int) -> list[LaurentElement]:
    one = LaurentElement.constant(dim)
    out = [one]
    for j in range(dim):
        e = tuple(int(i == j) for i in range(dim))
        out.append(LaurentElement.monomial(e))
        out.append(LaurentElement.monomial(tuple(-x for x in e), NovikovScalar.monomial(1)))
    return out


def free_rank_one_check(cat: DirectedCategory, tau: str, sigma: str, prec: Precision) -> bool:
    """Precomposition with the unit tau -> sigma fixes sampled endomorphisms of sigma."""
    unit = cat.unit(tau, sigma)
    ctx = cat.context(sigma)
    for x in _samples(cat.dim):
        composed = compose(cat, Morphism(sigma, sigma, x), unit, prec)
        if not equal_at(composed.value, truncate_p(x, ctx, prec), ctx, prec):
            return False
    return True


def perfectness_filtration(cat: DirectedCategory, module: RankOneModule, prec: Precision) -> FiltrationReport:
    """Stages in decreasing order: the Yoneda module of sigma is an extension of
    the modules supported at the objects above it, each identified through
    hom(sigma, tau) = Gamma^{P_tau}."""
    stages = []
    for sigma in cat.cover.decreasing_order():
        upper = tuple(t for t in cat.objects if t != sigma and cat.cover.leq(sigma, t))
        support = tuple(t for t in cat.objects if cat.hom_nonzero(sigma, t))
        is_base = not upper
        passed = support == (sigma,) if is_base else all(free_rank_one_check(cat, sigma, t, prec) for t in upper)
        transitions = {t: module.transition(sigma, t) for t in upper}
        stages.append(FiltrationStage(sigma, is_base, upper, support, transitions, passed))
    return FiltrationReport(tuple(stages))
