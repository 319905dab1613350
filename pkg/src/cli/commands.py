"""Handlers for the computation subcommands.

Each handler takes a validated :class:`Invocation` and returns the text to
print plus an exit code. Positional inputs are read from a file when they
name one, and taken literally otherwise, so ``nov val "1*T^(1/2)"`` and
``op classify-hf P0.txt P1.txt`` both work.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from src.algebra import category as cat_ops
from src.algebra.affinoid import (
    AffinoidContext,
    convergence_certificate,
    mul_p,
    rebase,
    restrict,
    val_p,
)
from src.algebra.cech import (
    augment,
    build,
    build_laurent,
    cech_differential,
    h0_reconstruct,
    laurent_homotopy,
    locality_check,
    tate_split,
    two_term_homotopy,
)
from src.algebra.novikov import Precision
from src.algebra.operators import (
    ContractionForm,
    Convention,
    GradedOperator,
    classify_hf,
    delta,
    differential,
    disjoint_homotopy,
    disjoint_identity_val,
    eps,
    graded_op_val,
    hbar,
    inclusion_homotopy_eval,
    trace,
)
from src.algebra.polytope import (
    EmptyPolytope,
    Polytope,
    intersect,
    is_subset,
    laurent_refinement,
    laurent_split,
    primitive_hyperplane,
    refinement_cells,
)
from src.formats.text import (
    format_cochain,
    format_functional,
    format_laurent,
    format_novikov,
    format_operator,
    format_polytope,
    format_rational,
    format_valuation,
    format_vector,
    format_vertices,
    parse_cochain,
    parse_cover,
    parse_functional,
    parse_int_vector,
    parse_laurent,
    parse_module,
    parse_novikov,
    parse_operator,
    parse_polytope,
    parse_rational,
    parse_rational_vector,
)
from src.models.invocation import Invocation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CommandResult:
    text: str
    exit_code: int = 0


@dataclass(frozen=True)
class CommandSpec:
    handler: Callable[[Invocation], CommandResult]
    params: tuple[str, ...]
    help: str


COMMANDS: dict[str, dict[str, CommandSpec]] = {}


def command(group: str, action: str, *params: str, help: str = ""):
    """Register a handler; a trailing ``name...`` param takes the remaining arguments."""

    def register(handler: Callable[[Invocation], CommandResult]) -> Callable[[Invocation], CommandResult]:
        COMMANDS.setdefault(group, {})[action] = CommandSpec(handler, params, help or (handler.__doc__ or "").strip())
        return handler

    return register


def read_input(arg: str) -> str:
    try:
        is_file = Path(arg).is_file()
    except (OSError, ValueError):
        # not a usable path name, e.g. a long literal
        is_file = False
    if not is_file:
        return arg
    return Path(arg).read_text(encoding="utf-8")


def _polytope(arg: str) -> Polytope:
    return parse_polytope(read_input(arg).strip())


def _context(arg: str) -> AffinoidContext:
    return AffinoidContext.of(_polytope(arg))


def _lines(pairs: list[tuple[str, str]]) -> str:
    return "\n".join(f"{k}: {v}" for k, v in pairs)


def _describe(p: Polytope | EmptyPolytope) -> str:
    return "empty" if isinstance(p, EmptyPolytope) else format_polytope(p)


def _prec(inv: Invocation) -> Precision:
    return Precision(inv.precision)


# nov


@command("nov", "val", "x")
def nov_val(inv: Invocation) -> CommandResult:
    """Valuation of a Novikov scalar."""
    return CommandResult(format_valuation(parse_novikov(read_input(inv.arguments[0]).strip()).val()))


@command("nov", "add", "x", "y")
def nov_add(inv: Invocation) -> CommandResult:
    """Sum of two Novikov scalars."""
    x, y = (parse_novikov(read_input(a).strip()) for a in inv.arguments[:2])
    return CommandResult(format_novikov(x + y))


@command("nov", "mul", "x", "y")
def nov_mul(inv: Invocation) -> CommandResult:
    """Product of two Novikov scalars."""
    x, y = (parse_novikov(read_input(a).strip()) for a in inv.arguments[:2])
    return CommandResult(format_novikov(x * y))


@command("nov", "inv", "x")
def nov_inv(inv: Invocation) -> CommandResult:
    """Inverse at precision --prec."""
    return CommandResult(format_novikov(parse_novikov(read_input(inv.arguments[0]).strip()).invert(_prec(inv))))


@command("nov", "trunc", "x")
def nov_trunc(inv: Invocation) -> CommandResult:
    """Drop every term of exponent >= --prec."""
    return CommandResult(format_novikov(parse_novikov(read_input(inv.arguments[0]).strip()).truncate(_prec(inv))))


# poly


@command("poly", "vertices", "polytope")
def poly_vertices(inv: Invocation) -> CommandResult:
    """Exact vertex list, sorted."""
    return CommandResult(format_vertices(_polytope(inv.arguments[0])))


@command("poly", "support", "polytope", "beta")
def poly_support(inv: Invocation) -> CommandResult:
    """Minimum and maximum of <beta, x> over the polytope."""
    p = _polytope(inv.arguments[0])
    beta = parse_int_vector(inv.arguments[1])
    return CommandResult(_lines([("min", format_rational(p.support_min(beta))), ("max", format_rational(p.support_max(beta)))]))


@command("poly", "intersect", "p", "q")
def poly_intersect(inv: Invocation) -> CommandResult:
    """Intersection of two polytopes, or 'empty'."""
    return CommandResult(_describe(intersect(_polytope(inv.arguments[0]), _polytope(inv.arguments[1]))))


@command("poly", "split", "polytope", "normal", "offset")
def poly_split(inv: Invocation) -> CommandResult:
    """Sides of the hyperplane <normal, x> = offset."""
    p = _polytope(inv.arguments[0])
    u, level = primitive_hyperplane(parse_int_vector(inv.arguments[1]), parse_rational(inv.arguments[2]))
    plus, minus, both = laurent_split(p, u, level)
    return CommandResult(
        _lines([("hyperplane", f"{format_vector(u)} = {format_rational(level)}"),
                ("+", _describe(plus)), ("-", _describe(minus)), ("=", _describe(both))])
    )


@command("poly", "refine", "cover")
def poly_refine(inv: Invocation) -> CommandResult:
    """Laurent refinement of a cover: its splits, then its sign cells."""
    cover = parse_cover(read_input(inv.arguments[0])).build()
    splits = laurent_refinement(cover)
    lines = [f"split {format_vector(u)} = {format_rational(level)}" for u, level in splits]
    for signs, cell in sorted(refinement_cells(cover.base, splits).items()):
        owner = next(label for label in cover.labels if is_subset(cell, cover.pieces[label]))
        lines.append(f"cell {''.join(signs)} in {owner}: {format_polytope(cell)}")
    return CommandResult("\n".join(lines))


# aff


@command("aff", "val", "polytope", "f")
def aff_val(inv: Invocation) -> CommandResult:
    """val_P of a Laurent element."""
    ctx = _context(inv.arguments[0])
    return CommandResult(format_valuation(val_p(parse_laurent(read_input(inv.arguments[1]).strip(), ctx.dim), ctx)))


@command("aff", "restrict", "polytope", "subpolytope", "f")
def aff_restrict(inv: Invocation) -> CommandResult:
    """Restriction to a sub-polytope, keeping the basepoint of the first."""
    source = _context(inv.arguments[0])
    target = AffinoidContext(_polytope(inv.arguments[1]), source.basepoint)
    f = parse_laurent(read_input(inv.arguments[2]).strip(), source.dim)
    return CommandResult(format_laurent(restrict(f, source, target, _prec(inv))))


@command("aff", "mul", "polytope", "f", "g")
def aff_mul(inv: Invocation) -> CommandResult:
    """Product in Gamma^P at precision --prec."""
    ctx = _context(inv.arguments[0])
    f, g = (parse_laurent(read_input(a).strip(), ctx.dim) for a in inv.arguments[1:3])
    return CommandResult(format_laurent(mul_p(f, g, ctx, _prec(inv))))


@command("aff", "rebase", "polytope", "f", "basepoint")
def aff_rebase(inv: Invocation) -> CommandResult:
    """Rewrite f around a new basepoint."""
    ctx = _context(inv.arguments[0])
    f = parse_laurent(read_input(inv.arguments[1]).strip(), ctx.dim)
    return CommandResult(format_laurent(rebase(f, ctx, parse_rational_vector(inv.arguments[2]))))


@command("aff", "cert", "delta", "epsilon", "pairs...")
def aff_cert(inv: Invocation) -> CommandResult:
    """Convergence certificate; each pair is lambda:n."""
    width, epsilon = parse_rational(inv.arguments[0]), parse_rational(inv.arguments[1])
    pairs = []
    for raw in inv.arguments[2:]:
        lam, _, n = raw.partition(":")
        pairs.append((parse_rational(lam), parse_rational(n or "0")))
    cert = convergence_certificate(width, epsilon, pairs)
    return CommandResult(
        _lines([
            ("converges", "yes" if cert.converges else "no"),
            ("constant", format_rational(cert.constant)),
            ("limit", format_rational(cert.limit)),
            ("bounds", format_vector(cert.bounds)),
        ])
    )


# op


def _operator(arg: str, dim: int | None = None) -> GradedOperator:
    return parse_operator(read_input(arg).strip(), dim)


def _subset_label(subset: tuple[int, ...]) -> str:
    return "b{" + ",".join(str(j) for j in subset) + "}"


@command("op", "apply", "operator", "alpha")
def op_apply(inv: Invocation) -> CommandResult:
    """Each exterior component applied to z^alpha."""
    psi = _operator(inv.arguments[0])
    alpha = parse_int_vector(inv.arguments[1])
    return CommandResult(_lines([(_subset_label(s), format_laurent(op.apply(alpha))) for s, op in psi.components]))


@command("op", "diff", "operator")
def op_diff(inv: Invocation) -> CommandResult:
    """Floer differential in the --convention sign convention."""
    return CommandResult(format_operator(differential(_operator(inv.arguments[0]), Convention(inv.convention))))


@command("op", "val", "operator", "p0", "p1")
def op_val_cmd(inv: Invocation) -> CommandResult:
    """Operator valuation from Gamma^P0 to Gamma^P1."""
    source, target = _context(inv.arguments[1]), _context(inv.arguments[2])
    return CommandResult(format_valuation(graded_op_val(_operator(inv.arguments[0], source.dim), source, target)))


@command("op", "trace", "operator")
def op_trace(inv: Invocation) -> CommandResult:
    """Trace of each exterior component."""
    psi = _operator(inv.arguments[0])
    return CommandResult(_lines([(_subset_label(s), format_novikov(trace(op))) for s, op in psi.components]))


@command("op", "eps", "operator")
def op_eps(inv: Invocation) -> CommandResult:
    """epsilon of each exterior component."""
    psi = _operator(inv.arguments[0])
    return CommandResult(_lines([(_subset_label(s), format_functional(eps(op))) for s, op in psi.components]))


@command("op", "delta", "functional")
def op_delta(inv: Invocation) -> CommandResult:
    """delta of a functional, placed on the top exterior label."""
    rho = parse_functional(read_input(inv.arguments[0]).strip())
    return CommandResult(format_operator(GradedOperator.single(delta(rho), tuple(range(1, rho.dim + 1)))))


@command("op", "hbar", "operator")
def op_hbar(inv: Invocation) -> CommandResult:
    """Duality homotopy."""
    return CommandResult(format_operator(hbar(_operator(inv.arguments[0]))))


@command("op", "h-eval", "operator", "p0", "p1", "alpha")
def op_h_eval(inv: Invocation) -> CommandResult:
    """Inclusion homotopy h(psi) at z^alpha for P1 inside P0."""
    source, target = _context(inv.arguments[1]), _context(inv.arguments[2])
    psi = _operator(inv.arguments[0], source.dim)
    values = inclusion_homotopy_eval(
        psi, parse_int_vector(inv.arguments[3]), source, target, ContractionForm(inv.form)
    )
    if not values:
        return CommandResult("0")
    return CommandResult(_lines([(_subset_label(s), format_laurent(v)) for s, v in sorted(values.items())]))


@command("op", "classify-hf", "p0", "p1")
def op_classify_hf(inv: Invocation) -> CommandResult:
    """Floer cohomology case for a pair of polytopes."""
    return CommandResult(classify_hf(_polytope(inv.arguments[0]), _polytope(inv.arguments[1])).describe())


@command("op", "disjoint-h", "operator", "p0", "p1")
def op_disjoint_h(inv: Invocation) -> CommandResult:
    """Truncated null-homotopy for separated polytopes, with its identity defect."""
    source, target = _context(inv.arguments[1]), _context(inv.arguments[2])
    psi = _operator(inv.arguments[0], source.dim)
    prec = _prec(inv)
    h = disjoint_homotopy(psi, source, target, prec, inv.axis)
    defect = disjoint_identity_val(psi, source, target, prec, inv.axis)
    passed = defect >= prec.cutoff
    text = _lines([("h", format_operator(h)), ("defect_val", format_valuation(defect)),
                   ("RESULT", "PASS" if passed else "FAIL")])
    return CommandResult(text, 0 if passed else 1)


# cech


def _cech(arg: str):
    cover = parse_cover(read_input(arg)).build()
    return cover, build(cover.base, cover)


@command("cech", "build", "cover")
def cech_build(inv: Invocation) -> CommandResult:
    """Faces of the Cech complex with their polytopes."""
    _, complex_ = _cech(inv.arguments[0])
    return CommandResult("\n".join(f"face {{{','.join(f)}}}: {format_polytope(p)}" for f, p in complex_.faces.items()))


@command("cech", "d", "cover", "cochain")
def cech_d(inv: Invocation) -> CommandResult:
    """Cech differential of a cochain."""
    cover, complex_ = _cech(inv.arguments[0])
    c = parse_cochain(read_input(inv.arguments[1]), cover.dim, _prec(inv))
    return CommandResult(format_cochain(cech_differential(complex_, c)))


@command("cech", "augment", "cover", "f")
def cech_augment(inv: Invocation) -> CommandResult:
    """Restrictions of a global element to every piece."""
    cover, complex_ = _cech(inv.arguments[0])
    f = parse_laurent(read_input(inv.arguments[1]).strip(), cover.dim)
    return CommandResult(format_cochain(augment(f, complex_, _prec(inv))))


@command("cech", "tate-split", "f")
def cech_tate_split(inv: Invocation) -> CommandResult:
    """Split along --axis into positive and nonpositive exponents."""
    f = parse_laurent(read_input(inv.arguments[0]).strip())
    plus, minus = tate_split(f, axis=inv.axis)
    return CommandResult(_lines([("+", format_laurent(plus)), ("-", format_laurent(minus))]))


@command("cech", "tate-h", "polytope", "normal", "level", "cochain")
def cech_tate_h(inv: Invocation) -> CommandResult:
    """Two-term homotopy for the split <normal, x> >= level | <= level."""
    base = _polytope(inv.arguments[0])
    u, level = primitive_hyperplane(parse_int_vector(inv.arguments[1]), parse_rational(inv.arguments[2]))
    c = parse_cochain(read_input(inv.arguments[3]), base.dim, _prec(inv))
    out = two_term_homotopy(base, u, level, c)
    return CommandResult(format_laurent(out) if c.degree == 0 else format_cochain(out))


@command("cech", "laurent-h", "polytope", "cochain", "splits...")
def cech_laurent_h(inv: Invocation) -> CommandResult:
    """Contraction of a product Laurent complex; each split is normal@level."""
    base = _polytope(inv.arguments[0])
    c = parse_cochain(read_input(inv.arguments[1]), base.dim, _prec(inv))
    splits = []
    for raw in inv.arguments[2:]:
        normal, _, level = raw.partition("@")
        splits.append(primitive_hyperplane(parse_int_vector(normal), parse_rational(level)))
    return CommandResult(format_cochain(laurent_homotopy(build_laurent(base, splits), c)))


@command("cech", "reconstruct", "cover", "cochain")
def cech_reconstruct(inv: Invocation) -> CommandResult:
    """Global element glued from a degree-0 cocycle."""
    cover, complex_ = _cech(inv.arguments[0])
    c = parse_cochain(read_input(inv.arguments[1]), cover.dim, _prec(inv))
    return CommandResult(format_laurent(h0_reconstruct(complex_, c)))


@command("cech", "locality", "p", "p_big", "p_core", "neighbourhood")
def cech_locality(inv: Invocation) -> CommandResult:
    """Check that HF(P, P') only sees P' near P."""
    p, big, core, nu = (_polytope(a) for a in inv.arguments[:4])
    report = locality_check(p, big, core, nu)
    lines = [
        f"piece {'core' if piece.is_core else 'outer'} {format_polytope(piece.polytope)}: {piece.classification.describe()}"
        for piece in report.pieces
    ]
    lines.append(f"identification: {report.identification[0].describe()} | {report.identification[1].describe()}")
    if report.counterexample is not None:
        lines.append(f"counterexample: {format_polytope(report.counterexample)}")
    lines.append(f"RESULT: {'PASS' if report.passed else 'FAIL'}")
    return CommandResult("\n".join(lines), 0 if report.passed else 1)


# cat


def _category(arg: str) -> cat_ops.DirectedCategory:
    return cat_ops.build_category(parse_cover(read_input(arg)).build())


def _module(cat: cat_ops.DirectedCategory, arg: str, prec: Precision) -> cat_ops.RankOneModule:
    spec = parse_module(read_input(arg), cat.dim)
    return cat_ops.rank1_module(cat, spec.side, spec.cocycle, prec)


@command("cat", "build", "category")
def cat_build(inv: Invocation) -> CommandResult:
    """Objects and nonzero morphism spaces."""
    cat = _category(inv.arguments[0])
    lines = [f"object {label}: {format_polytope(cat.polytope(label))}" for label in cat.objects]
    lines.extend(
        f"hom {tau} -> {sigma}: Gamma^{cat.polytope(sigma).describe()}" for tau, sigma in cat.nonzero_homs()
    )
    return CommandResult("\n".join(lines))


@command("cat", "compose", "category", "tau", "sigma", "rho", "f", "g")
def cat_compose(inv: Invocation) -> CommandResult:
    """g . f for f: tau -> sigma and g: sigma -> rho."""
    cat = _category(inv.arguments[0])
    tau, sigma, rho = inv.arguments[1:4]
    f = parse_laurent(read_input(inv.arguments[4]).strip(), cat.dim)
    g = parse_laurent(read_input(inv.arguments[5]).strip(), cat.dim)
    out = cat_ops.compose(cat, cat_ops.Morphism(sigma, rho, g), cat_ops.Morphism(tau, sigma, f), _prec(inv))
    return CommandResult(format_laurent(out.value))


@command("cat", "tensor-witness", "category", "module", "sigma", "target", "aux")
def cat_tensor_witness(inv: Invocation) -> CommandResult:
    """Preimage of a target under the tensor map over the star of sigma."""
    cat = _category(inv.arguments[0])
    prec = _prec(inv)
    module = _module(cat, inv.arguments[1], prec)
    target = parse_laurent(read_input(inv.arguments[3]).strip(), cat.dim)
    aux = _polytope(inv.arguments[4])
    witness = cat_ops.tensor_surjectivity_witness(cat, module, inv.arguments[2], target, aux, prec)
    lines = [f"component {rho}: f={format_laurent(f.value)} m={format_laurent(m)}"
             for rho, (f, m) in witness.components.items()]
    passed = witness.residual_val >= prec.cutoff
    lines += [f"image: {format_laurent(witness.image)}", f"residual_val: {format_valuation(witness.residual_val)}",
              f"RESULT: {'PASS' if passed else 'FAIL'}"]
    return CommandResult("\n".join(lines), 0 if passed else 1)


@command("cat", "hom-witness", "category", "module", "sigma", "family", "aux")
def cat_hom_witness(inv: Invocation) -> CommandResult:
    """Glue a compatible family, given as a degree-0 cochain, over the star of sigma."""
    cat = _category(inv.arguments[0])
    prec = _prec(inv)
    module = _module(cat, inv.arguments[1], prec)
    family = parse_cochain(read_input(inv.arguments[3]), cat.dim, prec)
    values = {face[0]: value for face, value in family.values.items() if len(face) == 1}
    witness = cat_ops.hom_reconstruction_witness(cat, module, inv.arguments[2], values, _polytope(inv.arguments[4]), prec)
    return CommandResult(_lines([("Y", format_laurent(witness.value)), ("precision", format_rational(witness.precision.cutoff))]))


@command("cat", "locality", "category", "sigma")
def cat_locality(inv: Invocation) -> CommandResult:
    """Bar chains feeding hom(-, sigma) stay in the star of sigma."""
    cat = _category(inv.arguments[0])
    trivial = cat_ops.rank1_module(cat, "left", {}, _prec(inv))
    report = cat_ops.locality_restrict_check(cat, trivial, trivial, inv.arguments[1])
    lines = [f"chains checked: {report.chains_checked}"]
    if report.offending_chain is not None:
        lines.append(f"offending chain: {' -> '.join(report.offending_chain)}")
    lines.append(f"RESULT: {'PASS' if report.passed else 'FAIL'}")
    return CommandResult("\n".join(lines), 0 if report.passed else 1)


@command("cat", "perfectness", "category", "module")
def cat_perfectness(inv: Invocation) -> CommandResult:
    """Filtration of the Yoneda modules in decreasing order."""
    cat = _category(inv.arguments[0])
    prec = _prec(inv)
    report = cat_ops.perfectness_filtration(cat, _module(cat, inv.arguments[1], prec), prec)
    lines = []
    for stage in report.stages:
        kind = "base" if stage.is_base else "extension of " + ",".join(stage.upper)
        lines.append(f"stage {stage.sigma}: {kind}; {'PASS' if stage.comparisons_passed else 'FAIL'}")
    lines.append(f"extension steps: {report.extension_steps}")
    lines.append(f"RESULT: {'PASS' if report.passed else 'FAIL'}")
    return CommandResult("\n".join(lines), 0 if report.passed else 1)


def arity_ok(spec: CommandSpec, arguments: list[str]) -> bool:
    if spec.params and spec.params[-1].endswith("..."):
        return len(arguments) >= len(spec.params) - 1
    return len(arguments) == len(spec.params)

