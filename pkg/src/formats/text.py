"""Canonical line-oriented text forms for every value the engine reads or writes.

Printing is canonical: terms sorted, rationals in lowest terms as ``p/q`` or
``p``. Parsing tolerates extra spacing and any term order, and normalizes.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Literal, Sequence, TypeVar

from src.algebra.affinoid import LaurentElement
from src.algebra.cech import CechCochain, Face
from src.algebra.novikov import NovikovScalar, Precision
from src.algebra.operators import FiniteOperator, Functional, GradedOperator
from src.algebra.polytope import Cover, Halfspace, Polytope

T = TypeVar("T")

_RATIONAL = re.compile(r"-?\d+(?:/\d+)?")
_INTEGER = re.compile(r"-?\d+")
_LABEL = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")


class TextFormatError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1) -> None:
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class Scanner:
    """Cursor over one line of input; columns are reported 1-based."""

    def __init__(self, text: str, line: int = 1) -> None:
        self.text = text
        self.pos = 0
        self.line = line

    def error(self, message: str) -> TextFormatError:
        return TextFormatError(message, self.line, self.pos + 1)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def at_end(self) -> bool:
        self.skip()
        return self.pos >= len(self.text)

    def peek(self, token: str) -> bool:
        self.skip()
        return self.text.startswith(token, self.pos)

    def keyword(self, word: str) -> bool:
        self.skip()
        m = _LABEL.match(self.text, self.pos)
        if m and m.group(0) == word:
            self.pos = m.end()
            return True
        return False

    def accept(self, token: str) -> bool:
        if self.peek(token):
            self.pos += len(token)
            return True
        return False

    def expect(self, token: str) -> None:
        if not self.accept(token):
            found = self.text[self.pos : self.pos + 1] or "end of input"
            raise self.error(f"expected {token!r}, found {found!r}")

    def match(self, pattern: re.Pattern[str], what: str) -> str:
        self.skip()
        m = pattern.match(self.text, self.pos)
        if not m:
            raise self.error(f"expected {what}")
        self.pos = m.end()
        return m.group(0)

    def rational(self) -> Fraction:
        start = self.pos
        token = self.match(_RATIONAL, "a rational number")
        if self.text.startswith("/", self.pos):
            raise self.error(f"malformed rational {self.text[start:self.pos + 1].strip()!r}")
        numerator, _, denominator = token.partition("/")
        if denominator and int(denominator) == 0:
            raise TextFormatError("zero denominator", self.line, start + 1)
        return Fraction(int(numerator), int(denominator or 1))

    def integer(self) -> int:
        return int(self.match(_INTEGER, "an integer"))

    def label(self) -> str:
        return self.match(_LABEL, "a label")

    def vector(self, item: Callable[[], T], open_: str = "[", close: str = "]") -> list[T]:
        self.expect(open_)
        values: list[T] = []
        if self.accept(close):
            return values
        values.append(item())
        while self.accept(","):
            values.append(item())
        self.expect(close)
        return values

    def finish(self) -> None:
        if not self.at_end():
            raise self.error(f"unexpected trailing text {self.text[self.pos:]!r}")


def _whole(text: str, line: int, read: Callable[[Scanner], T]) -> T:
    scanner = Scanner(text, line)
    value = read(scanner)
    scanner.finish()
    return value


# rationals and vectors


def format_rational(x: Fraction | int) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(text: str, line: int = 1) -> Fraction:
    return _whole(text, line, Scanner.rational)


def format_valuation(v: Fraction | float) -> str:
    return "inf" if v == math.inf else format_rational(Fraction(v))


def format_vector(values: Sequence[Fraction | int]) -> str:
    return "[" + ",".join(format_rational(v) for v in values) + "]"


def parse_int_vector(text: str, line: int = 1) -> tuple[int, ...]:
    return tuple(_whole(text, line, lambda s: s.vector(s.integer)))


def parse_rational_vector(text: str, line: int = 1) -> tuple[Fraction, ...]:
    return tuple(_whole(text, line, lambda s: s.vector(s.rational)))


# Novikov scalars


def format_novikov(x: NovikovScalar) -> str:
    if x.is_zero():
        return "0"
    parts = []
    for exponent, coefficient in x.terms:
        c = format_rational(coefficient)
        parts.append(c if exponent == 0 else f"{c}*T^({format_rational(exponent)})")
    return " + ".join(parts)


def _read_novikov_term(s: Scanner) -> tuple[Fraction, Fraction]:
    if s.peek("T"):
        coefficient = Fraction(1)
    else:
        coefficient = s.rational()
        if not s.accept("*"):
            return Fraction(0), coefficient
    s.expect("T")
    if not s.accept("^"):
        return Fraction(1), coefficient
    if s.accept("("):
        exponent = s.rational()
        s.expect(")")
    else:
        exponent = s.rational()
    return exponent, coefficient


def read_novikov(s: Scanner) -> NovikovScalar:
    terms = [_read_novikov_term(s)]
    while s.accept("+"):
        terms.append(_read_novikov_term(s))
    return NovikovScalar.from_terms(terms)


def parse_novikov(text: str, line: int = 1) -> NovikovScalar:
    return _whole(text, line, read_novikov)


# Laurent elements and functionals


def _format_monomial_sum(dim: int, terms: Sequence[tuple[Sequence[int], NovikovScalar]], symbol: str) -> str:
    if not terms:
        return "0"
    return " + ".join(f"({format_novikov(c)})*{symbol}{format_vector(beta)}" for beta, c in terms)


def _read_monomial_sum(
    s: Scanner, symbol: str, dim: int | None
) -> tuple[int, list[tuple[tuple[int, ...], NovikovScalar]]]:
    if s.accept("0"):
        if dim is None:
            raise s.error("zero needs a known dimension")
        return dim, []
    terms = []
    while True:
        s.expect("(")
        c = read_novikov(s)
        s.expect(")")
        s.expect("*")
        s.expect(symbol)
        beta = tuple(s.vector(s.integer))
        if dim is None:
            dim = len(beta)
        elif len(beta) != dim:
            raise s.error(f"exponent vector has length {len(beta)}, expected {dim}")
        terms.append((beta, c))
        if not s.accept("+"):
            break
    return dim, terms


def format_laurent(f: LaurentElement) -> str:
    return _format_monomial_sum(f.dim, f.terms, "z")


def read_laurent(s: Scanner, dim: int | None = None) -> LaurentElement:
    dim, terms = _read_monomial_sum(s, "z", dim)
    return LaurentElement.from_terms(dim, terms)


def parse_laurent(text: str, dim: int | None = None, line: int = 1) -> LaurentElement:
    return _whole(text, line, lambda s: read_laurent(s, dim))


def format_functional(rho: Functional) -> str:
    return _format_monomial_sum(rho.dim, rho.entries, "rho")


def parse_functional(text: str, dim: int | None = None, line: int = 1) -> Functional:
    def read(s: Scanner) -> Functional:
        n, terms = _read_monomial_sum(s, "rho", dim)
        return Functional.from_terms(n, terms)

    return _whole(text, line, read)


# graded operators


def _format_subset(subset: Sequence[int]) -> str:
    return "b{" + ",".join(str(j) for j in subset) + "}"


def format_operator(psi: GradedOperator) -> str:
    parts = [
        f"({format_novikov(c)})*e{format_vector(g)}{format_vector(a)} ^ {_format_subset(subset)}"
        for subset, op in psi.components
        for (g, a), c in op.entries
    ]
    return " + ".join(parts) if parts else "0"


def read_operator(s: Scanner, dim: int | None = None) -> GradedOperator:
    if s.accept("0"):
        if dim is None:
            raise s.error("zero needs a known dimension")
        return GradedOperator.zero(dim)
    pieces = []
    while True:
        s.expect("(")
        c = read_novikov(s)
        s.expect(")")
        s.expect("*")
        s.expect("e")
        gamma = tuple(s.vector(s.integer))
        alpha = tuple(s.vector(s.integer))
        if dim is None:
            dim = len(gamma)
        if len(gamma) != dim or len(alpha) != dim:
            raise s.error(f"exponent vectors must have length {dim}")
        subset: list[int] = []
        if s.accept("^"):
            s.expect("b")
            subset = s.vector(s.integer, "{", "}")
            if any(not 1 <= j <= dim for j in subset) or len(set(subset)) != len(subset):
                raise s.error(f"exterior label {subset} is not a set of axes in 1..{dim}")
        pieces.append((subset, FiniteOperator.elementary(gamma, alpha, c)))
        if not s.accept("+"):
            break
    return GradedOperator.from_components(dim, pieces)


def parse_operator(text: str, dim: int | None = None, line: int = 1) -> GradedOperator:
    return _whole(text, line, lambda s: read_operator(s, dim))


# polytopes


def format_polytope(p: Polytope) -> str:
    fields = [f"dim={p.dim}", f"q={format_vector(p.basepoint)}"]
    fields.extend(f"ineq {format_vector(h.normal)} >= {format_rational(h.offset)}" for h in p.constraints)
    return "P{" + "; ".join(fields) + "}"


def format_vertices(p: Polytope) -> str:
    return "\n".join(format_vector(v) for v in sorted(p.vertices))


def read_polytope(s: Scanner, default_basepoint: Sequence[Fraction] | None = None) -> Polytope:
    s.expect("P")
    s.expect("{")
    s.expect("dim")
    s.expect("=")
    dim = s.integer()
    if dim < 1:
        raise s.error("dimension must be positive")
    basepoint = tuple(default_basepoint) if default_basepoint is not None else None
    constraints = []
    while s.accept(";"):
        if s.keyword("q"):
            s.expect("=")
            basepoint = tuple(s.vector(s.rational))
            if len(basepoint) != dim:
                raise s.error(f"basepoint has length {len(basepoint)}, expected {dim}")
            continue
        if not s.keyword("ineq"):
            raise s.error("expected q=[...] or ineq [...] >= c")
        normal = tuple(s.vector(s.integer))
        if len(normal) != dim:
            raise s.error(f"normal has length {len(normal)}, expected {dim}")
        s.expect(">=")
        constraints.append(Halfspace(normal, s.rational()))
    s.expect("}")
    return Polytope.from_halfspaces(dim, constraints, basepoint)


def parse_polytope(text: str, line: int = 1) -> Polytope:
    return _whole(text, line, read_polytope)


# files: covers, categories, cochains, modules


def _content_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            out.append((number, stripped))
    return out


@dataclass(frozen=True)
class CoverSpec:
    base: Polytope
    pieces: tuple[tuple[str, Polytope], ...]
    relations: tuple[tuple[str, str], ...]

    def build(self) -> Cover:
        return Cover.build(self.base, list(self.pieces), self.relations)


def parse_cover(text: str) -> CoverSpec:
    """``base P{...}``, then ``piece <label> P{...}`` lines, then optional ``a <= b`` relations.

    Pieces without their own ``q`` inherit the basepoint of the base.
    """
    base: Polytope | None = None
    pieces: list[tuple[str, Polytope]] = []
    relations: list[tuple[str, str]] = []
    for number, line in _content_lines(text):
        s = Scanner(line, number)
        if s.keyword("base"):
            base = read_polytope(s)
        elif s.keyword("piece"):
            if base is None:
                raise s.error("the base polytope must come before the pieces")
            label = s.label()
            pieces.append((label, read_polytope(s, base.basepoint)))
        else:
            tau = s.label()
            s.expect("<=")
            relations.append((tau, s.label()))
        s.finish()
    if base is None:
        raise TextFormatError("cover file has no base polytope", 1, 1)
    if not pieces:
        raise TextFormatError("cover file has no pieces", 1, 1)
    return CoverSpec(base, tuple(pieces), tuple(relations))


def format_cover(spec: CoverSpec) -> str:
    lines = [f"base {format_polytope(spec.base)}"]
    lines.extend(f"piece {label} {format_polytope(p)}" for label, p in spec.pieces)
    lines.extend(f"{tau} <= {sigma}" for tau, sigma in spec.relations)
    return "\n".join(lines)


def _format_face(face: Face) -> str:
    return "{" + ",".join(face) + "}"


def _face_item(s: Scanner) -> str:
    # sign words of Laurent complexes, or cover labels
    for sign in ("+", "-", "="):
        if s.accept(sign):
            return sign
    return s.label()


def format_cochain(c: CechCochain) -> str:
    lines = [f"degree {c.degree}", f"prec {format_rational(c.precision.cutoff)}"]
    lines.extend(f"face {_format_face(face)}: {format_laurent(v)}" for face, v in sorted(c.nonzero().items()))
    return "\n".join(lines)


def parse_cochain(text: str, dim: int, precision: Precision) -> CechCochain:
    """``face {a,b}: <laurent>`` lines; optional ``degree k`` and ``prec E`` headers."""
    degree: int | None = None
    values: dict[Face, LaurentElement] = {}
    for number, line in _content_lines(text):
        s = Scanner(line, number)
        if s.keyword("degree"):
            degree = s.integer()
        elif s.keyword("prec"):
            precision = Precision(s.rational())
        else:
            if not s.keyword("face"):
                raise s.error("expected face {...}: <laurent>")
            face = tuple(s.vector(lambda: _face_item(s), "{", "}"))
            s.expect(":")
            value = read_laurent(s, dim)
            if degree is None:
                degree = len(face) - 1
            elif len(face) - 1 != degree:
                raise s.error(f"face {_format_face(face)} does not have degree {degree}")
            values[face] = values[face].add(value) if face in values else value
        s.finish()
    return CechCochain(degree if degree is not None else 0, values, precision)


@dataclass(frozen=True)
class ModuleSpec:
    side: Literal["left", "right"]
    cocycle: dict[tuple[str, str], LaurentElement]


def parse_module(text: str, dim: int) -> ModuleSpec:
    """``side left|right`` then ``g[a<=ab] = <laurent>`` lines."""
    side: str | None = None
    cocycle: dict[tuple[str, str], LaurentElement] = {}
    for number, line in _content_lines(text):
        s = Scanner(line, number)
        if s.keyword("side"):
            side = s.label()
            if side not in ("left", "right"):
                raise s.error(f"side must be left or right, not {side!r}")
        else:
            s.expect("g")
            s.expect("[")
            tau = s.label()
            s.expect("<=")
            sigma = s.label()
            s.expect("]")
            s.expect("=")
            cocycle[(tau, sigma)] = read_laurent(s, dim)
        s.finish()
    if side is None:
        raise TextFormatError("module file does not declare a side", 1, 1)
    return ModuleSpec(side, cocycle)  # type: ignore[arg-type]


def format_module(spec: ModuleSpec) -> str:
    lines = [f"side {spec.side}"]
    lines.extend(f"g[{t}<={s}] = {format_laurent(g)}" for (t, s), g in sorted(spec.cocycle.items()))
    return "\n".join(lines)
