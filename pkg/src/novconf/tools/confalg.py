"""Finitely presented conformal algebras and their λ-bracket calculus.

Elements are finite combinations Σ c_g(∂, …)·g over named generators, with
coefficients in the commutative polynomial ring 𝕜[∂, λ, μ, ν, τ]. A
presentation fixes the bracket of every generator pair as an element whose
coefficients use ∂ and λ only; sesquilinearity extends it to all elements:

    (∂^j a λ b) = (−λ)^j (a λ b),    (a λ ∂^j b) = (∂+λ)^j (a λ b).

The substitution λ ↦ −∂−μ is plain polynomial substitution, all symbols
commute.
"""

from __future__ import annotations

import logging
import math
import random
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
from typing import Any

from sympy import QQ
from sympy.polys.rings import PolyElement, ring

from novconf.errors import AxiomError, ClosureError, UsageError

logger = logging.getLogger(__name__)

OP_RING, DEL, LAM, MU, NU, TAU = ring("d,lam,mu,nu,tau", QQ)
SYMBOL_NAMES = ("del", "lam", "mu", "nu", "tau")
_DEL_INDEX = 0
_TAU_INDEX = 4

OpPoly = PolyElement


def to_qq(c: Fraction | int) -> Any:
    c = Fraction(c)
    return QQ(c.numerator, c.denominator)


def from_qq(c: Any) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def op_const(c: Fraction | int) -> OpPoly:
    return OP_RING.ground_new(to_qq(c))


def op_symbols(poly: OpPoly) -> set[str]:
    """Names of the ring symbols that occur in ``poly``."""
    used: set[str] = set()
    for monom, _ in poly.terms():
        used |= {SYMBOL_NAMES[i] for i, e in enumerate(monom) if e}
    return used


def coeff_in(poly: OpPoly, index: int, power: int) -> OpPoly:
    """Coefficient of (symbol ``index``)^power, as a polynomial in the others."""
    picked = {}
    for monom, c in poly.terms():
        if monom[index] == power:
            rest = list(monom)
            rest[index] = 0
            picked[tuple(rest)] = c
    return OP_RING.from_dict(picked) if picked else OP_RING.zero


def degree_in(poly: OpPoly, index: int) -> int:
    """Degree in one symbol; -1 for the zero polynomial."""
    return max((monom[index] for monom, _ in poly.terms()), default=-1)


def render_oppoly(poly: OpPoly) -> str:
    """Canonical text in script syntax, e.g. ``del^2 + 2*del*lam + lam^2``."""
    if not poly:
        return "0"
    parts = []
    for monom, c in sorted(poly.terms(), key=lambda t: t[0], reverse=True):
        frac = from_qq(c)
        factors = [
            name if e == 1 else f"{name}^{e}"
            for name, e in zip(SYMBOL_NAMES, monom, strict=True)
            if e
        ]
        mag = abs(frac)
        mag_text = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
        if not factors:
            body = mag_text
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([mag_text, *factors])
        parts.append(("-" if frac < 0 else "+", body))
    text = parts[0][1] if parts[0][0] == "+" else f"-{parts[0][1]}"
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


# ── Elements ───────────────────────────────────────────────────


class ConfElement:
    """Finite map generator-name → nonzero OpPoly."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[str, OpPoly] | None = None) -> None:
        self._terms: dict[str, OpPoly] = {g: p for g, p in (terms or {}).items() if p}

    @classmethod
    def zero(cls) -> ConfElement:
        return cls()

    @classmethod
    def gen(cls, name: str, coeff: OpPoly | Fraction | int = 1) -> ConfElement:
        if not isinstance(coeff, PolyElement):
            coeff = op_const(coeff)
        return cls({name: coeff})

    def __iter__(self) -> Iterator[tuple[str, OpPoly]]:
        return iter(sorted(self._terms.items()))

    def __len__(self) -> int:
        return len(self._terms)

    def coeff(self, name: str) -> OpPoly:
        return self._terms.get(name, OP_RING.zero)

    def generators(self) -> set[str]:
        return set(self._terms)

    def symbols(self) -> set[str]:
        out: set[str] = set()
        for p in self._terms.values():
            out |= op_symbols(p)
        return out

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def map_coeffs(self, fn: Any) -> ConfElement:
        return ConfElement({g: fn(p) for g, p in self._terms.items()})

    def __add__(self, other: ConfElement) -> ConfElement:
        out = dict(self._terms)
        for g, p in other._terms.items():
            out[g] = out.get(g, OP_RING.zero) + p
        return ConfElement(out)

    def __neg__(self) -> ConfElement:
        return ConfElement({g: -p for g, p in self._terms.items()})

    def __sub__(self, other: ConfElement) -> ConfElement:
        return self + (-other)

    def __mul__(self, scalar: OpPoly | Fraction | int) -> ConfElement:
        if not isinstance(scalar, PolyElement):
            scalar = op_const(scalar)
        return ConfElement({g: p * scalar for g, p in self._terms.items()})

    __rmul__ = __mul__

    def partial(self, times: int = 1) -> ConfElement:
        return self * (DEL**times)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConfElement):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(tuple((g, str(p)) for g, p in sorted(self._terms.items())))

    def render(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for g, p in sorted(self._terms.items()):
            if p == OP_RING.one:
                parts.append(g)
            elif p == -OP_RING.one:
                parts.append(f"-{g}")
            elif len(p.terms()) == 1 and not op_symbols(p):
                parts.append(f"{render_oppoly(p)}*{g}")
            else:
                parts.append(f"({render_oppoly(p)})*{g}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"ConfElement({self.render()!r})"


# ── Presentations ──────────────────────────────────────────────


@dataclass(frozen=True, eq=False)
class ConfPresentation:
    """Generators plus a λ-bracket table; unlisted pairs bracket to zero."""

    name: str
    generators: tuple[str, ...]
    table: Mapping[tuple[str, str], ConfElement]
    _nproducts: dict[tuple[str, str, int], ConfElement] = field(
        default_factory=dict, repr=False
    )
    _localities: dict[tuple[str, str], int] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if len(set(self.generators)) != len(self.generators):
            msg = f"duplicate generator names in {self.name}: {self.generators}"
            raise UsageError(msg)
        known = set(self.generators)
        for (g, h), value in self.table.items():
            if g not in known or h not in known:
                msg = f"bracket({g}, {h}) in {self.name} names an unknown generator"
                raise UsageError(msg)
            stray = value.generators() - known
            if stray:
                msg = f"bracket({g}, {h}) in {self.name} uses unknown generators {sorted(stray)}"
                raise UsageError(msg)
            extra = value.symbols() - {"del", "lam"}
            if extra:
                msg = f"bracket({g}, {h}) in {self.name} uses symbols {sorted(extra)}"
                raise UsageError(msg)

    def entry(self, g: str, h: str) -> ConfElement:
        return self.table.get((g, h), ConfElement.zero())

    def element(self, name: str) -> ConfElement:
        self.require([name])
        return ConfElement.gen(name)

    def require(self, names: Iterable[str]) -> None:
        unknown = sorted(set(names) - set(self.generators))
        if unknown:
            msg = f"unknown generator(s) {unknown} in {self.name}"
            raise UsageError(msg)

    def nonzero_pairs(self) -> list[tuple[str, str]]:
        return sorted(k for k, v in self.table.items() if not v.is_zero)


def bracket(a: ConfPresentation, u: ConfElement, v: ConfElement, out: OpPoly = LAM) -> ConfElement:
    """(u out v) by bilinearity and sesquilinearity of the table.

    ``out`` is any polynomial free of ∂ (a symbol or a sum such as λ+μ);
    other symbols in the coefficients of u and v pass through as scalars.
    """
    if degree_in(out, _DEL_INDEX) > 0:
        msg = "bracket output variable must not involve del; use subst_neg_partial"
        raise UsageError(msg)
    a.require(u.generators() | v.generators())
    result = ConfElement.zero()
    for g, cg in u:
        left = cg.compose(DEL, -out)
        if not left:
            continue
        for h, eh in v:
            value = a.entry(g, h)
            if value.is_zero:
                continue
            factor = left * eh.compose(DEL, DEL + out)
            for k, t in value:
                result = result + ConfElement.gen(k, t.compose(LAM, out) * factor)
    return result


def n_product(a: ConfPresentation, u: ConfElement, v: ConfElement, n: int) -> ConfElement:
    """(u ₙ v): n! times the λ^n coefficient of the bracket."""
    if n < 0:
        msg = f"n-product requires n >= 0, got {n}"
        raise UsageError(msg)
    full = bracket(a, u, v, TAU)
    scale = math.factorial(n)
    return full.map_coeffs(lambda p: coeff_in(p, _TAU_INDEX, n) * scale)


def table_n_product(a: ConfPresentation, g: str, h: str, n: int) -> ConfElement:
    """Cached n-product of two generators."""
    key = (g, h, n)
    if key not in a._nproducts:
        a._nproducts[key] = n_product(a, ConfElement.gen(g), ConfElement.gen(h), n)
    return a._nproducts[key]


def table_locality(a: ConfPresentation, g: str, h: str) -> int:
    """Cached locality of two generators."""
    key = (g, h)
    if key not in a._localities:
        a._localities[key] = locality(a, ConfElement.gen(g), ConfElement.gen(h))
    return a._localities[key]


def locality(a: ConfPresentation, u: ConfElement, v: ConfElement) -> int:
    """0 for a zero bracket, else 1 + its λ-degree."""
    full = bracket(a, u, v, TAU)
    if full.is_zero:
        return 0
    return 1 + max(degree_in(p, _TAU_INDEX) for _, p in full)


def subst_neg_partial(e: ConfElement, target: OpPoly, variable: OpPoly = NU) -> ConfElement:
    """Replace ``variable`` with the operator −∂−target in every coefficient."""
    return e.map_coeffs(lambda p: p.compose(variable, -DEL - target))


# ── Identity checks ────────────────────────────────────────────


class Identity(StrEnum):
    COMMUTATIVE = "commutative"
    ANTICOMMUTATIVE = "anticommutative"
    ASSOCIATIVE = "associative"
    JACOBI = "jacobi"
    RSYM_NOVIKOV = "rsym_novikov"
    LCOM_NOVIKOV = "lcom_novikov"


BINARY_IDENTITIES = frozenset({Identity.COMMUTATIVE, Identity.ANTICOMMUTATIVE})


@dataclass(frozen=True)
class IdentityResidual:
    identity: Identity
    lhs: ConfElement
    rhs: ConfElement

    @property
    def residual(self) -> ConfElement:
        return self.lhs - self.rhs

    @property
    def holds(self) -> bool:
        return self.residual.is_zero


def check_identity(
    a: ConfPresentation,
    which: Identity | str,
    u: ConfElement,
    v: ConfElement,
    w: ConfElement | None = None,
) -> IdentityResidual:
    """Left and right side of the selected identity in independent λ, μ."""
    which = Identity(which)

    def br(x: ConfElement, y: ConfElement, out: OpPoly) -> ConfElement:
        return bracket(a, x, y, out)

    def br_neg(x: ConfElement, y: ConfElement, target: OpPoly) -> ConfElement:
        return subst_neg_partial(bracket(a, x, y, NU), target)

    if which in BINARY_IDENTITIES:
        lhs = br(u, v, LAM)
        rhs = br_neg(v, u, LAM)
        if which == Identity.ANTICOMMUTATIVE:
            rhs = -rhs
        return IdentityResidual(which, lhs, rhs)

    if w is None:
        msg = f"identity {which} needs three arguments"
        raise UsageError(msg)

    match which:
        case Identity.ASSOCIATIVE:
            lhs = br(u, br(v, w, MU), LAM)
            rhs = br(br(u, v, LAM), w, LAM + MU)
        case Identity.JACOBI:
            lhs = br(u, br(v, w, MU), LAM) - br(v, br(u, w, LAM), MU)
            rhs = br(br(u, v, LAM), w, LAM + MU)
        case Identity.RSYM_NOVIKOV:
            lhs = br(br(u, v, LAM), w, LAM + MU) - br(u, br(v, w, MU), LAM)
            rhs = br_neg(br(u, w, LAM), v, MU) - br(u, br_neg(w, v, MU), LAM)
        case _:
            lhs = br(u, br(v, w, MU), LAM)
            rhs = br(v, br(u, w, LAM), MU)
    return IdentityResidual(which, lhs, rhs)


@dataclass(frozen=True)
class TripleResidual:
    identity: str
    arguments: tuple[str, ...]
    residual: ConfElement


def check_on_generators(a: ConfPresentation, which: Identity | str) -> list[TripleResidual]:
    """Failing generator tuples of the identity; empty when it holds on all."""
    which = Identity(which)
    failures = []
    arity = 2 if which in BINARY_IDENTITIES else 3
    gens = a.generators
    tuples: Iterable[tuple[str, ...]]
    if arity == 2:
        tuples = ((g, h) for g in gens for h in gens)
    else:
        tuples = ((g, h, k) for g in gens for h in gens for k in gens)
    for names in tuples:
        elems = [ConfElement.gen(n) for n in names]
        result = check_identity(a, which, *elems)
        if not result.holds:
            failures.append(TripleResidual(which, names, result.residual))
    return failures


def sample_elements(
    a: ConfPresentation,
    rng: random.Random,
    count: int,
    *,
    max_terms: int = 2,
    max_partial: int = 2,
) -> list[ConfElement]:
    """Random 𝕜[∂]-combinations of generators with small integer coefficients."""
    out = []
    for _ in range(count):
        elem = ConfElement.zero()
        for _ in range(rng.randint(1, max_terms)):
            g = rng.choice(a.generators)
            coeff = OP_RING.zero
            for j in range(rng.randint(0, max_partial) + 1):
                coeff += op_const(rng.randint(-3, 3)) * DEL**j
            elem = elem + ConfElement.gen(g, coeff)
        out.append(elem)
    return out


def check_on_samples(
    a: ConfPresentation,
    which: Identity | str,
    rng: random.Random,
    count: int,
) -> list[IdentityResidual]:
    """Failing results on ``count`` random argument tuples."""
    which = Identity(which)
    failures = []
    arity = 2 if which in BINARY_IDENTITIES else 3
    for _ in range(count):
        args = sample_elements(a, rng, arity)
        result = check_identity(a, which, *args)
        if not result.holds:
            failures.append(result)
    return failures


# ── Derivations and C^(D) ──────────────────────────────────────


@dataclass(frozen=True)
class DerivationTable:
    """Images of generators; unlisted generators map to zero."""

    name: str
    images: Mapping[str, ConfElement]

    def apply(self, u: ConfElement) -> ConfElement:
        out = ConfElement.zero()
        for g, c in u:
            out = out + self.images.get(g, ConfElement.zero()) * c
        return out

    @classmethod
    def partial(cls, a: ConfPresentation) -> DerivationTable:
        """D = ∂, a derivation of every conformal algebra."""
        return cls(name="partial", images={g: ConfElement.gen(g, DEL) for g in a.generators})

    @classmethod
    def zero(cls) -> DerivationTable:
        return cls(name="zero", images={})


@dataclass(frozen=True)
class DerivationReport:
    failures: tuple[TripleResidual, ...]

    @property
    def holds(self) -> bool:
        return not self.failures


def check_derivation(a: ConfPresentation, d: DerivationTable) -> DerivationReport:
    """Leibniz rule D(g λ h) = (Dg λ h) + (g λ Dh) on all generator pairs."""
    failures = []
    for g in a.generators:
        for h in a.generators:
            ge, he = ConfElement.gen(g), ConfElement.gen(h)
            lhs = d.apply(bracket(a, ge, he, LAM))
            rhs = bracket(a, d.apply(ge), he, LAM) + bracket(a, ge, d.apply(he), LAM)
            residual = lhs - rhs
            if not residual.is_zero:
                failures.append(TripleResidual("leibniz", (g, h), residual))
    return DerivationReport(failures=tuple(failures))


def gelfand(a: ConfPresentation, d: DerivationTable, name: str | None = None) -> ConfPresentation:
    """The algebra C^(D): same ∂, new bracket (g ∘λ h) = (Dg λ h).

    Raises:
        ClosureError: If some D(g) leaves the generator span of ``a``.
        AxiomError: If ``a`` is not commutative or D is not a derivation.
    """
    known = set(a.generators)
    for g, image in sorted(d.images.items()):
        if g not in known:
            msg = f"derivation {d.name} is defined on unknown generator {g}"
            raise UsageError(msg)
        stray = image.generators() - known
        extra = image.symbols() - {"del"}
        if stray or extra:
            reason = f"D({g}) = {image.render()} is not a 𝕜[∂]-combination of generators"
            raise ClosureError((g, g), reason)

    commutative = check_on_generators(a, Identity.COMMUTATIVE)
    if commutative:
        first = commutative[0]
        raise AxiomError("commutative", first.arguments, first.residual.render())
    report = check_derivation(a, d)
    if not report.holds:
        first = report.failures[0]
        raise AxiomError("derivation", first.arguments, first.residual.render())

    table: dict[tuple[str, str], ConfElement] = {}
    for g in a.generators:
        dg = d.apply(ConfElement.gen(g))
        for h in a.generators:
            value = bracket(a, dg, ConfElement.gen(h), LAM)
            if value.generators() - known:
                raise ClosureError((g, h), f"bracket leaves the span: {value.render()}")
            if not value.is_zero:
                table[(g, h)] = value
    logger.info("built %s^(%s) with %d nonzero brackets", a.name, d.name, len(table))
    return ConfPresentation(name=name or f"{a.name}^({d.name})", generators=a.generators, table=table)


# ── Novikov–Poisson algebras ───────────────────────────────────

Vector = dict[str, Fraction]
StructureTable = Mapping[tuple[str, str], Mapping[str, Fraction]]


def _vadd(x: Vector, y: Vector, scale: Fraction | int = 1) -> Vector:
    out = dict(x)
    for k, v in y.items():
        out[k] = out.get(k, Fraction(0)) + v * scale
    return {k: v for k, v in out.items() if v}


@dataclass(frozen=True)
class NovikovPoissonTable:
    """Structure constants of ∘ and * on a finite basis."""

    name: str
    basis: tuple[str, ...]
    circ: StructureTable
    star: StructureTable

    def __post_init__(self) -> None:
        known = set(self.basis)
        for label, table in (("circ", self.circ), ("star", self.star)):
            for (i, j), value in table.items():
                if i not in known or j not in known or set(value) - known:
                    msg = f"{label} table of {self.name} references a non-basis element"
                    raise UsageError(msg)

    def _op(self, table: StructureTable, x: Vector, y: Vector) -> Vector:
        out: Vector = {}
        for i, xi in x.items():
            for j, yj in y.items():
                out = _vadd(out, dict(table.get((i, j), {})), xi * yj)
        return out

    def o(self, x: Vector, y: Vector) -> Vector:
        return self._op(self.circ, x, y)

    def s(self, x: Vector, y: Vector) -> Vector:
        return self._op(self.star, x, y)


@dataclass(frozen=True)
class AxiomFailure:
    axiom: str
    witness: tuple[str, ...]
    residual: Vector

    def render_residual(self) -> str:
        return " + ".join(f"{c}*{k}" for k, c in sorted(self.residual.items())) or "0"


@dataclass(frozen=True)
class NPAxiomReport:
    failures: tuple[AxiomFailure, ...]

    @property
    def holds(self) -> bool:
        return not self.failures


def check_np_axioms(t: NovikovPoissonTable) -> NPAxiomReport:
    """∘ Novikov, * associative and commutative, and both compatibilities."""
    failures: list[AxiomFailure] = []

    def record(axiom: str, witness: tuple[str, ...], residual: Vector) -> None:
        if residual:
            failures.append(AxiomFailure(axiom, witness, residual))

    for a in t.basis:
        for b in t.basis:
            ea, eb = {a: Fraction(1)}, {b: Fraction(1)}
            record("star_commutative", (a, b), _vadd(t.s(ea, eb), t.s(eb, ea), -1))
            for c in t.basis:
                ec = {c: Fraction(1)}
                o, s = t.o, t.s
                rsym = _vadd(
                    _vadd(o(o(ea, eb), ec), o(ea, o(eb, ec)), -1),
                    _vadd(o(o(ea, ec), eb), o(ea, o(ec, eb)), -1),
                    -1,
                )
                record("novikov_rsym", (a, b, c), rsym)
                record("novikov_lcom", (a, b, c), _vadd(o(ea, o(eb, ec)), o(eb, o(ea, ec)), -1))
                record("star_associative", (a, b, c), _vadd(s(s(ea, eb), ec), s(ea, s(eb, ec)), -1))
                record("compat_left", (a, b, c), _vadd(s(o(ea, eb), ec), o(ea, s(eb, ec)), -1))
                compat_right = _vadd(
                    _vadd(o(s(ea, eb), ec), s(ea, o(eb, ec)), -1),
                    _vadd(o(s(ea, ec), eb), s(ea, o(ec, eb)), -1),
                    -1,
                )
                record("compat_right", (a, b, c), compat_right)
    return NPAxiomReport(failures=tuple(failures))


def quadratic_from_np(t: NovikovPoissonTable, name: str | None = None) -> ConfPresentation:
    """Bracket (a λ b) = a∘b + λ(a*b) on the free 𝕜[∂]-module over the basis.

    Raises:
        AxiomError: If the tables are not a Novikov–Poisson algebra.
    """
    report = check_np_axioms(t)
    if not report.holds:
        first = report.failures[0]
        raise AxiomError(first.axiom, first.witness, first.render_residual())
    table: dict[tuple[str, str], ConfElement] = {}
    for a in t.basis:
        for b in t.basis:
            value = ConfElement.zero()
            for k, c in t.circ.get((a, b), {}).items():
                value = value + ConfElement.gen(k, c)
            for k, c in t.star.get((a, b), {}).items():
                value = value + ConfElement.gen(k, op_const(c) * LAM)
            if not value.is_zero:
                table[(a, b)] = value
    return ConfPresentation(name=name or f"quad({t.name})", generators=t.basis, table=table)


# ── Named algebras ─────────────────────────────────────────────


def w_generator(k: int) -> str:
    return f"v{k}"


def build_w(kmax: int) -> ConfPresentation:
    """x, v_0..v_kmax with (v_k λ x) = (∂+λ)^k v_k and every other pair zero."""
    if kmax < 0:
        msg = f"kmax must be >= 0, got {kmax}"
        raise UsageError(msg)
    gens = ("x", *(w_generator(k) for k in range(kmax + 1)))
    table = {
        (w_generator(k), "x"): ConfElement.gen(w_generator(k), (DEL + LAM) ** k)
        for k in range(kmax + 1)
    }
    return ConfPresentation(name=f"W{kmax}", generators=gens, table=table)


def current_algebra() -> ConfPresentation:
    """Current conformal algebra over span{one, t | t² = 0}: (a λ b) = ab."""
    table = {
        ("one", "one"): ConfElement.gen("one"),
        ("one", "t"): ConfElement.gen("t"),
        ("t", "one"): ConfElement.gen("t"),
    }
    return ConfPresentation(name="Cur", generators=("one", "t"), table=table)


def euler_plus_partial(a: ConfPresentation, weights: Mapping[str, int]) -> DerivationTable:
    """D = ∂ + E with E(g) = weights[g]·g, a derivation when the table is graded."""
    images = {
        g: ConfElement.gen(g, DEL + op_const(weights.get(g, 0))) for g in a.generators
    }
    return DerivationTable(name="partial+euler", images=images)


def one_dim_np(circ: Fraction | int = 1, star: Fraction | int = 1) -> NovikovPoissonTable:
    """e∘e = circ·e, e*e = star·e."""
    circ_table = {("e", "e"): {"e": Fraction(circ)}} if circ else {}
    star_table = {("e", "e"): {"e": Fraction(star)}} if star else {}
    return NovikovPoissonTable(name="P1", basis=("e",), circ=circ_table, star=star_table)


def element_from_terms(terms: Sequence[tuple[str, OpPoly]]) -> ConfElement:
    out = ConfElement.zero()
    for g, c in terms:
        out = out + ConfElement.gen(g, c)
    return out
