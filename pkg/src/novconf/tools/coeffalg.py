"""The coefficient algebra 𝒜(C) of a presented conformal algebra.

Symbols g(n) for generators g and integers n, modulo (∂a)(n) = −n·a(n−1).
Every ∂ is eliminated at injection, so elements are kept as maps
(generator, index) → rational and equality is map equality. The product is

    g(n)·h(m) = Σ_s C(n, s)·(g ₛ h)(n+m−s)

with the generalized binomial for negative n.
"""

from __future__ import annotations

import logging
import random
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction

from novconf.errors import UsageError
from novconf.tools.confalg import (
    ConfElement,
    ConfPresentation,
    DerivationTable,
    from_qq,
    locality,
    op_symbols,
    table_locality,
    table_n_product,
)
from novconf.tools.distribution import n_product_series
from novconf.tools.exactnum import binomial, falling, gen_binomial

logger = logging.getLogger(__name__)

CoeffKey = tuple[str, int]


class CoeffElement:
    """Finite combination of symbols g(n)."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[CoeffKey, Fraction | int] | None = None) -> None:
        self._terms: dict[CoeffKey, Fraction] = {
            k: Fraction(c) for k, c in (terms or {}).items() if c
        }

    @classmethod
    def symbol(cls, gen: str, n: int, c: Fraction | int = 1) -> CoeffElement:
        return cls({(gen, n): c})

    def __iter__(self) -> Iterator[tuple[CoeffKey, Fraction]]:
        return iter(sorted(self._terms.items()))

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def coeff(self, gen: str, n: int) -> Fraction:
        return self._terms.get((gen, n), Fraction(0))

    def __add__(self, other: CoeffElement) -> CoeffElement:
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return CoeffElement(out)

    def __neg__(self) -> CoeffElement:
        return CoeffElement({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: CoeffElement) -> CoeffElement:
        return self + (-other)

    def __mul__(self, scalar: Fraction | int) -> CoeffElement:
        return CoeffElement({k: c * scalar for k, c in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoeffElement):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def render(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (g, n), c in sorted(self._terms.items()):
            sym = f"{g}({n})"
            if c == 1:
                parts.append(sym)
            elif c == -1:
                parts.append(f"-{sym}")
            else:
                parts.append(f"{c}*{sym}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"CoeffElement({self.render()!r})"


def inject(a: ConfPresentation, u: ConfElement, n: int) -> CoeffElement:
    """u(n) with (∂^j g)(n) = (−1)^j·falling(n, j)·g(n−j).

    Raises:
        UsageError: If a coefficient of ``u`` involves anything besides ∂.
    """
    a.require(u.generators())
    out: dict[CoeffKey, Fraction] = {}
    for g, poly in u:
        extra = op_symbols(poly) - {"del"}
        if extra:
            msg = f"cannot inject {u.render()}: coefficient uses {sorted(extra)}"
            raise UsageError(msg)
        for monom, c in poly.terms():
            j = monom[0]
            key = (g, n - j)
            value = from_qq(c) * (-1) ** j * falling(n, j)
            out[key] = out.get(key, Fraction(0)) + value
    return CoeffElement(out)


def product(a: ConfPresentation, x: CoeffElement, y: CoeffElement) -> CoeffElement:
    """Bilinear extension of g(n)·h(m) = Σ_s C(n,s)·(g ₛ h)(n+m−s)."""
    total = CoeffElement()
    for (g, n), cx in x:
        for (h, m), cy in y:
            bound = table_locality(a, g, h)
            for s in range(bound):
                weight = gen_binomial(n, s)
                if not weight:
                    continue
                nprod = table_n_product(a, g, h, s)
                if nprod.is_zero:
                    continue
                total = total + inject(a, nprod, n + m - s) * (cx * cy * weight)
    return total


# ── Locality relations ──


@dataclass(frozen=True)
class LocalityWitness:
    n: int
    m: int
    value: CoeffElement


@dataclass(frozen=True)
class LocalityReport:
    g: str
    h: str
    exponent: int
    checked: int
    witnesses: tuple[LocalityWitness, ...]

    @property
    def holds(self) -> bool:
        return not self.witnesses


def locality_relation(
    a: ConfPresentation, g: str, h: str, exponent: int, n: int, m: int
) -> CoeffElement:
    """Σ_s (−1)^s C(N, s)·g(n−s)·h(m+s) in 𝒜(C)."""
    total = CoeffElement()
    for s in range(exponent + 1):
        left = CoeffElement.symbol(g, n - s)
        right = CoeffElement.symbol(h, m + s)
        total = total + product(a, left, right) * ((-1) ** s * binomial(exponent, s))
    return total


def check_locality_relations(
    a: ConfPresentation,
    g: str,
    h: str,
    exponent: int,
    window: range,
) -> LocalityReport:
    """Evaluate every locality relation with n, m in the window; report the nonzero ones."""
    a.require([g, h])
    witnesses = []
    checked = 0
    for n in window:
        for m in window:
            checked += 1
            value = locality_relation(a, g, h, exponent, n, m)
            if not value.is_zero:
                witnesses.append(LocalityWitness(n, m, value))
    if witnesses:
        logger.info(
            "locality relation %s,%s at N=%d fails at %d of %d index pairs",
            g, h, exponent, len(witnesses), checked,
        )
    return LocalityReport(g, h, exponent, checked, tuple(witnesses))


# ── Ordinary identities on sampled coefficients ──


class CoeffIdentity(StrEnum):
    NOVIKOV = "novikov"
    COMMUTATIVE = "commutative"
    ASSOCIATIVE = "associative"
    LIE = "lie"


@dataclass(frozen=True)
class CoeffResidual:
    identity: str
    arguments: tuple[CoeffElement, ...]
    residual: CoeffElement


@dataclass(frozen=True)
class CoeffIdentityReport:
    identity: CoeffIdentity
    samples: int
    failures: tuple[CoeffResidual, ...]

    @property
    def holds(self) -> bool:
        return not self.failures


def sample_coefficients(
    a: ConfPresentation,
    rng: random.Random,
    count: int,
    window: tuple[int, int] = (-2, 2),
    max_terms: int = 2,
) -> list[CoeffElement]:
    lo, hi = window
    out = []
    for _ in range(count):
        elem = CoeffElement()
        for _ in range(rng.randint(1, max_terms)):
            g = rng.choice(a.generators)
            elem = elem + CoeffElement.symbol(g, rng.randint(lo, hi), rng.choice([-2, -1, 1, 2, 3]))
        out.append(elem)
    return out


def _identity_residuals(
    a: ConfPresentation, which: CoeffIdentity, x: CoeffElement, y: CoeffElement, z: CoeffElement
) -> dict[str, CoeffElement]:
    def p(u: CoeffElement, v: CoeffElement) -> CoeffElement:
        return product(a, u, v)

    match which:
        case CoeffIdentity.NOVIKOV:
            rsym = (p(p(x, y), z) - p(x, p(y, z))) - (p(p(x, z), y) - p(x, p(z, y)))
            lcom = p(x, p(y, z)) - p(y, p(x, z))
            return {"rsym": rsym, "lcom": lcom}
        case CoeffIdentity.COMMUTATIVE:
            return {"commutative": p(x, y) - p(y, x)}
        case CoeffIdentity.ASSOCIATIVE:
            return {"associative": p(p(x, y), z) - p(x, p(y, z))}
        case _:
            jacobi = p(x, p(y, z)) + p(y, p(z, x)) + p(z, p(x, y))
            return {"anticommutative": p(x, y) + p(y, x), "jacobi": jacobi}


def check_coeff_identities(
    a: ConfPresentation,
    which: CoeffIdentity | str,
    samples: Sequence[tuple[CoeffElement, CoeffElement, CoeffElement]],
) -> CoeffIdentityReport:
    """Evaluate an ordinary identity on sampled coefficient triples."""
    which = CoeffIdentity(which)
    failures = []
    for x, y, z in samples:
        for name, value in _identity_residuals(a, which, x, y, z).items():
            if not value.is_zero:
                failures.append(CoeffResidual(name, (x, y, z), value))
    return CoeffIdentityReport(which, len(samples), tuple(failures))


# ── Residue formula, induced derivation, product locality ──


def residue_formula_rhs(a: ConfPresentation, g: str, h: str, n: int, m: int) -> CoeffElement:
    """Σ_j (−1)^j C(n,j)·g(n−j)·h(m+j), read off Res_w g(w)h(z)(w−z)^n."""
    dist = n_product_series(g, h, n)
    total = CoeffElement()
    for term in dist.terms:
        (left,) = term.fixed
        right_index = m + term.exponent("z")
        pair = product(a, CoeffElement.symbol(g, left.n), CoeffElement.symbol(h, right_index))
        total = total + pair * term.coeff
    return total


def check_residue_formula(a: ConfPresentation, g: str, h: str, n: int, m: int) -> CoeffElement:
    """(g ₙ h)(m) minus its residue expansion; zero when the formula holds."""
    if n < 0:
        msg = f"residue formula needs n >= 0, got {n}"
        raise UsageError(msg)
    a.require([g, h])
    lhs = inject(a, table_n_product(a, g, h, n), m)
    return lhs - residue_formula_rhs(a, g, h, n, m)


def induced_derivation(a: ConfPresentation, d: DerivationTable, x: CoeffElement) -> CoeffElement:
    """The map g(n) ↦ (Dg)(n) on 𝒜(C)."""
    total = CoeffElement()
    for (g, n), c in x:
        total = total + inject(a, d.apply(ConfElement.gen(g)), n) * c
    return total


def product_locality(a: ConfPresentation, g: str, h: str, k: str) -> dict[int, int]:
    """Locality of (g ₙ h) with k for every n below locality(g, h)."""
    a.require([g, h, k])
    out = {}
    for n in range(locality(a, ConfElement.gen(g), ConfElement.gen(h))):
        out[n] = locality(a, table_n_product(a, g, h, n), ConfElement.gen(k))
    return out
