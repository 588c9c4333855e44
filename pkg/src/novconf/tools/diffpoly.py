"""Differential polynomials in the symbols a^(p)(n) with derivation d.

The ring is commutative; ``d`` acts on letters by raising the derivative
order, ``d(a^(p)(n)) = a^(p+1)(n)``, and extends by Leibniz. The weight of a
letter a^(p)(n) is p - 1, additive on monomials. The Novikov product is
``f ∘ g = d(f)·g``; restricted to weight -1 it is the free Novikov algebra.

Index-free letters (as in the free Novikov algebra on an alphabet) pin n = 0.
"""

from __future__ import annotations

import random
from collections import Counter
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction
from typing import NamedTuple

from novconf.errors import UsageError

INDEX_RANGE = 10**6


class DiffVar(NamedTuple):
    """The letter gen^(p)(n); tuple order is the canonical letter order."""

    gen: str
    p: int
    n: int

    def render(self) -> str:
        return f"{self.gen}^({self.p})({self.n})"

    @property
    def weight(self) -> int:
        return self.p - 1


Monomial = tuple[DiffVar, ...]
UNIT: Monomial = ()


class Weight(StrEnum):
    """Marker returned as the weight of the zero polynomial."""

    ANY = "any"


def make_monomial(factors: Iterable[DiffVar]) -> Monomial:
    mono = tuple(sorted(factors))
    for v in mono:
        if v.p < 0:
            msg = f"derivative order must be >= 0, got {v.render()}"
            raise UsageError(msg)
    return mono


def monomial_weight(mono: Monomial) -> int:
    return sum(v.p - 1 for v in mono)


def monomial_letters(mono: Monomial) -> tuple[str, ...]:
    return tuple(sorted(v.gen for v in mono))


def monomial_index_sum(mono: Monomial) -> int:
    return sum(v.n for v in mono)


def render_monomial(mono: Monomial) -> str:
    parts = []
    for v, count in sorted(Counter(mono).items()):
        parts.append(v.render() if count == 1 else f"{v.render()}^{count}")
    return "*".join(parts)


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class DiffPoly:
    """Immutable polynomial: a map from canonical monomials to nonzero rationals."""

    __slots__ = ("_hash", "_terms")

    def __init__(self, terms: Mapping[Monomial, Fraction | int] | None = None) -> None:
        clean: dict[Monomial, Fraction] = {}
        for mono, c in (terms or {}).items():
            if c:
                clean[mono] = Fraction(c)
        self._terms = clean
        self._hash: int | None = None

    # ── Constructors ──

    @classmethod
    def zero(cls) -> DiffPoly:
        return cls()

    @classmethod
    def const(cls, c: Fraction | int) -> DiffPoly:
        return cls({UNIT: Fraction(c)})

    @classmethod
    def monomial(cls, mono: Iterable[DiffVar], c: Fraction | int = 1) -> DiffPoly:
        return cls({make_monomial(mono): Fraction(c)})

    # ── Ring structure ──

    def __add__(self, other: DiffPoly | Fraction | int) -> DiffPoly:
        other = _coerce(other)
        out = dict(self._terms)
        for mono, c in other._terms.items():
            out[mono] = out.get(mono, Fraction(0)) + c
        return DiffPoly(out)

    __radd__ = __add__

    def __neg__(self) -> DiffPoly:
        return DiffPoly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: DiffPoly | Fraction | int) -> DiffPoly:
        return self + (-_coerce(other))

    def __rsub__(self, other: Fraction | int) -> DiffPoly:
        return _coerce(other) - self

    def __mul__(self, other: DiffPoly | Fraction | int) -> DiffPoly:
        if not isinstance(other, DiffPoly):
            c = Fraction(other)
            return DiffPoly({m: v * c for m, v in self._terms.items()})
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = tuple(sorted(m1 + m2))
                out[mono] = out.get(mono, Fraction(0)) + c1 * c2
        return DiffPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> DiffPoly:
        result = DiffPoly.const(1)
        for _ in range(k):
            result = result * self
        return result

    # ── Inspection ──

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int | Fraction):
            other = DiffPoly.const(other)
        if not isinstance(other, DiffPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self._terms.items())

    def coeff(self, mono: Iterable[DiffVar]) -> Fraction:
        return self._terms.get(make_monomial(mono), Fraction(0))

    def monomials(self) -> list[Monomial]:
        return sorted(self._terms, key=lambda m: (len(m), m))

    def variables(self) -> set[DiffVar]:
        return {v for mono in self._terms for v in mono}

    @property
    def degree(self) -> int:
        """Largest monomial degree; -1 for the zero polynomial."""
        return max((len(m) for m in self._terms), default=-1)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def render(self) -> str:
        if not self._terms:
            return "0"
        out = ""
        for i, mono in enumerate(self.monomials()):
            c = self._terms[mono]
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if not mono:
                body = _format_coeff(mag)
            elif mag == 1:
                body = render_monomial(mono)
            else:
                body = f"{_format_coeff(mag)}*{render_monomial(mono)}"
            if i == 0:
                out = f"-{body}" if sign == "-" else body
            else:
                out += f" {sign} {body}"
        return out

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"DiffPoly({self.render()!r})"


def _coerce(value: DiffPoly | Fraction | int) -> DiffPoly:
    if isinstance(value, DiffPoly):
        return value
    return DiffPoly.const(value)


def var(gen: str, p: int = 0, n: int = 0) -> DiffPoly:
    """The letter gen^(p)(n) as a polynomial."""
    if abs(n) > INDEX_RANGE:
        msg = f"index {n} outside the supported range |n| <= {INDEX_RANGE}"
        raise UsageError(msg)
    return DiffPoly.monomial([DiffVar(gen, p, n)])


def const(c: Fraction | int) -> DiffPoly:
    return DiffPoly.const(c)


def add(f: DiffPoly, g: DiffPoly) -> DiffPoly:
    return f + g


def mul(f: DiffPoly, g: DiffPoly) -> DiffPoly:
    return f * g


# ── Derivation, weight, Novikov product ──


def derive(f: DiffPoly) -> DiffPoly:
    """Apply d once, Leibniz over each monomial."""
    out: dict[Monomial, Fraction] = {}
    for mono, c in f:
        for i, v in enumerate(mono):
            raised = DiffVar(v.gen, v.p + 1, v.n)
            new = tuple(sorted((*mono[:i], raised, *mono[i + 1 :])))
            out[new] = out.get(new, Fraction(0)) + c
    return DiffPoly(out)


def derive_n(f: DiffPoly, s: int) -> DiffPoly:
    for _ in range(s):
        f = derive(f)
    return f


def weight(f: DiffPoly) -> int | None | Weight:
    """Common weight of all monomials; None if they disagree, ANY for zero."""
    weights = {monomial_weight(m) for m, _ in f}
    if not weights:
        return Weight.ANY
    if len(weights) > 1:
        return None
    return weights.pop()


def novikov_product(f: DiffPoly, g: DiffPoly) -> DiffPoly:
    """f ∘ g = d(f)·g."""
    return derive(f) * g


@dataclass(frozen=True)
class NovikovAxiomReport:
    """Left-minus-right of right-symmetry and left-commutativity on one triple."""

    rsym: DiffPoly
    lcom: DiffPoly

    @property
    def holds(self) -> bool:
        return self.rsym.is_zero and self.lcom.is_zero

    def residuals(self) -> dict[str, DiffPoly]:
        return {"rsym_novikov": self.rsym, "lcom_novikov": self.lcom}


def check_novikov_axioms(f: DiffPoly, g: DiffPoly, h: DiffPoly) -> NovikovAxiomReport:
    o = novikov_product
    rsym = (o(o(f, g), h) - o(f, o(g, h))) - (o(o(f, h), g) - o(f, o(h, g)))
    lcom = o(f, o(g, h)) - o(g, o(f, h))
    return NovikovAxiomReport(rsym=rsym, lcom=lcom)


# ── Sampling ──


def _composition(rng: random.Random, total: int, parts: int) -> list[int]:
    """Random split of ``total`` into ``parts`` nonnegative integers."""
    cuts = sorted(rng.randint(0, total) for _ in range(parts - 1))
    bounds = [0, *cuts, total]
    return [bounds[i + 1] - bounds[i] for i in range(parts)]


def sample_homogeneous(
    rng: random.Random,
    gens: Sequence[str],
    target_weight: int,
    max_degree: int,
    index_range: tuple[int, int] = (0, 0),
    n_terms: int = 3,
) -> DiffPoly:
    """Random polynomial whose monomials all have ``target_weight``.

    Monomials of degree k need derivative orders summing to target_weight + k,
    so degrees below -target_weight are skipped.
    """
    lo, hi = index_range
    degrees = [k for k in range(1, max_degree + 1) if target_weight + k >= 0]
    if not degrees:
        msg = f"no monomial of degree <= {max_degree} has weight {target_weight}"
        raise UsageError(msg)
    f = DiffPoly.zero()
    for _ in range(n_terms):
        k = rng.choice(degrees)
        orders = _composition(rng, target_weight + k, k)
        mono = [DiffVar(rng.choice(gens), p, rng.randint(lo, hi)) for p in orders]
        c = Fraction(rng.randint(-5, 5) or 1, rng.randint(1, 3))
        f = f + DiffPoly.monomial(mono, c)
    return f
