"""Formal distributions as finite term sums.

A term is ``coeff · fixed · Π a^(p)(v) · Π v^e``: a rational, a product of
variable-free letters (what residues leave behind), at most one generator
series per formal variable, and a Laurent monomial. The series a^(p)(v)
stands for Σ_s a^(p)(s) v^(-s-1); nothing is ever expanded into an infinite
sum, coefficient extraction reads indices off directly.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction

from novconf.errors import UsageError
from novconf.tools.diffpoly import DiffPoly, DiffVar, Monomial, make_monomial, render_monomial
from novconf.tools.exactnum import binomial

FVar = str

ExpKey = tuple[tuple[FVar, int], ...]


def _exp_key(exps: Mapping[FVar, int]) -> ExpKey:
    return tuple(sorted((v, e) for v, e in exps.items() if e != 0))


def _merge_exps(a: ExpKey, b: ExpKey) -> ExpKey:
    out = dict(a)
    for v, e in b:
        out[v] = out.get(v, 0) + e
    return _exp_key(out)


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class Laurent:
    """Laurent polynomial: map from exponent vectors to rationals."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[ExpKey, Fraction | int] | None = None) -> None:
        merged: dict[ExpKey, Fraction] = {}
        for key, c in (terms or {}).items():
            k = _exp_key(dict(key))
            merged[k] = merged.get(k, Fraction(0)) + Fraction(c)
        self._terms = {k: c for k, c in merged.items() if c}

    @classmethod
    def const(cls, c: Fraction | int) -> Laurent:
        return cls({(): c})

    @classmethod
    def monomial(cls, exps: Mapping[FVar, int], c: Fraction | int = 1) -> Laurent:
        return cls({_exp_key(exps): c})

    @classmethod
    def of(cls, v: FVar) -> Laurent:
        return cls.monomial({v: 1})

    def __iter__(self) -> Iterator[tuple[ExpKey, Fraction]]:
        return iter(self._terms.items())

    def __add__(self, other: Laurent) -> Laurent:
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return Laurent(out)

    def __neg__(self) -> Laurent:
        return Laurent({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: Laurent) -> Laurent:
        return self + (-other)

    def __mul__(self, other: Laurent | Fraction | int) -> Laurent:
        if isinstance(other, int | Fraction):
            return Laurent({k: c * other for k, c in self._terms.items()})
        if not isinstance(other, Laurent):
            return NotImplemented
        out: dict[ExpKey, Fraction] = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                k = _merge_exps(k1, k2)
                out[k] = out.get(k, Fraction(0)) + c1 * c2
        return Laurent(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Laurent:
        result = Laurent.const(1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Laurent):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def coeff(self, exps: Mapping[FVar, int]) -> Fraction:
        return self._terms.get(_exp_key(exps), Fraction(0))

    def render(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for key in sorted(self._terms, reverse=True):
            c = self._terms[key]
            body = "*".join(v if e == 1 else f"{v}^{e}" for v, e in key)
            if not body:
                parts.append(_format_coeff(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{_format_coeff(c)}*{body}")
        return " + ".join(parts).replace("+ -", "- ")


def binom_power(va: FVar, vb: FVar, n: int) -> Laurent:
    """(va − vb)^n = Σ_s (−1)^s C(n,s) va^(n−s) vb^s."""
    if n < 0:
        msg = f"binom_power requires n >= 0, got {n}"
        raise UsageError(msg)
    terms: dict[ExpKey, Fraction | int] = {}
    for s in range(n + 1):
        terms[_exp_key({va: n - s, vb: s})] = (-1) ** s * binomial(n, s)
    return Laurent(terms)


def binom_split(vw: FVar, vz: FVar, vzeta: FVar, a: int, b: int) -> tuple[Laurent, Laurent]:
    """P, Q with (w−z)^(a+b) = (w−ζ)^a·P + (ζ−z)^b·Q.

    Expand ((w−ζ) + (ζ−z))^(a+b); P collects the terms whose (w−ζ)-power is
    at least a, Q the rest.
    """
    if a < 0 or b < 0:
        msg = f"binom_split requires a, b >= 0, got a={a}, b={b}"
        raise UsageError(msg)
    left = binom_power(vw, vzeta, 1)
    right = binom_power(vzeta, vz, 1)
    total = a + b
    p = Laurent()
    q = Laurent()
    for j in range(total + 1):
        c = binomial(total, j)
        if j >= a:
            p = p + (left ** (j - a)) * (right ** (total - j)) * c
        else:
            q = q + (left**j) * (right ** (a - j)) * c
    return p, q


# ── Distributions ──────────────────────────────────────────────


SeriesKey = tuple[tuple[FVar, str, int], ...]


@dataclass(frozen=True)
class DistTerm:
    coeff: Fraction
    fixed: Monomial
    series: SeriesKey
    exps: ExpKey

    def exponent(self, v: FVar) -> int:
        return dict(self.exps).get(v, 0)

    def series_in(self, v: FVar) -> tuple[str, int] | None:
        for var_name, gen, p in self.series:
            if var_name == v:
                return gen, p
        return None

    def variables(self) -> set[FVar]:
        return {v for v, _, _ in self.series} | {v for v, _ in self.exps}


ShapeKey = tuple[Monomial, SeriesKey, ExpKey]


def _series_key(items: Iterable[tuple[FVar, str, int]]) -> SeriesKey:
    key = tuple(sorted(items))
    seen = [v for v, _, _ in key]
    if len(seen) != len(set(seen)):
        msg = f"two series in one formal variable: {key}"
        raise UsageError(msg)
    return key


class Distribution:
    """Finite sum of DistTerms with equal shapes merged."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[ShapeKey, Fraction | int] | None = None) -> None:
        self._terms: dict[ShapeKey, Fraction] = {
            k: Fraction(c) for k, c in (terms or {}).items() if c
        }

    @classmethod
    def from_terms(cls, terms: Iterable[DistTerm]) -> Distribution:
        out: dict[ShapeKey, Fraction] = {}
        for t in terms:
            key = (t.fixed, t.series, t.exps)
            out[key] = out.get(key, Fraction(0)) + t.coeff
        return cls(out)

    @property
    def terms(self) -> list[DistTerm]:
        return [
            DistTerm(coeff=c, fixed=k[0], series=k[1], exps=k[2])
            for k, c in sorted(self._terms.items())
        ]

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def variables(self) -> set[FVar]:
        out: set[FVar] = set()
        for t in self.terms:
            out |= t.variables()
        return out

    def __len__(self) -> int:
        return len(self._terms)

    def __add__(self, other: Distribution) -> Distribution:
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return Distribution(out)

    def __neg__(self) -> Distribution:
        return Distribution({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: Distribution) -> Distribution:
        return self + (-other)

    def __mul__(self, other: Distribution | Laurent | Fraction | int) -> Distribution:
        if isinstance(other, Laurent):
            return mul_laurent(self, other)
        if isinstance(other, Distribution):
            return mul(self, other)
        return Distribution({k: c * other for k, c in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Distribution):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def render(self) -> str:
        if not self._terms:
            return "0"
        parts = [_render_term(t) for t in self.terms]
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"Distribution({self.render()!r})"


def _render_series(gen: str, p: int, v: FVar) -> str:
    if p <= 3:
        return f"{gen}{chr(39) * p}({v})"
    return f"{gen}^({p})({v})"


def _render_term(t: DistTerm) -> str:
    factors = []
    if t.fixed:
        factors.append(render_monomial(t.fixed))
    factors.extend(_render_series(g, p, v) for v, g, p in t.series)
    factors.extend(v if e == 1 else f"{v}^{e}" for v, e in t.exps)
    body = "*".join(factors)
    if not body:
        return _format_coeff(t.coeff)
    if t.coeff == 1:
        return body
    if t.coeff == -1:
        return f"-{body}"
    return f"{_format_coeff(t.coeff)}*{body}"


def series(gen: str, p: int, v: FVar) -> Distribution:
    """The single-term distribution gen^(p)(v)."""
    if p < 0:
        msg = f"derivative order must be >= 0, got {p}"
        raise UsageError(msg)
    return Distribution({((), ((v, gen, p),), ()): 1})


def constant(c: Fraction | int = 1) -> Distribution:
    return Distribution({((), (), ()): c})


def mul_laurent(d: Distribution, lp: Laurent) -> Distribution:
    """Distribute a Laurent polynomial over the terms of ``d``."""
    out: dict[ShapeKey, Fraction] = {}
    for t in d.terms:
        for exps, c in lp:
            key = (t.fixed, t.series, _merge_exps(t.exps, exps))
            out[key] = out.get(key, Fraction(0)) + t.coeff * c
    return Distribution(out)


def mul(d1: Distribution, d2: Distribution) -> Distribution:
    """Product in the term algebra; series must live in distinct variables."""
    out: dict[ShapeKey, Fraction] = {}
    for t1 in d1.terms:
        for t2 in d2.terms:
            key = (
                make_monomial(t1.fixed + t2.fixed),
                _series_key(t1.series + t2.series),
                _merge_exps(t1.exps, t2.exps),
            )
            out[key] = out.get(key, Fraction(0)) + t1.coeff * t2.coeff
    return Distribution(out)


def derive(d: Distribution) -> Distribution:
    """Coefficient-wise d: Leibniz over series factors and fixed letters."""
    out: dict[ShapeKey, Fraction] = {}

    def _bump(key: ShapeKey, c: Fraction) -> None:
        out[key] = out.get(key, Fraction(0)) + c

    for t in d.terms:
        for i, (v, g, p) in enumerate(t.series):
            raised = (*t.series[:i], (v, g, p + 1), *t.series[i + 1 :])
            _bump((t.fixed, raised, t.exps), t.coeff)
        for i, letter in enumerate(t.fixed):
            fixed = make_monomial(
                (*t.fixed[:i], DiffVar(letter.gen, letter.p + 1, letter.n), *t.fixed[i + 1 :])
            )
            _bump((fixed, t.series, t.exps), t.coeff)
    return Distribution(out)


def coefficient(d: Distribution, idx: Mapping[FVar, int]) -> DiffPoly:
    """Coefficient of Π v^(−idx[v]−1) as a differential polynomial.

    A series a^(p)(v) times v^e contributes a^(p)(idx[v] + e); a variable
    without series survives only when its exponent is −idx[v] − 1.

    Raises:
        UsageError: If a variable of ``d`` is missing from ``idx``.
    """
    missing = d.variables() - set(idx)
    if missing:
        msg = f"coefficient index misses variables {sorted(missing)}"
        raise UsageError(msg)
    total: dict[Monomial, Fraction] = {}
    for t in d.terms:
        exps = dict(t.exps)
        letters = list(t.fixed)
        keep = True
        for v, n in idx.items():
            e = exps.get(v, 0)
            s = t.series_in(v)
            if s is None:
                if e != -n - 1:
                    keep = False
                    break
            else:
                letters.append(DiffVar(s[0], s[1], n + e))
        if keep:
            mono = make_monomial(letters)
            total[mono] = total.get(mono, Fraction(0)) + t.coeff
    return DiffPoly(total)


def residue(d: Distribution, v: FVar) -> Distribution:
    """Coefficient of v^(−1), leaving a distribution in the other variables."""
    out: dict[ShapeKey, Fraction] = {}
    for t in d.terms:
        e = t.exponent(v)
        s = t.series_in(v)
        exps = tuple((name, k) for name, k in t.exps if name != v)
        if s is None:
            if e != -1:
                continue
            key = (t.fixed, t.series, exps)
        else:
            fixed = make_monomial((*t.fixed, DiffVar(s[0], s[1], e)))
            rest = tuple(item for item in t.series if item[0] != v)
            key = (fixed, rest, exps)
        out[key] = out.get(key, Fraction(0)) + t.coeff
    return Distribution(out)


def n_product_series(a: str, b: str, n: int, vw: FVar = "w", vz: FVar = "z") -> Distribution:
    """Res_w a(w)·b(z)·(w−z)^n, a distribution in ``vz`` with letter coefficients."""
    product = mul(series(a, 0, vw), series(b, 0, vz))
    return residue(mul_laurent(product, binom_power(vw, vz, n)), vw)
