"""Locality generator families and a bounded ideal-membership oracle.

The families are

    f_{a,b}(n,m; E)        = Σ_s (−1)^s C(E,s) a^(1)(n−s) b(m+s)
    f^{p,q}_{a,b}(n,m; E)  = Σ_t (−1)^t C(E,t) a^(p)(n−t) b^(q)(m+t)

and their d-derivatives. Every member is homogeneous for four gradings at
once: letter multiset, index sum, degree and weight. The oracle uses this to
keep only multipliers that land in the target's homogeneous component, which
loses nothing because an ideal generated by homogeneous elements is graded.

A missing certificate only means "not found inside this window".
"""

from __future__ import annotations

import itertools
import logging
from collections import Counter, defaultdict
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from novconf.errors import CertificateError, UsageError
from novconf.models.window import Window
from novconf.tools.diffpoly import (
    DiffPoly,
    DiffVar,
    Monomial,
    derive,
    derive_n,
    make_monomial,
    monomial_index_sum,
    monomial_letters,
    monomial_weight,
    novikov_product,
    render_monomial,
    var,
)
from novconf.tools.exactnum import LinearSystem, binomial, solve

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LocalityFn:
    """N: X×X → ℤ₊ with a uniform bound M = ``default``."""

    default: int
    overrides: Mapping[tuple[str, str], int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.default < 0:
            msg = f"locality bound must be >= 0, got {self.default}"
            raise UsageError(msg)
        for pair, value in self.overrides.items():
            if not 0 <= value <= self.default:
                msg = f"N{pair} = {value} must lie in [0, M={self.default}]"
                raise UsageError(msg)

    @property
    def bound(self) -> int:
        return self.default

    def __call__(self, a: str, b: str) -> int:
        return self.overrides.get((a, b), self.default)

    def render(self) -> str:
        parts = [f"default={self.default}"]
        parts.extend(f"N({a},{b})={v}" for (a, b), v in sorted(self.overrides.items()))
        return "; ".join(parts)


# ── Emission ───────────────────────────────────────────────────


def emit_fpq(a: str, b: str, p: int, q: int, n: int, m: int, exponent: int) -> DiffPoly:
    """Σ_t (−1)^t C(E,t) a^(p)(n−t) b^(q)(m+t)."""
    if exponent < 0 or p < 0 or q < 0:
        msg = f"emit_fpq requires p, q, E >= 0, got p={p}, q={q}, E={exponent}"
        raise UsageError(msg)
    total = DiffPoly.zero()
    for t in range(exponent + 1):
        c = (-1) ** t * binomial(exponent, t)
        total = total + DiffPoly.monomial([DiffVar(a, p, n - t), DiffVar(b, q, m + t)], c)
    return total


def emit_f(a: str, b: str, n: int, m: int, exponent: int) -> DiffPoly:
    """The locality generator f_{a,b}(n,m) at exponent E."""
    return emit_fpq(a, b, 1, 0, n, m, exponent)


def emit_J(a: str, b: str, n: int, m: int, exponent: int) -> DiffPoly:  # noqa: N802
    """Σ_s (−1)^s C(N,s) a(n−s) ∘ b(m+s), built from the Novikov product."""
    if exponent < 0:
        msg = f"emit_J requires N >= 0, got {exponent}"
        raise UsageError(msg)
    total = DiffPoly.zero()
    for s in range(exponent + 1):
        term = novikov_product(var(a, 0, n - s), var(b, 0, m + s))
        total = total + term * ((-1) ** s * binomial(exponent, s))
    return total


def barN(p: int, q: int, M: int, n_ab: int) -> int:  # noqa: N802, N803
    """Locality bound for the pair (a^(p), b^(q)): 3M, N(a,b) or (p+q)M."""
    if n_ab > M:
        msg = f"N(a,b) = {n_ab} exceeds the uniform bound M = {M}"
        raise UsageError(msg)
    if p == 0 and q == 0:
        return 3 * M
    if p == 1 and q == 0:
        return n_ab
    return (p + q) * M


@dataclass(frozen=True)
class PolyIdentity:
    name: str
    lhs: DiffPoly
    rhs: DiffPoly

    @property
    def residual(self) -> DiffPoly:
        return self.lhs - self.rhs

    @property
    def holds(self) -> bool:
        return self.residual.is_zero


def pascal_reduce(a: str, b: str, n: int, m: int, exponent: int) -> PolyIdentity:
    """f(n,m; E) = f(n,m; E−1) − f(n−1,m+1; E−1)."""
    if exponent < 1:
        msg = f"pascal_reduce requires E >= 1, got {exponent}"
        raise UsageError(msg)
    lhs = emit_f(a, b, n, m, exponent)
    rhs = emit_f(a, b, n, m, exponent - 1) - emit_f(a, b, n - 1, m + 1, exponent - 1)
    return PolyIdentity("pascal_reduce", lhs, rhs)


def pascal_expand(
    a: str, b: str, n: int, m: int, exponent: int, base: int
) -> list[tuple[int, GeneratorDescriptor]]:
    """f(n,m; E) as Σ_j (−1)^j C(E−base, j) f(n−j, m+j; base)."""
    if not 0 <= base <= exponent:
        msg = f"pascal_expand needs 0 <= base <= E, got base={base}, E={exponent}"
        raise UsageError(msg)
    gap = exponent - base
    return [
        ((-1) ** j * binomial(gap, j), GeneratorDescriptor.f(a, b, n - j, m + j, base))
        for j in range(gap + 1)
    ]


def leibniz_fpq(a: str, b: str, p: int, q: int, n: int, m: int, exponent: int) -> PolyIdentity:
    """d f^{p,q} = f^{p+1,q} + f^{p,q+1}, all three at the same exponent."""
    lhs = derive(emit_fpq(a, b, p, q, n, m, exponent))
    rhs = emit_fpq(a, b, p + 1, q, n, m, exponent) + emit_fpq(a, b, p, q + 1, n, m, exponent)
    return PolyIdentity("leibniz_fpq", lhs, rhs)


# ── Generators and gradings ────────────────────────────────────


@dataclass(frozen=True, order=True)
class GeneratorDescriptor:
    """d^deriv f^{p,q}_{a,b}(n,m; exponent); family "f" pins (p,q) = (1,0)."""

    family: str
    a: str
    b: str
    p: int
    q: int
    n: int
    m: int
    deriv: int
    exponent: int

    @classmethod
    def f(cls, a: str, b: str, n: int, m: int, exponent: int, deriv: int = 0) -> GeneratorDescriptor:
        return cls("f", a, b, 1, 0, n, m, deriv, exponent)

    @classmethod
    def fpq(
        cls, a: str, b: str, p: int, q: int, n: int, m: int, exponent: int, deriv: int = 0
    ) -> GeneratorDescriptor:
        return cls("fpq", a, b, p, q, n, m, deriv, exponent)

    def expand(self) -> DiffPoly:
        return derive_n(emit_fpq(self.a, self.b, self.p, self.q, self.n, self.m, self.exponent), self.deriv)

    def render(self) -> str:
        return (
            f"d^{self.deriv} f^{{{self.p},{self.q}}}_{{{self.a},{self.b}}}"
            f"({self.n},{self.m}; {self.exponent})"
        )


@dataclass(frozen=True, order=True)
class Grading:
    letters: tuple[str, ...]
    weight: int
    index_sum: int
    degree: int


def grading_of(mono: Monomial) -> Grading:
    return Grading(monomial_letters(mono), monomial_weight(mono), monomial_index_sum(mono), len(mono))


def homogeneous_grading(f: DiffPoly) -> Grading | None:
    gradings = {grading_of(mono) for mono, _ in f}
    return gradings.pop() if len(gradings) == 1 else None


@dataclass(frozen=True)
class Generator:
    descriptor: GeneratorDescriptor
    poly: DiffPoly

    @classmethod
    def emit(cls, descriptor: GeneratorDescriptor) -> Generator:
        return cls(descriptor, descriptor.expand())


def _require_alphabet(alphabet: Sequence[str]) -> None:
    if not alphabet:
        msg = "generator emission needs a nonempty alphabet"
        raise UsageError(msg)


def generators_I(alphabet: Sequence[str], loc: LocalityFn, w: Window) -> list[Generator]:  # noqa: N802
    """d^s f_{a,b}(n,m; N(a,b)) over the window, s <= s_max."""
    _require_alphabet(alphabet)
    out = []
    for a, b in itertools.product(alphabet, repeat=2):
        for n, m in itertools.product(w.indices, repeat=2):
            for s in range(w.s_max + 1):
                out.append(Generator.emit(GeneratorDescriptor.f(a, b, n, m, loc(a, b), s)))
    logger.debug("emitted %d generators of I over %s", len(out), w.label())
    return out


def generators_K(  # noqa: N802
    alphabet: Sequence[str], loc: LocalityFn, M: int, w: Window  # noqa: N803
) -> list[Generator]:
    """d^s f^{p,q}_{a,b}(n,m; barN) over the window, p, q <= max_p."""
    _require_alphabet(alphabet)
    out = []
    for a, b in itertools.product(alphabet, repeat=2):
        for p, q in itertools.product(range(w.max_p + 1), repeat=2):
            exponent = barN(p, q, M, loc(a, b))
            for n, m in itertools.product(w.indices, repeat=2):
                for s in range(w.s_max + 1):
                    descriptor = GeneratorDescriptor.fpq(a, b, p, q, n, m, exponent, s)
                    out.append(Generator.emit(descriptor))
    logger.debug("emitted %d generators of K over %s", len(out), w.label())
    return out


# ── Certificates ───────────────────────────────────────────────


@dataclass(frozen=True)
class CertificateEntry:
    multiplier: Monomial
    generator: GeneratorDescriptor
    coeff: Fraction

    def render(self) -> str:
        u = render_monomial(self.multiplier) or "1"
        return f"{u} * {self.generator.render()} * {self.coeff}"


@dataclass(frozen=True)
class MembershipCertificate:
    entries: tuple[CertificateEntry, ...]
    window: Window | None = None

    def expand(self) -> DiffPoly:
        total = DiffPoly.zero()
        for e in self.entries:
            total = total + DiffPoly.monomial(e.multiplier, e.coeff) * e.generator.expand()
        return total

    def render_lines(self) -> list[str]:
        return [e.render() for e in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


def verify_certificate(h: DiffPoly, cert: MembershipCertificate, gens: Iterable[Generator]) -> bool:
    """Re-expand the certificate from its descriptors and compare with h.

    Raises:
        CertificateError: If an entry names a generator outside ``gens``.
    """
    known = {g.descriptor for g in gens}
    for entry in cert.entries:
        if entry.generator not in known:
            msg = f"certificate references unknown generator {entry.generator.render()}"
            raise CertificateError(msg)
    return cert.expand() == h


def _multipliers(
    letters: tuple[str, ...], weight: int, index_sum: int, w: Window
) -> list[Monomial]:
    """Monomials with the given letters, weight and index sum, indices in the window."""
    k = len(letters)
    order_total = weight + k
    if order_total < 0:
        return []
    if k == 0:
        return [()] if index_sum == 0 else []
    found: set[Monomial] = set()

    def _fill(pos: int, orders_left: int, index_left: int, acc: list[DiffVar]) -> None:
        if pos == k - 1:
            if w.contains_index(index_left):
                found.add(make_monomial([*acc, DiffVar(letters[pos], orders_left, index_left)]))
            return
        for p in range(orders_left + 1):
            for n in w.indices:
                _fill(pos + 1, orders_left - p, index_left - n, [*acc, DiffVar(letters[pos], p, n)])

    _fill(0, order_total, index_sum, [])
    return sorted(found)


def _complement(target: Grading, gen: Grading) -> Grading | None:
    rest = Counter(target.letters)
    rest.subtract(gen.letters)
    if any(v < 0 for v in rest.values()):
        return None
    degree = target.degree - gen.degree
    if degree < 0:
        return None
    return Grading(
        tuple(sorted(rest.elements())),
        target.weight - gen.weight,
        target.index_sum - gen.index_sum,
        degree,
    )


def _solve_component(
    component: DiffPoly,
    grading: Grading,
    by_grading: Mapping[Grading, list[Generator]],
    w: Window,
    cache: dict[Grading, list[Monomial]],
) -> list[CertificateEntry] | None:
    columns: list[tuple[Monomial, Generator]] = []
    for g_grading in sorted(by_grading):
        need = _complement(grading, g_grading)
        if need is None or need.degree > w.max_multiplier_degree:
            continue
        if need not in cache:
            cache[need] = _multipliers(need.letters, need.weight, need.index_sum, w)
        for gen in by_grading[g_grading]:
            columns.extend((u, gen) for u in cache[need])

    row_of: dict[Monomial, int] = {}
    entries: list[dict[int, Fraction]] = []
    images = []
    for u, gen in columns:
        image = DiffPoly.monomial(u) * gen.poly
        images.append(image)
        for mono, _ in image:
            if mono not in row_of:
                row_of[mono] = len(row_of)
                entries.append({})
    for mono, _ in component:
        if mono not in row_of:
            return None
    for col, image in enumerate(images):
        for mono, c in image:
            entries[row_of[mono]][col] = c
    rhs = [Fraction(0)] * len(row_of)
    for mono, c in component:
        rhs[row_of[mono]] = c

    logger.info(
        "membership system for %s: %d rows x %d columns",
        grading.letters, len(row_of), len(columns),
    )
    solution = solve(LinearSystem(rows=entries, rhs=rhs, n_cols=len(columns)))
    if solution is None:
        return None
    return [
        CertificateEntry(u, gen.descriptor, c)
        for (u, gen), c in zip(columns, solution, strict=True)
        if c
    ]


def membership(h: DiffPoly, gens: Sequence[Generator], w: Window) -> MembershipCertificate | None:
    """Search h = Σ c·u·g with monomial multipliers u inside the window.

    Each homogeneous component of h is solved as its own exact linear system.
    """
    by_grading: dict[Grading, list[Generator]] = defaultdict(list)
    for gen in gens:
        grading = homogeneous_grading(gen.poly)
        if grading is None:
            logger.debug("skipping inhomogeneous generator %s", gen.descriptor.render())
            continue
        by_grading[grading].append(gen)

    components: dict[Grading, dict[Monomial, Fraction]] = defaultdict(dict)
    for mono, c in h:
        components[grading_of(mono)][mono] = c

    cache: dict[Grading, list[Monomial]] = {}
    entries: list[CertificateEntry] = []
    for grading in sorted(components):
        found = _solve_component(DiffPoly(components[grading]), grading, by_grading, w, cache)
        if found is None:
            logger.info("no certificate for component %s within %s", grading, w.label())
            return None
        entries.extend(found)
    return MembershipCertificate(entries=tuple(entries), window=w)


def default_window(
    h: DiffPoly,
    M: int,  # noqa: N803
    *,
    pad_factor: int = 3,
    s_max: int = 2,
    max_p: int = 1,
    degree: int | None = None,
    generator_degree: int = 2,
) -> Window:
    """Indices padded by pad_factor·M around the target, multiplier degree deg(h) − 2."""
    indices = [v.n for v in h.variables()] or [0]
    pad = pad_factor * M
    if degree is None:
        degree = max(h.degree - generator_degree, 0)
    return Window(
        index_lo=min(indices) - pad,
        index_hi=max(indices) + pad,
        s_max=s_max,
        max_p=max_p,
        max_multiplier_degree=degree,
    )
