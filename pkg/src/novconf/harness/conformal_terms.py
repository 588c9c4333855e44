"""Conformal terms over the letters a^(p): weights and the generating K relations.

A term is built from generators a^(p), n-products and ∂. Its weight is
p − 1 per generator, additive under n-products and unchanged by ∂. Weight −1
terms are the ones expressible through the Novikov product alone; the
constructive check here maps a term to its commutative symbol and asks
``express_via_novikov`` for an explicit combination of Novikov words.
"""

from __future__ import annotations

import logging
import random
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from novconf.errors import UsageError
from novconf.tools.diffpoly import DiffPoly, Weight, derive_n, var
from novconf.tools.exactnum import binomial
from novconf.tools.idealkit import emit_fpq
from novconf.tools.novikov_words import NovikovExpression, express_via_novikov

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GenTerm:
    gen: str
    p: int = 0

    def render(self) -> str:
        return f"{self.gen}^({self.p})"


@dataclass(frozen=True)
class NProduct:
    left: Term
    right: Term
    n: int

    def render(self) -> str:
        return f"({self.left.render()} o{self.n} {self.right.render()})"


@dataclass(frozen=True)
class Partial:
    term: Term

    def render(self) -> str:
        return f"del({self.term.render()})"


@dataclass(frozen=True)
class TermSum:
    terms: tuple[tuple[Fraction, Term], ...]

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = [t.render() if c == 1 else f"{c}*{t.render()}" for c, t in self.terms]
        return " + ".join(parts)


Term = GenTerm | NProduct | Partial | TermSum


def check_wt_conformal(expr: Term) -> int | None | Weight:
    """Weight of a homogeneous term.

    None when its summands disagree. A sum whose coefficients cancel is zero
    and gets ``Weight.ANY``, as in ``diffpoly.weight``.
    """
    match expr:
        case GenTerm(p=p):
            return p - 1
        case NProduct(left=left, right=right):
            wl, wr = check_wt_conformal(left), check_wt_conformal(right)
            if isinstance(wl, Weight) or isinstance(wr, Weight):
                return Weight.ANY
            if wl is None or wr is None:
                return None
            return wl + wr
        case Partial(term=inner):
            return check_wt_conformal(inner)
        case TermSum(terms=terms):
            totals: dict[Term, Fraction] = {}
            for c, t in terms:
                totals[t] = totals.get(t, Fraction(0)) + c
            weights = {check_wt_conformal(t) for t, c in totals.items() if c}
            weights.discard(Weight.ANY)
            if not weights:
                return Weight.ANY
            if len(weights) > 1:
                return None
            return weights.pop()
    msg = f"not a conformal term: {expr!r}"
    raise UsageError(msg)


def term_symbol(expr: Term) -> DiffPoly:
    """Commutative symbol: a^(p) ↦ a^(p)(0), products multiply, ∂ drops."""
    match expr:
        case GenTerm(gen=gen, p=p):
            return var(gen, p, 0)
        case NProduct(left=left, right=right):
            return term_symbol(left) * term_symbol(right)
        case Partial(term=inner):
            return term_symbol(inner)
        case TermSum(terms=terms):
            total = DiffPoly.zero()
            for c, t in terms:
                total = total + term_symbol(t) * c
            return total
    msg = f"not a conformal term: {expr!r}"
    raise UsageError(msg)


def novikov_rewrite(expr: Term) -> NovikovExpression | None:
    """Novikov words for the symbol of a weight −1 term; None for any other weight."""
    if check_wt_conformal(expr) != -1:
        return None
    return express_via_novikov(term_symbol(expr))


def sample_terms(
    rng: random.Random, gens: Sequence[str], count: int, *, max_depth: int = 2, max_p: int = 2
) -> list[Term]:
    def build(depth: int) -> Term:
        roll = rng.random()
        if depth == 0 or roll < 0.3:
            return GenTerm(rng.choice(gens), rng.randint(0, max_p))
        if roll < 0.45:
            return Partial(build(depth - 1))
        return NProduct(build(depth - 1), build(depth - 1), rng.randint(0, 2))

    return [build(max_depth) for _ in range(count)]


@dataclass(frozen=True)
class WeightCriterionFailure:
    term: Term
    reason: str


def check_weight_criterion(terms: Sequence[Term]) -> list[WeightCriterionFailure]:
    """Every weight −1 term must come back as a combination of Novikov words."""
    failures = []
    for t in terms:
        if check_wt_conformal(t) != -1:
            continue
        rewrite = novikov_rewrite(t)
        if rewrite is None:
            failures.append(WeightCriterionFailure(t, "no Novikov word combination"))
        elif rewrite.evaluate() != term_symbol(t):
            failures.append(WeightCriterionFailure(t, "rewrite does not evaluate to the symbol"))
    return failures


# ── Generating relations of K ──


@dataclass(frozen=True)
class GenerateKRelation:
    """Σ_s C(d,s) a^(p+s) ⊛_n b^(q+d−s), one summand per s."""

    a: str
    b: str
    p: int
    q: int
    d: int
    n: int
    terms: tuple[tuple[int, NProduct], ...]

    def as_term(self) -> TermSum:
        return TermSum(tuple((Fraction(c), t) for c, t in self.terms))

    def render(self) -> str:
        return self.as_term().render()

    def coefficient_image(self, k: int, m: int) -> DiffPoly:
        """Σ_s C(d,s) f^{p+s, q+d−s}_{a,b}(k, m; n)."""
        total = DiffPoly.zero()
        for c, t in self.terms:
            assert isinstance(t.left, GenTerm) and isinstance(t.right, GenTerm)
            total = total + emit_fpq(self.a, self.b, t.left.p, t.right.p, k, m, self.n) * c
        return total

    def derivative_family(self, k: int, m: int) -> DiffPoly:
        """d^d f^{p,q}_{a,b}(k, m; n)."""
        return derive_n(emit_fpq(self.a, self.b, self.p, self.q, k, m, self.n), self.d)


def emit_generateK_relation(  # noqa: N802
    a: str, b: str, p: int, q: int, d: int, n: int
) -> GenerateKRelation:
    if min(p, q, d, n) < 0:
        msg = f"generating relation needs p, q, d, n >= 0, got {(p, q, d, n)}"
        raise UsageError(msg)
    terms = tuple(
        (binomial(d, s), NProduct(GenTerm(a, p + s), GenTerm(b, q + d - s), n))
        for s in range(d + 1)
    )
    return GenerateKRelation(a, b, p, q, d, n, terms)


def verify_generateK(  # noqa: N802
    relation: GenerateKRelation, indices: range
) -> list[tuple[int, int]]:
    """Index pairs where the coefficient image differs from the derivative family."""
    bad = [
        (k, m)
        for k in indices
        for m in indices
        if relation.coefficient_image(k, m) != relation.derivative_family(k, m)
    ]
    if bad:
        logger.warning("generating relation %s fails at %d index pairs", relation.render(), len(bad))
    return bad
