"""Novikov words over an alphabet and their images in the differential algebra.

A word is an ordered binary tree with letters at the leaves; evaluating it
with ``f ∘ g = d(f)·g`` lands in weight -1. ``express_via_novikov`` goes the
other way: it writes a weight -1 polynomial in index-free letters as an
explicit combination of words, or reports that none exists.
"""

from __future__ import annotations

import itertools
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cache

from novconf.tools.diffpoly import (
    DiffPoly,
    Monomial,
    monomial_letters,
    monomial_weight,
    novikov_product,
    var,
)
from novconf.tools.exactnum import LinearSystem, solve

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Word:
    """``letter`` for a leaf, otherwise ``left ∘ right``."""

    letter: str | None = None
    left: Word | None = None
    right: Word | None = None

    def render(self) -> str:
        if self.letter is not None:
            return self.letter
        assert self.left is not None and self.right is not None
        return f"({self.left.render()}∘{self.right.render()})"

    def letters(self) -> tuple[str, ...]:
        if self.letter is not None:
            return (self.letter,)
        assert self.left is not None and self.right is not None
        return tuple(sorted(self.left.letters() + self.right.letters()))


def leaf(letter: str) -> Word:
    return Word(letter=letter)


def node(left: Word, right: Word) -> Word:
    return Word(left=left, right=right)


def _sub_multisets(letters: tuple[str, ...]) -> list[tuple[str, ...]]:
    counts = sorted(Counter(letters).items())
    ranges = [range(c + 1) for _, c in counts]
    out = []
    for picks in itertools.product(*ranges):
        sub = tuple(itertools.chain.from_iterable([g] * k for (g, _), k in zip(counts, picks, strict=True)))
        out.append(sub)
    return out


def _minus(letters: tuple[str, ...], sub: tuple[str, ...]) -> tuple[str, ...]:
    rest = Counter(letters)
    rest.subtract(sub)
    return tuple(sorted(rest.elements()))


@cache
def enumerate_words(letters: tuple[str, ...]) -> tuple[Word, ...]:
    """All words using each letter of the (sorted) multiset exactly once."""
    letters = tuple(sorted(letters))
    if not letters:
        return ()
    if len(letters) == 1:
        return (leaf(letters[0]),)
    out: list[Word] = []
    for left_part in _sub_multisets(letters):
        if not left_part or len(left_part) == len(letters):
            continue
        right_part = _minus(letters, left_part)
        for lw in enumerate_words(left_part):
            for rw in enumerate_words(right_part):
                out.append(node(lw, rw))
    return tuple(out)


def evaluate(word: Word) -> DiffPoly:
    if word.letter is not None:
        return var(word.letter, 0, 0)
    assert word.left is not None and word.right is not None
    return novikov_product(evaluate(word.left), evaluate(word.right))


@dataclass(frozen=True)
class NovikovExpression:
    terms: tuple[tuple[Fraction, Word], ...]

    def evaluate(self) -> DiffPoly:
        total = DiffPoly.zero()
        for c, w in self.terms:
            total = total + evaluate(w) * c
        return total

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = [f"{c}*{w.render()}" for c, w in self.terms]
        return " + ".join(parts).replace("+ -", "- ")


def express_via_novikov(f: DiffPoly) -> NovikovExpression | None:
    """Write ``f`` as a combination of Novikov words, or None if impossible.

    Only index-free polynomials (every index 0) of weight -1 qualify.
    """
    if any(v.n != 0 for v in f.variables()):
        return None
    groups: dict[tuple[str, ...], dict[Monomial, Fraction]] = defaultdict(dict)
    for mono, c in f:
        if monomial_weight(mono) != -1:
            return None
        groups[monomial_letters(mono)][mono] = c

    terms: list[tuple[Fraction, Word]] = []
    for letters in sorted(groups):
        words = enumerate_words(letters)
        images = [evaluate(w) for w in words]
        row_of: dict[Monomial, int] = {}
        for image in images:
            for mono, _ in image:
                row_of.setdefault(mono, len(row_of))
        for mono in groups[letters]:
            if mono not in row_of:
                return None
        rows: list[dict[int, Fraction]] = [{} for _ in row_of]
        for col, image in enumerate(images):
            for mono, c in image:
                rows[row_of[mono]][col] = c
        rhs = [Fraction(0)] * len(row_of)
        for mono, c in groups[letters].items():
            rhs[row_of[mono]] = c
        solution = solve(LinearSystem(rows=rows, rhs=rhs, n_cols=len(words)))
        if solution is None:
            return None
        terms.extend((c, w) for c, w in zip(solution, words, strict=True) if c)
        logger.debug("letters %s: %d words, %d used", letters, len(words), len(terms))
    return NovikovExpression(terms=tuple(terms))
