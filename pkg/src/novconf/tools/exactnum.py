"""Exact arithmetic: rationals, binomial coefficients and a sparse linear solver.

Every quantity in novconf is exact. Rationals are ``fractions.Fraction`` and
integers are Python's arbitrary-precision ``int``.
"""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from novconf.errors import NovConfError, UsageError

logger = logging.getLogger(__name__)

Rational = Fraction

SparseRow = dict[int, Fraction]


def binomial(n: int, k: int) -> int:
    """Standard binomial coefficient C(n, k), zero outside 0 <= k <= n.

    Raises:
        UsageError: If n is negative.
    """
    if n < 0:
        msg = f"binomial requires n >= 0, got n={n}"
        raise UsageError(msg)
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def falling(n: int, j: int) -> int:
    """Falling factorial n(n-1)...(n-j+1); 1 when j = 0."""
    if j < 0:
        msg = f"falling requires j >= 0, got j={j}"
        raise UsageError(msg)
    result = 1
    for i in range(j):
        result *= n - i
    return result


def gen_binomial(n: int, s: int) -> int:
    """Generalized binomial falling(n, s)/s! for any integer n."""
    if s < 0:
        return 0
    return falling(n, s) // math.factorial(s)


# ── Linear systems ─────────────────────────────────────────────


@dataclass(frozen=True)
class LinearSystem:
    """Sparse rows over columns ``0..n_cols-1`` with a right-hand side."""

    rows: list[SparseRow]
    rhs: list[Fraction]
    n_cols: int
    column_labels: list[str] = field(default_factory=list, compare=False)

    def __post_init__(self) -> None:
        if len(self.rows) != len(self.rhs):
            msg = f"{len(self.rows)} rows but {len(self.rhs)} right-hand sides"
            raise UsageError(msg)
        for i, row in enumerate(self.rows):
            for col, value in row.items():
                if value == 0:
                    msg = f"row {i} stores an explicit zero at column {col}"
                    raise UsageError(msg)
                if not 0 <= col < self.n_cols:
                    msg = f"row {i} references column {col} outside 0..{self.n_cols - 1}"
                    raise UsageError(msg)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), self.n_cols


def residual(system: LinearSystem, solution: list[Fraction]) -> list[Fraction]:
    """A·x − b, row by row."""
    out = []
    for row, b in zip(system.rows, system.rhs, strict=True):
        out.append(sum((v * solution[c] for c, v in row.items()), Fraction(0)) - b)
    return out


def solve(system: LinearSystem) -> list[Fraction] | None:
    """Return one exact solution of the system, or None when it is inconsistent.

    Gauss-Jordan elimination. The pivot column is the one with the smallest
    support among unreduced rows (lowest index on ties); within it the pivot
    row is the sparsest (lowest index on ties). Free variables are set to 0.
    """
    rows = [dict(r) for r in system.rows]
    rhs = list(system.rhs)

    # column -> rows holding a nonzero there; split by pivoted/unpivoted
    active_index: dict[int, set[int]] = defaultdict(set)
    pivot_index: dict[int, set[int]] = defaultdict(set)
    for i, row in enumerate(rows):
        for col in row:
            active_index[col].add(i)

    active = set(range(len(rows)))
    pivot_row_of: dict[int, int] = {}

    def _set(i: int, col: int, value: Fraction) -> None:
        index = active_index if i in active else pivot_index
        if value == 0:
            if col in rows[i]:
                del rows[i][col]
                index[col].discard(i)
        else:
            if col not in rows[i]:
                index[col].add(i)
            rows[i][col] = value

    while True:
        best: tuple[int, int] | None = None
        for col, holders in active_index.items():
            if holders and (best is None or (len(holders), col) < best):
                best = (len(holders), col)
        if best is None:
            break
        col = best[1]
        r = min(active_index[col], key=lambda i: (len(rows[i]), i))

        inv = 1 / rows[r][col]
        if inv != 1:
            for c in list(rows[r]):
                rows[r][c] *= inv
            rhs[r] *= inv

        active.discard(r)
        for c in rows[r]:
            active_index[c].discard(r)
            pivot_index[c].add(r)
        pivot_row_of[col] = r

        for i in sorted((active_index[col] | pivot_index[col]) - {r}):
            factor = rows[i][col]
            for c, v in list(rows[r].items()):
                _set(i, c, rows[i].get(c, Fraction(0)) - factor * v)
            rhs[i] -= factor * rhs[r]

    for i in active:
        if not rows[i] and rhs[i] != 0:
            logger.debug("inconsistent row %d after %d pivots", i, len(pivot_row_of))
            return None

    solution = [Fraction(0)] * system.n_cols
    for col, r in pivot_row_of.items():
        solution[col] = rhs[r]

    if any(residual(system, solution)):
        msg = "solver produced a solution that does not reproduce the right-hand side"
        raise NovConfError(msg)
    logger.debug(
        "solved %dx%d system with %d pivots", len(rows), system.n_cols, len(pivot_row_of)
    )
    return solution
