"""Syntax tree of .cnv scripts.

Nodes are frozen dataclasses so two parses of equivalent text compare equal
field by field. Operator expressions are n-ary: a Sum or Product produced by
the parser always has at least two children, and subtraction is a Neg term.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

# ── Operator expressions ──


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Sym:
    """``del``, ``lam`` or a generator / basis name."""

    name: str


@dataclass(frozen=True)
class Neg:
    operand: OpExpr


@dataclass(frozen=True)
class Sum:
    terms: tuple[OpExpr, ...]


@dataclass(frozen=True)
class Product:
    factors: tuple[OpExpr, ...]


@dataclass(frozen=True)
class Power:
    base: OpExpr
    exponent: int


OpExpr = Num | Sym | Neg | Sum | Product | Power

RESERVED_SYMBOLS = frozenset({"del", "lam"})


# ── Declarations ──


@dataclass(frozen=True)
class BracketDecl:
    left: str
    right: str
    value: OpExpr


@dataclass(frozen=True)
class AlgebraDecl:
    name: str
    generators: tuple[str, ...]
    brackets: tuple[BracketDecl, ...] = ()


@dataclass(frozen=True)
class NPEntry:
    op: str  # "circ" or "star"
    left: str
    right: str
    value: OpExpr


@dataclass(frozen=True)
class NPAlgebraDecl:
    name: str
    basis: tuple[str, ...]
    entries: tuple[NPEntry, ...] = ()


@dataclass(frozen=True)
class DerivationImage:
    gen: str
    value: OpExpr


@dataclass(frozen=True)
class DerivationDecl:
    name: str
    algebra: str
    images: tuple[DerivationImage, ...] = ()


@dataclass(frozen=True)
class LocalityOverride:
    left: str
    right: str
    value: int


@dataclass(frozen=True)
class LocalityDecl:
    name: str
    letters: tuple[str, ...]
    default: int
    overrides: tuple[LocalityOverride, ...] = ()


# ── Commands ──


@dataclass(frozen=True)
class IntValue:
    value: int


@dataclass(frozen=True)
class NameValue:
    name: str


@dataclass(frozen=True)
class RangeValue:
    lo: int
    hi: int


@dataclass(frozen=True)
class CallValue:
    func: str
    args: tuple[ArgValue, ...]


ArgValue = IntValue | NameValue | RangeValue | CallValue


@dataclass(frozen=True)
class Arg:
    key: str
    value: ArgValue


@dataclass(frozen=True)
class CheckCmd:
    identity: str
    target: str


@dataclass(frozen=True)
class LocalityCmd:
    algebra: str
    left: str
    right: str


@dataclass(frozen=True)
class CoeffSym:
    gen: str
    index: int


@dataclass(frozen=True)
class ProductCmd:
    algebra: str
    left: CoeffSym
    right: CoeffSym


@dataclass(frozen=True)
class ScenarioCmd:
    name: str
    args: tuple[Arg, ...] = ()


@dataclass(frozen=True)
class MembershipCmd:
    args: tuple[Arg, ...] = ()


Declaration = AlgebraDecl | NPAlgebraDecl | DerivationDecl | LocalityDecl
Command = CheckCmd | LocalityCmd | ProductCmd | ScenarioCmd | MembershipCmd
Item = Declaration | Command


@dataclass(frozen=True)
class Script:
    items: tuple[Item, ...] = ()

    def declarations(self) -> dict[str, Declaration]:
        return {
            item.name: item
            for item in self.items
            if isinstance(item, AlgebraDecl | NPAlgebraDecl | DerivationDecl | LocalityDecl)
        }

    def commands(self) -> list[Command]:
        return [
            item
            for item in self.items
            if isinstance(item, CheckCmd | LocalityCmd | ProductCmd | ScenarioCmd | MembershipCmd)
        ]


def arg_map(args: tuple[Arg, ...]) -> dict[str, list[ArgValue]]:
    """Arguments grouped by key, repeated keys kept in order."""
    out: dict[str, list[ArgValue]] = {}
    for arg in args:
        out.setdefault(arg.key, []).append(arg.value)
    return out
