"""LL(1) recursive-descent parser for .cnv scripts.

Grammar (whitespace-insensitive, ``//`` comments to end of line):

    script      = item* EOF
    item        = algebra | npalgebra | derivation | localityfn | command
    algebra     = "algebra" NAME "{" "generators" ":" names ";" bracket* "}"
    bracket     = "bracket" "(" NAME "," NAME ")" "=" expr ";"
    npalgebra   = "npalgebra" NAME "{" "basis" ":" names ";" npentry* "}"
    npentry     = ("circ" | "star") "(" NAME "," NAME ")" "=" expr ";"
    derivation  = "derivation" NAME "on" NAME "{" (NAME "(" NAME ")" "=" expr ";")* "}"
    localityfn  = "localityfn" NAME "{" "letters" ":" names ";" "default" ":" INT ";"
                  ("N" "(" NAME "," NAME ")" "=" INT ";")* "}"
    command     = "check" NAME NAME ";"
                | "locality" NAME NAME NAME ";"
                | "product" NAME coeff coeff ";"
                | "scenario" NAME arg* ";"
                | "membership" arg* ";"
    coeff       = NAME "(" sint ")"
    arg         = NAME "=" value
    value       = sint [":" sint] | NAME ["(" [value ("," value)*] ")"]
    expr        = term (("+" | "-") term)*
    term        = unary ("*" unary)*
    unary       = "-" unary | power
    power       = atom ["^" INT]
    atom        = INT ["/" INT] | NAME | "(" expr ")"
    sint        = ["-"] INT

Names are checked while parsing: declarations are unique, commands and
brackets may only mention names declared earlier, and the symbols ``del``
and ``lam`` are reserved.

Errors are positioned where the viable prefix stops: just after the last
token that still fits. Inside operator expressions and argument lists,
which can swallow tokens past a missing one, the position falls back to
where the enclosing construct began. A missing token is never reported
after the place it was removed from.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Iterator
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction

from novconf.dsl.ast import (
    RESERVED_SYMBOLS,
    AlgebraDecl,
    Arg,
    ArgValue,
    BracketDecl,
    CallValue,
    CheckCmd,
    CoeffSym,
    DerivationDecl,
    DerivationImage,
    IntValue,
    Item,
    LocalityCmd,
    LocalityDecl,
    LocalityOverride,
    MembershipCmd,
    NameValue,
    Neg,
    NPAlgebraDecl,
    NPEntry,
    Num,
    OpExpr,
    Power,
    Product,
    ProductCmd,
    RangeValue,
    ScenarioCmd,
    Script,
    Sum,
    Sym,
)
from novconf.dsl.lexer import Token, TokenKind, tokenize
from novconf.errors import ParseError
from novconf.tools.confalg import Identity

logger = logging.getLogger(__name__)

ITEM_KEYWORDS = (
    "algebra",
    "npalgebra",
    "derivation",
    "localityfn",
    "check",
    "locality",
    "product",
    "scenario",
    "membership",
)
IDENTITY_CHECKS = tuple(i.value for i in Identity)
CHECKS_BY_KIND = {
    "algebra": IDENTITY_CHECKS,
    "npalgebra": (*IDENTITY_CHECKS, "np_axioms"),
    "derivation": (*IDENTITY_CHECKS, "derivation"),
}
CONFORMAL_KINDS = ("algebra", "npalgebra", "derivation")


@dataclass(frozen=True)
class _Declared:
    kind: str
    generators: tuple[str, ...]


class Parser:
    """Single-use parser over the token list of one script."""

    def __init__(self, text: str) -> None:
        self._tokens = tokenize(text)
        self._pos = 0
        self._declared: dict[str, _Declared] = {}
        self._anchors: list[int] = []

    # ── Token helpers ──

    def _peek(self) -> Token:
        return self._tokens[self._pos]

    def _advance(self) -> Token:
        token = self._tokens[self._pos]
        if token.kind != TokenKind.EOF:
            self._pos += 1
        return token

    def _error(self, expected: Iterable[str], token: Token | None = None) -> ParseError:
        found = token or self._peek()
        index = self._tokens.index(found)
        if self._anchors:
            index = min(index, self._anchors[-1])
        line, column, offset = self._boundary(index)
        return ParseError(line, column, offset, tuple(expected), found.describe())

    def _boundary(self, index: int) -> tuple[int, int, int]:
        """Position right after the token preceding ``tokens[index]``."""
        if index == 0:
            return 1, 1, 0
        before = self._tokens[index - 1]
        width = len(before.text)
        return before.line, before.column + width, before.offset + width

    @contextmanager
    def _anchored(self) -> Iterator[None]:
        """Report errors raised inside the block at the block's start."""
        self._anchors.append(self._pos)
        try:
            yield
        finally:
            self._anchors.pop()

    def _at(self, text: str) -> bool:
        token = self._peek()
        return token.kind in (TokenKind.PUNCT, TokenKind.NAME) and token.text == text

    def _expect(self, text: str) -> Token:
        if not self._at(text):
            raise self._error([repr(text)])
        return self._advance()

    def _name(self, what: str = "name") -> Token:
        token = self._peek()
        if token.kind != TokenKind.NAME:
            raise self._error([what])
        return self._advance()

    def _int(self) -> int:
        token = self._peek()
        if token.kind != TokenKind.INT:
            raise self._error(["integer"])
        self._advance()
        return int(token.text)

    def _sint(self) -> int:
        if self._at("-"):
            self._advance()
            return -self._int()
        return self._int()

    def _fresh(self, what: str) -> Token:
        token = self._name(what)
        if token.text in self._declared:
            raise self._error([f"undeclared {what}"], token)
        if token.text in RESERVED_SYMBOLS:
            raise self._error([what], token)
        return token

    def _declared_name(self, kinds: Iterable[str]) -> tuple[Token, _Declared]:
        kinds = tuple(kinds)
        token = self._name(" or ".join(kinds))
        found = self._declared.get(token.text)
        if found is None or found.kind not in kinds:
            raise self._error([f"declared {' or '.join(kinds)}"], token)
        return token, found

    def _member(self, allowed: Iterable[str], what: str) -> str:
        token = self._name(what)
        if token.text not in allowed:
            raise self._error([f"{what} of the declaration"], token)
        return token.text

    def _names(self, what: str) -> tuple[str, ...]:
        first = self._name(what)
        tokens = [first]
        while self._at(","):
            self._advance()
            tokens.append(self._name(what))
        seen: set[str] = set()
        for token in tokens:
            if token.text in seen or token.text in RESERVED_SYMBOLS:
                raise self._error([f"distinct {what}"], token)
            seen.add(token.text)
        return tuple(t.text for t in tokens)

    # ── Script and items ──

    def parse(self) -> Script:
        items: list[Item] = []
        while self._peek().kind != TokenKind.EOF:
            items.append(self._item())
        logger.debug("parsed %d items", len(items))
        return Script(items=tuple(items))

    def _item(self) -> Item:
        token = self._peek()
        if token.kind != TokenKind.NAME or token.text not in ITEM_KEYWORDS:
            raise self._error([*ITEM_KEYWORDS, "end of input"])
        keyword = self._advance().text
        match keyword:
            case "algebra":
                return self._algebra()
            case "npalgebra":
                return self._npalgebra()
            case "derivation":
                return self._derivation()
            case "localityfn":
                return self._localityfn()
            case "check":
                return self._check()
            case "locality":
                return self._locality()
            case "product":
                return self._product()
            case "scenario":
                with self._anchored():
                    name = self._name("scenario name").text
                    args = self._args()
                    self._expect(";")
                return ScenarioCmd(name=name, args=args)
            case _:
                with self._anchored():
                    args = self._args()
                    self._expect(";")
                return MembershipCmd(args=args)

    def _algebra(self) -> AlgebraDecl:
        name = self._fresh("algebra name").text
        self._expect("{")
        self._expect("generators")
        self._expect(":")
        gens = self._names("generator")
        self._expect(";")
        allowed = set(gens) | RESERVED_SYMBOLS
        brackets = []
        while self._at("bracket"):
            self._advance()
            self._expect("(")
            left = self._member(gens, "generator")
            self._expect(",")
            right = self._member(gens, "generator")
            self._expect(")")
            self._expect("=")
            with self._anchored():
                value = self._expr(allowed)
                self._expect(";")
            brackets.append(BracketDecl(left, right, value))
        if not self._at("}"):
            raise self._error(["'bracket'", "'}'"])
        self._advance()
        self._declared[name] = _Declared("algebra", gens)
        return AlgebraDecl(name=name, generators=gens, brackets=tuple(brackets))

    def _npalgebra(self) -> NPAlgebraDecl:
        name = self._fresh("algebra name").text
        self._expect("{")
        self._expect("basis")
        self._expect(":")
        basis = self._names("basis element")
        self._expect(";")
        entries = []
        while self._at("circ") or self._at("star"):
            op = self._advance().text
            self._expect("(")
            left = self._member(basis, "basis element")
            self._expect(",")
            right = self._member(basis, "basis element")
            self._expect(")")
            self._expect("=")
            with self._anchored():
                value = self._expr(set(basis))
                self._expect(";")
            entries.append(NPEntry(op, left, right, value))
        if not self._at("}"):
            raise self._error(["'circ'", "'star'", "'}'"])
        self._advance()
        self._declared[name] = _Declared("npalgebra", basis)
        return NPAlgebraDecl(name=name, basis=basis, entries=tuple(entries))

    def _derivation(self) -> DerivationDecl:
        with self._anchored():
            name = self._fresh("derivation name").text
            self._expect("on")
            algebra_token, algebra = self._declared_name(["algebra"])
        self._expect("{")
        allowed = set(algebra.generators) | {"del"}
        images = []
        while self._at(name):
            self._advance()
            self._expect("(")
            gen = self._member(algebra.generators, "generator")
            self._expect(")")
            self._expect("=")
            with self._anchored():
                value = self._expr(allowed)
                self._expect(";")
            images.append(DerivationImage(gen, value))
        if not self._at("}"):
            raise self._error([repr(name), "'}'"])
        self._advance()
        self._declared[name] = _Declared("derivation", algebra.generators)
        return DerivationDecl(name=name, algebra=algebra_token.text, images=tuple(images))

    def _localityfn(self) -> LocalityDecl:
        name = self._fresh("locality function name").text
        self._expect("{")
        self._expect("letters")
        self._expect(":")
        letters = self._names("letter")
        self._expect(";")
        self._expect("default")
        self._expect(":")
        default = self._int()
        self._expect(";")
        overrides = []
        while self._at("N"):
            self._advance()
            self._expect("(")
            left = self._member(letters, "letter")
            self._expect(",")
            right = self._member(letters, "letter")
            self._expect(")")
            self._expect("=")
            value = self._int()
            self._expect(";")
            overrides.append(LocalityOverride(left, right, value))
        if not self._at("}"):
            raise self._error(["'N'", "'}'"])
        self._advance()
        self._declared[name] = _Declared("localityfn", letters)
        return LocalityDecl(name=name, letters=letters, default=default, overrides=tuple(overrides))

    def _check(self) -> CheckCmd:
        identity_token = self._name("identity")
        known = {c for checks in CHECKS_BY_KIND.values() for c in checks}
        if identity_token.text not in known:
            raise self._error(sorted(known), identity_token)
        target_token, target = self._declared_name(CONFORMAL_KINDS)
        if identity_token.text not in CHECKS_BY_KIND[target.kind]:
            raise self._error(CHECKS_BY_KIND[target.kind], identity_token)
        self._expect(";")
        return CheckCmd(identity=identity_token.text, target=target_token.text)

    def _locality(self) -> LocalityCmd:
        algebra_token, algebra = self._declared_name(CONFORMAL_KINDS)
        with self._anchored():
            left = self._member(algebra.generators, "generator")
            right = self._member(algebra.generators, "generator")
            self._expect(";")
        return LocalityCmd(algebra=algebra_token.text, left=left, right=right)

    def _product(self) -> ProductCmd:
        algebra_token, algebra = self._declared_name(CONFORMAL_KINDS)
        left = self._coeff(algebra.generators)
        right = self._coeff(algebra.generators)
        self._expect(";")
        return ProductCmd(algebra=algebra_token.text, left=left, right=right)

    def _coeff(self, gens: tuple[str, ...]) -> CoeffSym:
        gen = self._member(gens, "generator")
        self._expect("(")
        index = self._sint()
        self._expect(")")
        return CoeffSym(gen, index)

    # ── Arguments ──

    def _args(self) -> tuple[Arg, ...]:
        args = []
        while self._peek().kind == TokenKind.NAME:
            with self._anchored():
                key = self._advance().text
                self._expect("=")
                args.append(Arg(key, self._value()))
        if not self._at(";"):
            raise self._error(["argument", "';'"])
        return tuple(args)

    def _value(self) -> ArgValue:
        token = self._peek()
        if token.kind == TokenKind.NAME:
            with self._anchored():
                name = self._advance().text
                if not self._at("("):
                    return NameValue(name)
                self._advance()
                values: list[ArgValue] = []
                if not self._at(")"):
                    values.append(self._value())
                    while self._at(","):
                        self._advance()
                        values.append(self._value())
                self._expect(")")
            return CallValue(name, tuple(values))
        if token.kind == TokenKind.INT or self._at("-"):
            lo = self._sint()
            if self._at(":"):
                self._advance()
                return RangeValue(lo, self._sint())
            return IntValue(lo)
        raise self._error(["integer", "name", "'-'"])

    # ── Operator expressions ──

    def _expr(self, allowed: set[str]) -> OpExpr:
        terms = [self._term(allowed)]
        while self._at("+") or self._at("-"):
            sign = self._advance().text
            term = self._term(allowed)
            terms.append(Neg(term) if sign == "-" else term)
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))

    def _term(self, allowed: set[str]) -> OpExpr:
        factors = [self._unary(allowed)]
        while self._at("*"):
            self._advance()
            factors.append(self._unary(allowed))
        return factors[0] if len(factors) == 1 else Product(tuple(factors))

    def _unary(self, allowed: set[str]) -> OpExpr:
        if self._at("-"):
            self._advance()
            return Neg(self._unary(allowed))
        return self._power(allowed)

    def _power(self, allowed: set[str]) -> OpExpr:
        base = self._atom(allowed)
        if self._at("^"):
            with self._anchored():
                self._advance()
                return Power(base, self._int())
        return base

    def _atom(self, allowed: set[str]) -> OpExpr:
        token = self._peek()
        if token.kind == TokenKind.INT:
            numerator = self._int()
            if not self._at("/"):
                return Num(Fraction(numerator))
            with self._anchored():
                self._advance()
                denominator_token = self._peek()
                denominator = self._int()
                if denominator == 0:
                    raise self._error(["nonzero integer"], denominator_token)
            return Num(Fraction(numerator, denominator))
        if token.kind == TokenKind.NAME:
            if token.text not in allowed:
                raise self._error(sorted(allowed), token)
            self._advance()
            return Sym(token.text)
        if self._at("("):
            with self._anchored():
                self._advance()
                inner = self._expr(allowed)
                self._expect(")")
            return inner
        raise self._error(["integer", "name", "'('", "'-'"])


def parse_script(text: str) -> Script:
    """Parse a whole script.

    Raises:
        ParseError: Where ``text`` stops being a valid prefix, or at the start of
            the expression or argument that cannot be completed.
    """
    return Parser(text).parse()
