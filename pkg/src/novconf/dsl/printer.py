"""Canonical text for script syntax trees.

``parse_script(render_script(s)) == s`` for every tree the parser can
produce. Parentheses are emitted only where the grammar needs them.
"""

from __future__ import annotations

from novconf.dsl.ast import (
    AlgebraDecl,
    Arg,
    ArgValue,
    CallValue,
    CheckCmd,
    CoeffSym,
    DerivationDecl,
    IntValue,
    Item,
    LocalityCmd,
    LocalityDecl,
    MembershipCmd,
    NameValue,
    Neg,
    NPAlgebraDecl,
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

INDENT = "  "


# ── Operator expressions ──


def _num(value: Num) -> str:
    v = value.value
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _paren(text: str) -> str:
    return f"({text})"


def _factor(e: OpExpr) -> str:
    if isinstance(e, Sum | Product):
        return _paren(render_expr(e))
    return render_expr(e)


def _subtrahend(e: OpExpr) -> str:
    if isinstance(e, Sum):
        return _paren(render_expr(e))
    return render_expr(e)


def render_expr(e: OpExpr) -> str:
    match e:
        case Num():
            return _num(e)
        case Sym():
            return e.name
        case Neg():
            return "-" + _factor(e.operand)
        case Power():
            simple = isinstance(e.base, Sym) or (
                isinstance(e.base, Num) and e.base.value.denominator == 1 and e.base.value >= 0
            )
            base = render_expr(e.base) if simple else _paren(render_expr(e.base))
            return f"{base}^{e.exponent}"
        case Product():
            return "*".join(_factor(f) for f in e.factors)
        case Sum():
            first, *rest = e.terms
            text = _subtrahend(first)
            for term in rest:
                if isinstance(term, Neg):
                    text += " - " + _subtrahend(term.operand)
                else:
                    text += " + " + _subtrahend(term)
            return text
    raise TypeError(f"not an operator expression: {e!r}")


# ── Arguments ──


def render_value(v: ArgValue) -> str:
    match v:
        case IntValue():
            return str(v.value)
        case NameValue():
            return v.name
        case RangeValue():
            return f"{v.lo}:{v.hi}"
        case CallValue():
            return f"{v.func}({', '.join(render_value(a) for a in v.args)})"
    raise TypeError(f"not an argument value: {v!r}")


def _args(args: tuple[Arg, ...]) -> str:
    return "".join(f" {a.key}={render_value(a.value)}" for a in args)


def _coeff(c: CoeffSym) -> str:
    return f"{c.gen}({c.index})"


# ── Items ──


def render_item(item: Item) -> str:
    match item:
        case AlgebraDecl():
            lines = [f"algebra {item.name} {{", f"{INDENT}generators: {', '.join(item.generators)};"]
            lines += [
                f"{INDENT}bracket({b.left}, {b.right}) = {render_expr(b.value)};" for b in item.brackets
            ]
            return "\n".join([*lines, "}"])
        case NPAlgebraDecl():
            lines = [f"npalgebra {item.name} {{", f"{INDENT}basis: {', '.join(item.basis)};"]
            lines += [
                f"{INDENT}{e.op}({e.left}, {e.right}) = {render_expr(e.value)};" for e in item.entries
            ]
            return "\n".join([*lines, "}"])
        case DerivationDecl():
            lines = [f"derivation {item.name} on {item.algebra} {{"]
            lines += [f"{INDENT}{item.name}({i.gen}) = {render_expr(i.value)};" for i in item.images]
            return "\n".join([*lines, "}"])
        case LocalityDecl():
            lines = [
                f"localityfn {item.name} {{",
                f"{INDENT}letters: {', '.join(item.letters)};",
                f"{INDENT}default: {item.default};",
            ]
            lines += [f"{INDENT}N({o.left}, {o.right}) = {o.value};" for o in item.overrides]
            return "\n".join([*lines, "}"])
        case CheckCmd():
            return f"check {item.identity} {item.target};"
        case LocalityCmd():
            return f"locality {item.algebra} {item.left} {item.right};"
        case ProductCmd():
            return f"product {item.algebra} {_coeff(item.left)} {_coeff(item.right)};"
        case ScenarioCmd():
            return f"scenario {item.name}{_args(item.args)};"
        case MembershipCmd():
            return f"membership{_args(item.args)};"
    raise TypeError(f"not a script item: {item!r}")


def render_script(script: Script) -> str:
    """Canonical text of ``script``; the empty script renders as ``""``."""
    if not script.items:
        return ""
    return "\n".join(render_item(item) for item in script.items) + "\n"
