"""Execute parsed .cnv scripts.

Declarations are materialized in script order; every command then produces
one ScenarioReport (a ``scenario`` command may produce several), collected
into a RunReport in script order.
"""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path

from novconf.dsl.ast import (
    AlgebraDecl,
    ArgValue,
    CallValue,
    CheckCmd,
    Command,
    DerivationDecl,
    IntValue,
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
    arg_map,
)
from novconf.dsl.parser import parse_script
from novconf.dsl.printer import render_item
from novconf.errors import UsageError
from novconf.harness.embed_harness import membership_check
from novconf.harness.scenarios import ScenarioParams, run_scenario, with_overrides
from novconf.models.report import CheckResult, RunReport, ScenarioReport
from novconf.tools.coeffalg import CoeffElement, product
from novconf.tools.confalg import (
    DEL,
    LAM,
    ConfElement,
    ConfPresentation,
    DerivationTable,
    Identity,
    NovikovPoissonTable,
    OpPoly,
    bracket,
    check_derivation,
    check_np_axioms,
    check_on_generators,
    check_on_samples,
    from_qq,
    gelfand,
    op_const,
    op_symbols,
    quadratic_from_np,
    table_locality,
)
from novconf.tools.diffpoly import DiffPoly, derive_n, var
from novconf.tools.idealkit import LocalityFn, emit_f, emit_fpq

logger = logging.getLogger(__name__)

IDENTITY_SAMPLES = 20
SCENARIO_KEYS = frozenset(
    {"M", "kmax", "seed", "case", "r", "p", "q", "l", "variant", "window", "smax", "degree", "pad"}
)
MEMBERSHIP_KEYS = frozenset(
    {"locality", "target", "multiplier", "deriv", "window", "smax", "degree", "M"}
)

Value = OpPoly | ConfElement


# ── Operator expressions ───────────────────────────────────────


def _as_element(v: Value, where: str) -> ConfElement:
    if isinstance(v, ConfElement):
        return v
    if not v:
        return ConfElement.zero()
    msg = f"{where}: expected a combination of generators, got the scalar {v}"
    raise UsageError(msg)


def evaluate(expr: OpExpr, generators: frozenset[str], where: str = "expression") -> Value:
    """Scalars live in 𝕜[∂, λ]; anything touching a generator is a ConfElement.

    Raises:
        UsageError: On a sum of a scalar and an element, a product of two
            elements, or a power of an element.
    """
    match expr:
        case Num():
            return op_const(expr.value)
        case Sym(name="del"):
            return DEL
        case Sym(name="lam"):
            return LAM
        case Sym():
            if expr.name not in generators:
                msg = f"{where}: unknown generator {expr.name!r}"
                raise UsageError(msg)
            return ConfElement.gen(expr.name)
        case Neg():
            return -evaluate(expr.operand, generators, where)
        case Sum():
            values = [evaluate(t, generators, where) for t in expr.terms]
            if all(not isinstance(v, ConfElement) for v in values):
                total: OpPoly = op_const(0)
                for v in values:
                    total = total + v
                return total
            element = ConfElement.zero()
            for v in values:
                element = element + _as_element(v, where)
            return element
        case Product():
            scalar: OpPoly = op_const(1)
            element_factor: ConfElement | None = None
            for f in expr.factors:
                v = evaluate(f, generators, where)
                if isinstance(v, ConfElement):
                    if element_factor is not None:
                        msg = f"{where}: a product may contain at most one generator factor"
                        raise UsageError(msg)
                    element_factor = v
                else:
                    scalar = scalar * v
            return scalar if element_factor is None else element_factor * scalar
        case Power():
            base = evaluate(expr.base, generators, where)
            if isinstance(base, ConfElement):
                msg = f"{where}: only scalars may be raised to a power"
                raise UsageError(msg)
            return base**expr.exponent
    raise TypeError(f"not an operator expression: {expr!r}")


def _constant_vector(e: ConfElement, where: str) -> dict[str, Fraction]:
    out: dict[str, Fraction] = {}
    for g, p in e:
        if op_symbols(p):
            msg = f"{where}: structure constants must be rational, got {p}"
            raise UsageError(msg)
        ((_, c),) = p.terms()
        out[g] = from_qq(c)
    return out


# ── Declarations ───────────────────────────────────────────────


def build_algebra(decl: AlgebraDecl) -> ConfPresentation:
    gens = frozenset(decl.generators)
    table: dict[tuple[str, str], ConfElement] = {}
    for b in decl.brackets:
        pair = (b.left, b.right)
        if pair in table:
            msg = f"bracket({b.left}, {b.right}) declared twice in {decl.name}"
            raise UsageError(msg)
        table[pair] = _as_element(
            evaluate(b.value, gens, f"bracket({b.left}, {b.right})"), f"{decl.name}"
        )
    return ConfPresentation(name=decl.name, generators=decl.generators, table=table)


def build_np_table(decl: NPAlgebraDecl) -> NovikovPoissonTable:
    basis = frozenset(decl.basis)
    tables: dict[str, dict[tuple[str, str], dict[str, Fraction]]] = {"circ": {}, "star": {}}
    for entry in decl.entries:
        where = f"{entry.op}({entry.left}, {entry.right})"
        pair = (entry.left, entry.right)
        if pair in tables[entry.op]:
            msg = f"{where} declared twice in {decl.name}"
            raise UsageError(msg)
        value = _as_element(evaluate(entry.value, basis, where), where)
        tables[entry.op][pair] = _constant_vector(value, where)
    return NovikovPoissonTable(
        name=decl.name, basis=decl.basis, circ=tables["circ"], star=tables["star"]
    )


def build_derivation(decl: DerivationDecl, algebra: ConfPresentation) -> DerivationTable:
    gens = frozenset(algebra.generators)
    images: dict[str, ConfElement] = {}
    for image in decl.images:
        where = f"{decl.name}({image.gen})"
        if image.gen in images:
            msg = f"{where} declared twice"
            raise UsageError(msg)
        images[image.gen] = _as_element(evaluate(image.value, gens, where), where)
    return DerivationTable(name=decl.name, images=images)


def build_locality(decl: LocalityDecl) -> LocalityFn:
    overrides: dict[tuple[str, str], int] = {}
    for o in decl.overrides:
        if (o.left, o.right) in overrides:
            msg = f"N({o.left}, {o.right}) declared twice in {decl.name}"
            raise UsageError(msg)
        overrides[(o.left, o.right)] = o.value
    return LocalityFn(decl.default, overrides)


# ── Argument decoding ──────────────────────────────────────────


def _single(key: str, values: list[ArgValue]) -> ArgValue:
    if len(values) != 1:
        msg = f"argument {key} given {len(values)} times"
        raise UsageError(msg)
    return values[0]


def _int(key: str, value: ArgValue) -> int:
    if not isinstance(value, IntValue):
        msg = f"argument {key} must be an integer"
        raise UsageError(msg)
    return value.value


def _name(key: str, value: ArgValue) -> str:
    if not isinstance(value, NameValue):
        msg = f"argument {key} must be a name"
        raise UsageError(msg)
    return value.name


def _range(key: str, value: ArgValue) -> tuple[int, int]:
    if not isinstance(value, RangeValue):
        msg = f"argument {key} must be a range lo:hi"
        raise UsageError(msg)
    if value.lo > value.hi:
        msg = f"argument {key}: lo must not exceed hi, got {value.lo}:{value.hi}"
        raise UsageError(msg)
    return value.lo, value.hi


def _call(key: str, value: ArgValue, func: str, shape: str) -> list[str | int]:
    """Arguments of ``func(...)`` matching ``shape`` ('n' name, 'i' integer)."""
    if not isinstance(value, CallValue) or value.func != func or len(value.args) != len(shape):
        msg = f"argument {key} must look like {func}({', '.join(shape)})"
        raise UsageError(msg)
    out: list[str | int] = []
    for kind, arg in zip(shape, value.args, strict=True):
        out.append(_name(key, arg) if kind == "n" else _int(key, arg))
    return out


def _unknown_keys(args: dict[str, list[ArgValue]], allowed: frozenset[str], what: str) -> None:
    unknown = sorted(set(args) - allowed)
    if unknown:
        msg = f"{what} does not accept {unknown}; allowed: {sorted(allowed)}"
        raise UsageError(msg)


def scenario_params(base: ScenarioParams, cmd: ScenarioCmd) -> ScenarioParams:
    """``base`` with the command's key=value arguments applied."""
    args = arg_map(cmd.args)
    _unknown_keys(args, SCENARIO_KEYS, f"scenario {cmd.name}")
    changes: dict[str, object] = {}
    policy = base.policy
    for key, values in args.items():
        value = _single(key, values)
        match key:
            case "case" | "variant":
                changes[key] = _name(key, value)
            case "window":
                policy = replace(policy, index_range=_range(key, value))
            case "smax":
                policy = replace(policy, s_max=_int(key, value))
            case "degree":
                policy = replace(policy, degree=_int(key, value))
            case "pad":
                policy = replace(policy, pad_factor=_int(key, value))
            case "seed":
                seed = _int(key, value)
                if seed < 0:
                    msg = f"seed must be >= 0, got {seed}"
                    raise UsageError(msg)
                changes[key] = seed
            case _:
                changes[key] = _int(key, value)
    return with_overrides(base, policy=policy, **changes)


# ── Runner ─────────────────────────────────────────────────────


@dataclass
class ScriptRunner:
    """Evaluation state of one script run."""

    params: ScenarioParams
    algebras: dict[str, ConfPresentation] = field(default_factory=dict)
    np_tables: dict[str, NovikovPoissonTable] = field(default_factory=dict)
    derivations: dict[str, tuple[str, DerivationTable]] = field(default_factory=dict)
    localities: dict[str, tuple[LocalityFn, tuple[str, ...]]] = field(default_factory=dict)
    _derived: dict[str, ConfPresentation] = field(default_factory=dict)

    def declare(self, item: AlgebraDecl | NPAlgebraDecl | DerivationDecl | LocalityDecl) -> None:
        match item:
            case AlgebraDecl():
                self.algebras[item.name] = build_algebra(item)
            case NPAlgebraDecl():
                self.np_tables[item.name] = build_np_table(item)
            case DerivationDecl():
                base = self.algebras[item.algebra]
                self.derivations[item.name] = (item.algebra, build_derivation(item, base))
            case LocalityDecl():
                self.localities[item.name] = (build_locality(item), item.letters)
        logger.debug("declared %s", item.name)

    def presentation(self, name: str) -> ConfPresentation:
        """The conformal algebra a name stands for; NP tables and derivations are built on demand.

        Raises:
            AxiomError: If an NP table fails its axioms or a derivation its preconditions.
        """
        if name in self.algebras:
            return self.algebras[name]
        if name not in self._derived:
            if name in self.np_tables:
                self._derived[name] = quadratic_from_np(self.np_tables[name], name=name)
            elif name in self.derivations:
                base, d = self.derivations[name]
                self._derived[name] = gelfand(self.algebras[base], d, name=name)
            else:
                msg = f"{name!r} is not a declared conformal algebra"
                raise UsageError(msg)
        return self._derived[name]

    # ── Commands ──

    def _check(self, cmd: CheckCmd) -> list[CheckResult]:
        if cmd.identity == "np_axioms":
            report = check_np_axioms(self.np_tables[cmd.target])
            return [
                CheckResult.of(
                    "np_axioms",
                    report.holds,
                    parameters={"algebra": cmd.target},
                    artifacts={
                        "failures": [
                            f"{f.axiom} {','.join(f.witness)}: {f.render_residual()}"
                            for f in report.failures
                        ]
                    },
                )
            ]
        if cmd.identity == "derivation":
            base, d = self.derivations[cmd.target]
            derivation = check_derivation(self.algebras[base], d)
            return [
                CheckResult.of(
                    "derivation",
                    derivation.holds,
                    parameters={"algebra": base, "derivation": cmd.target},
                    artifacts={
                        "failures": [
                            f"{','.join(f.arguments)}: {f.residual.render()}"
                            for f in derivation.failures
                        ]
                    },
                )
            ]
        algebra = self.presentation(cmd.target)
        which = Identity(cmd.identity)
        on_gens = check_on_generators(algebra, which)
        on_samples = check_on_samples(
            algebra, which, random.Random(self.params.seed), IDENTITY_SAMPLES
        )
        return [
            CheckResult.of(
                f"{which}_on_generators",
                not on_gens,
                parameters={"algebra": cmd.target},
                artifacts={
                    "failures": [
                        f"{','.join(f.arguments)}: {f.residual.render()}" for f in on_gens
                    ]
                },
            ),
            CheckResult.of(
                f"{which}_on_samples",
                not on_samples,
                parameters={"algebra": cmd.target, "samples": IDENTITY_SAMPLES},
                artifacts={"residuals": [f.residual.render() for f in on_samples]},
            ),
        ]

    def _locality(self, cmd: LocalityCmd) -> list[CheckResult]:
        algebra = self.presentation(cmd.algebra)
        value = table_locality(algebra, cmd.left, cmd.right)
        br = bracket(algebra, ConfElement.gen(cmd.left), ConfElement.gen(cmd.right), LAM)
        return [
            CheckResult.of(
                "locality",
                True,
                parameters={"algebra": cmd.algebra, "pair": [cmd.left, cmd.right]},
                artifacts={"bracket": br.render(), "locality": str(value)},
            )
        ]

    def _product(self, cmd: ProductCmd) -> list[CheckResult]:
        algebra = self.presentation(cmd.algebra)
        x = CoeffElement.symbol(cmd.left.gen, cmd.left.index)
        y = CoeffElement.symbol(cmd.right.gen, cmd.right.index)
        result = product(algebra, x, y)
        return [
            CheckResult.of(
                "coefficient_product",
                True,
                parameters={"algebra": cmd.algebra},
                artifacts={"product": f"{x.render()} * {y.render()} = {result.render()}"},
            )
        ]

    def _membership(self, cmd: MembershipCmd) -> ScenarioReport:
        start = time.monotonic()
        args = arg_map(cmd.args)
        _unknown_keys(args, MEMBERSHIP_KEYS, "membership")
        if "target" not in args:
            msg = "membership needs a target=fpq(...) or target=f(...) argument"
            raise UsageError(msg)
        big_m = _int("M", _single("M", args["M"])) if "M" in args else self.params.M

        target = _single("target", args["target"])
        if isinstance(target, CallValue) and target.func == "f":
            a, b, n, m, e = _call("target", target, "f", "nniii")
            h = emit_f(str(a), str(b), int(n), int(m), int(e))
        else:
            a, b, p, q, n, m, e = _call("target", target, "fpq", "nniiiii")
            h = emit_fpq(str(a), str(b), int(p), int(q), int(n), int(m), int(e))
        if "deriv" in args:
            h = derive_n(h, _int("deriv", _single("deriv", args["deriv"])))
        for value in args.get("multiplier", []):
            letter, order, index = _call("multiplier", value, "var", "nii")
            h = var(str(letter), int(order), int(index)) * h

        if "locality" in args:
            name = _name("locality", _single("locality", args["locality"]))
            if name not in self.localities:
                msg = f"{name!r} is not a declared locality function"
                raise UsageError(msg)
            loc, alphabet = self.localities[name]
            stray = sorted(set(_letters(h)) - set(alphabet))
            if stray:
                msg = f"membership target uses letters {stray} outside {name}"
                raise UsageError(msg)
        else:
            loc = LocalityFn(big_m)
            alphabet = _letters(h)

        policy = self.params.policy
        if "window" in args:
            policy = replace(policy, index_range=_range("window", _single("window", args["window"])))
        if "smax" in args:
            policy = replace(policy, s_max=_int("smax", _single("smax", args["smax"])))
        if "degree" in args:
            policy = replace(policy, degree=_int("degree", _single("degree", args["degree"])))
        w = policy.window_for(h, big_m)
        check = membership_check("membership", h, alphabet, loc, w)
        return ScenarioReport(
            scenario=_label(cmd),
            seed=self.params.seed,
            parameters={"M": big_m, "letters": list(alphabet), "locality": loc.render()},
            windows=[w],
            checks=[check],
            elapsed_ms=int((time.monotonic() - start) * 1000),
        )

    def execute(self, cmd: Command) -> list[ScenarioReport]:
        if isinstance(cmd, ScenarioCmd):
            return run_scenario(cmd.name, scenario_params(self.params, cmd))
        if isinstance(cmd, MembershipCmd):
            return [self._membership(cmd)]
        start = time.monotonic()
        match cmd:
            case CheckCmd():
                checks = self._check(cmd)
            case LocalityCmd():
                checks = self._locality(cmd)
            case ProductCmd():
                checks = self._product(cmd)
            case _:
                raise TypeError(f"not a command: {cmd!r}")
        report = ScenarioReport(
            scenario=_label(cmd),
            seed=self.params.seed,
            checks=checks,
            elapsed_ms=int((time.monotonic() - start) * 1000),
        )
        for failed in report.failed_checks():
            logger.warning("%s: check %s failed", report.scenario, failed.name)
        return [report]


def _label(cmd: Command) -> str:
    return render_item(cmd).removesuffix(";")


def _letters(h: DiffPoly) -> tuple[str, ...]:
    return tuple(sorted({v.gen for v in h.variables()}))


def run_script(script: Script, params: ScenarioParams, *, source: str = "script") -> RunReport:
    """Run every item of ``script`` in order.

    Raises:
        UsageError: On a command whose arguments violate a precondition.
    """
    runner = ScriptRunner(params)
    reports: list[ScenarioReport] = []
    for item in script.items:
        if isinstance(item, AlgebraDecl | NPAlgebraDecl | DerivationDecl | LocalityDecl):
            runner.declare(item)
        else:
            reports.extend(runner.execute(item))
    logger.info("script %s ran %d commands", source, len(script.commands()))
    return RunReport(source=source, seed=params.seed, scenarios=reports)


def run_script_file(path: str | Path, params: ScenarioParams) -> RunReport:
    """Read, parse and run a .cnv file.

    Raises:
        ParseError: If the file is not a valid script.
    """
    path = Path(path)
    script = parse_script(path.read_text(encoding="utf-8"))
    return run_script(script, params, source=f"script:{path}")
