"""Built-in scenarios runnable from the CLI and from scripts.

A scenario name maps to a runner taking ScenarioParams and returning one or
more ScenarioReports. Parameters left unset fall back to the documented
sweeps (all Case-2 variants, the five Case-3 triples, and so on).
"""

from __future__ import annotations

import itertools
import logging
import random
import time
from collections.abc import Callable
from dataclasses import dataclass, field, replace
from fractions import Fraction

from novconf.errors import AxiomError, UsageError
from novconf.harness.conformal_terms import (
    check_weight_criterion,
    check_wt_conformal,
    emit_generateK_relation,
    sample_terms,
    verify_generateK,
)
from novconf.harness.embed_harness import (
    CASE2_VARIANTS,
    DEFAULT_POLICY,
    WindowPolicy,
    run_case1,
    run_case2,
    run_case3,
    run_counterexample,
    run_series00,
    run_series_pq,
)
from novconf.models.report import CheckResult, ScenarioReport
from novconf.models.run_config import RunConfig
from novconf.tools.coeffalg import (
    CoeffElement,
    CoeffIdentity,
    check_coeff_identities,
    check_locality_relations,
    check_residue_formula,
    induced_derivation,
    product,
    product_locality,
    sample_coefficients,
)
from novconf.tools.confalg import (
    ConfPresentation,
    DerivationTable,
    Identity,
    build_w,
    check_derivation,
    check_np_axioms,
    check_on_generators,
    check_on_samples,
    current_algebra,
    euler_plus_partial,
    gelfand,
    one_dim_np,
    quadratic_from_np,
    w_generator,
)
from novconf.tools.confalg import (
    ConfElement as Conf,
)
from novconf.tools.exactnum import falling, gen_binomial
from novconf.tools.idealkit import barN

logger = logging.getLogger(__name__)

CASE3_TRIPLES = ((1, 1, 0), (2, 0, 0), (0, 2, 0), (0, 0, 2), (1, 0, 1))
EMBEDDING_CASES = ("case1", "case2", "case3")


@dataclass(frozen=True)
class ScenarioParams:
    M: int = 1
    kmax: int = 8
    seed: int = 0
    case: str | None = None
    r: int | None = None
    p: int | None = None
    q: int | None = None
    l: int | None = None  # noqa: E741
    variant: str | None = None
    policy: WindowPolicy = field(default_factory=WindowPolicy)

    @classmethod
    def from_run_config(cls, config: RunConfig) -> ScenarioParams:
        policy = WindowPolicy(
            index_range=config.window,
            s_max=config.s_max if config.s_max is not None else DEFAULT_POLICY.s_max,
            degree=config.degree,
            pad_factor=config.pad_factor,
        )
        return cls(
            M=config.M,
            kmax=config.kmax,
            seed=config.seed,
            case=config.case,
            r=config.r,
            p=config.p,
            q=config.q,
            l=config.l,
            variant=config.variant,
            policy=policy,
        )


Runner = Callable[[ScenarioParams], list[ScenarioReport]]


@dataclass(frozen=True)
class ScenarioSpec:
    name: str
    summary: str
    runner: Runner


# ── Embedding scenarios ────────────────────────────────────────


def _series00(params: ScenarioParams) -> list[ScenarioReport]:
    return [run_series00(params.M)]


def _series_pq(params: ScenarioParams) -> list[ScenarioReport]:
    if params.p is not None or params.q is not None:
        return [run_series_pq(params.M, params.p or 0, params.q or 0)]
    pairs = [(p, q) for p, q in itertools.product(range(4), repeat=2) if 1 <= p + q <= 3]
    return [run_series_pq(params.M, p, q) for p, q in pairs]


def _case1(params: ScenarioParams) -> list[ScenarioReport]:
    if params.r is not None:
        return [run_case1(params.M, r=params.r, policy=params.policy)]
    return [
        run_case1(params.M, r=2, policy=params.policy),
        run_case1(params.M, k=0, n=1, m=-1, r=3, policy=params.policy),
    ]


def _case2(params: ScenarioParams) -> list[ScenarioReport]:
    variants = (params.variant,) if params.variant else CASE2_VARIANTS
    return [run_case2(params.M, v, policy=params.policy) for v in variants]


def _case3(params: ScenarioParams) -> list[ScenarioReport]:
    chosen = (params.p, params.q, params.l)
    if any(v is not None for v in chosen):
        p, q, l = (v or 0 for v in chosen)  # noqa: E741
        triples: tuple[tuple[int, int, int], ...] = ((p, q, l),)
    else:
        triples = CASE3_TRIPLES
    return [
        run_case3(params.M, p, q, l, policy=params.policy, seed=params.seed)
        for p, q, l in triples  # noqa: E741
    ]


def _embedding(params: ScenarioParams) -> list[ScenarioReport]:
    cases = (params.case,) if params.case else EMBEDDING_CASES
    runners = {"case1": _case1, "case2": _case2, "case3": _case3}
    out: list[ScenarioReport] = []
    for case in cases:
        if case not in runners:
            msg = f"--case must be one of {EMBEDDING_CASES}, got {case!r}"
            raise UsageError(msg)
        out.extend(runners[case](params))
    return out


def _counterexample(params: ScenarioParams) -> list[ScenarioReport]:
    return [run_counterexample(params.kmax)]


# ── Algebra scenarios ──────────────────────────────────────────


def _identity_checks(
    algebra: ConfPresentation, rng: random.Random, samples: int
) -> list[CheckResult]:
    checks = []
    for which in (Identity.RSYM_NOVIKOV, Identity.LCOM_NOVIKOV):
        on_gens = check_on_generators(algebra, which)
        checks.append(
            CheckResult.of(
                f"{which}_on_generators",
                not on_gens,
                parameters={"algebra": algebra.name},
                artifacts={"failures": [",".join(f.arguments) for f in on_gens]},
            )
        )
        on_samples = check_on_samples(algebra, which, rng, samples)
        checks.append(
            CheckResult.of(
                f"{which}_on_samples",
                not on_samples,
                parameters={"algebra": algebra.name, "samples": samples},
                artifacts={"residuals": [f.residual.render() for f in on_samples]},
            )
        )
    return checks


def _table_lines(algebra: ConfPresentation) -> list[str]:
    return [
        f"({g} lam {h}) = {algebra.entry(g, h).render()}" for g, h in algebra.nonzero_pairs()
    ]


def _finish(
    name: str, start: float, checks: list[CheckResult], params: ScenarioParams, **parameters: int | str
) -> ScenarioReport:
    report = ScenarioReport(
        scenario=name,
        seed=params.seed,
        parameters=dict(parameters),
        checks=checks,
        elapsed_ms=int((time.monotonic() - start) * 1000),
    )
    logger.info("scenario %s finished: %s", name, report.status)
    return report


def _quadratic_np(params: ScenarioParams) -> list[ScenarioReport]:
    """The 1-dim Novikov–Poisson algebra e∘e = e*e = e and its bracket (1+λ)e."""
    start = time.monotonic()
    rng = random.Random(params.seed)
    table = one_dim_np()
    axioms = check_np_axioms(table)
    checks = [
        CheckResult.of(
            "np_axioms",
            axioms.holds,
            artifacts={"failures": [f"{f.axiom} {f.witness}" for f in axioms.failures]},
        )
    ]
    algebra = quadratic_from_np(table)
    checks.extend(_identity_checks(algebra, rng, 50))

    window = range(-4, 5)
    bad = []
    for n, m in itertools.product(window, repeat=2):
        got = product(algebra, CoeffElement.symbol("e", n), CoeffElement.symbol("e", m))
        want = CoeffElement.symbol("e", n + m) + CoeffElement.symbol("e", n + m - 1, n)
        if got != want:
            bad.append(f"e({n})e({m}) = {got.render()}")
    checks.append(
        CheckResult.of(
            "coefficient_product",
            not bad,
            parameters={"window": [window.start, window.stop - 1]},
            artifacts={"mismatches": bad},
        )
    )

    report = check_locality_relations(algebra, "e", "e", 2, window)
    checks.append(
        CheckResult.of(
            "locality_relation",
            report.holds,
            parameters={"exponent": 2, "pairs": report.checked},
            artifacts={"witnesses": [f"({w.n},{w.m}): {w.value.render()}" for w in report.witnesses]},
        )
    )

    pool = sample_coefficients(algebra, rng, 300)
    triples = [(pool[i], pool[i + 1], pool[i + 2]) for i in range(0, 300, 3)]
    novikov = check_coeff_identities(algebra, CoeffIdentity.NOVIKOV, triples)
    checks.append(
        CheckResult.of(
            "coefficient_novikov",
            novikov.holds,
            parameters={"samples": novikov.samples},
            artifacts={"residuals": [f.residual.render() for f in novikov.failures]},
        )
    )
    return [_finish("quadratic_np", start, checks, params, algebra=algebra.name)]


def _gelfand_demo(params: ScenarioParams) -> list[ScenarioReport]:
    """Current algebra on span{one, t}: the naive D(t) = one fails, ∂ + Euler works."""
    start = time.monotonic()
    rng = random.Random(params.seed)
    cur = current_algebra()
    commutative = check_on_generators(cur, Identity.COMMUTATIVE)
    checks = [CheckResult.of("commutative", not commutative, parameters={"algebra": cur.name})]

    naive = DerivationTable(name="t_to_one", images={"t": Conf.gen("one")})
    naive_report = check_derivation(cur, naive)
    try:
        gelfand(cur, naive)
        rejected = False
    except AxiomError:
        rejected = True
    checks.append(
        CheckResult.of(
            "naive_derivation_rejected",
            not naive_report.holds and rejected,
            artifacts={
                "leibniz_residuals": [
                    f"{','.join(f.arguments)}: {f.residual.render()}" for f in naive_report.failures
                ]
            },
        )
    )

    d = euler_plus_partial(cur, {"one": 0, "t": 1})
    checks.append(CheckResult.of("derivation", check_derivation(cur, d).holds))
    induced = gelfand(cur, d)
    checks.append(
        CheckResult.of("gelfand_table", True, artifacts={"table": _table_lines(induced)})
    )
    checks.extend(_identity_checks(induced, rng, 50))
    return [_finish("gelfand_demo", start, checks, params, algebra=induced.name)]


def _w_product_formula(k: int, n: int, m: int) -> CoeffElement:
    """v_k(n)·x(m) = Σ_s C(n,s)·s!·C(k,s)·(∂^{k−s} v_k)(n+m−s), injected by hand."""
    total = CoeffElement()
    for s in range(k + 1):
        scale = gen_binomial(n, s) * falling(k, s)
        index = n + m - s
        j = k - s
        total = total + CoeffElement.symbol(
            w_generator(k), index - j, Fraction(scale * (-1) ** j * falling(index, j))
        )
    return total


def _coeff_locality(params: ScenarioParams) -> list[ScenarioReport]:
    """Coefficient algebras: products, locality relations, residues, induced derivations."""
    start = time.monotonic()
    rng = random.Random(params.seed)
    kmax = 3
    w = build_w(kmax)
    window = range(-3, 4)
    checks: list[CheckResult] = []

    bad = []
    for k in range(kmax + 1):
        for n, m in itertools.product(window, repeat=2):
            got = product(w, CoeffElement.symbol(w_generator(k), n), CoeffElement.symbol("x", m))
            if got != _w_product_formula(k, n, m):
                bad.append(f"v{k}({n})x({m}) = {got.render()}")
    checks.append(
        CheckResult.of(
            "w_coefficient_products",
            not bad,
            parameters={"kmax": kmax, "window": [window.start, window.stop - 1]},
            artifacts={"mismatches": bad},
        )
    )

    witnesses = []
    for k in range(kmax + 1):
        report = check_locality_relations(w, w_generator(k), "x", k + 1, window)
        witnesses.extend(f"v{k}: ({wt.n},{wt.m})" for wt in report.witnesses)
    checks.append(
        CheckResult.of("w_locality_relations", not witnesses, artifacts={"witnesses": witnesses})
    )

    residues = []
    for k in range(kmax + 1):
        for n in range(k + 1):
            for m in window:
                if not check_residue_formula(w, w_generator(k), "x", n, m).is_zero:
                    residues.append(f"v{k} o{n} x at {m}")
    checks.append(
        CheckResult.of("residue_formula", not residues, artifacts={"failures": residues})
    )

    dong = {}
    for k in range(kmax + 1):
        got = product_locality(w, w_generator(k), "x", "x")
        dong[k] = got == {n: 2 * k - n + 1 for n in range(k + 1)}
    checks.append(
        CheckResult.of(
            "product_locality",
            all(dong.values()),
            artifacts={"failing_k": [str(k) for k, ok in dong.items() if not ok]},
        )
    )

    cur = current_algebra()
    d = euler_plus_partial(cur, {"one": 0, "t": 1})
    pool = sample_coefficients(cur, rng, 40)
    leibniz = []
    for x, y in zip(pool[::2], pool[1::2], strict=True):
        lhs = induced_derivation(cur, d, product(cur, x, y))
        rhs = product(cur, induced_derivation(cur, d, x), y) + product(
            cur, x, induced_derivation(cur, d, y)
        )
        if lhs != rhs:
            leibniz.append(f"{x.render()} * {y.render()}")
    checks.append(
        CheckResult.of(
            "induced_derivation",
            not leibniz,
            parameters={"samples": len(pool) // 2},
            artifacts={"failures": leibniz},
        )
    )
    return [_finish("coeff_locality", start, checks, params, algebra=w.name)]


def _generate_k(params: ScenarioParams) -> list[ScenarioReport]:
    """Generating relations of K against derivative families, and the weight −1 criterion."""
    start = time.monotonic()
    rng = random.Random(params.seed)
    checks: list[CheckResult] = []
    for p, q, d in itertools.product(range(2), range(2), range(3)):
        n = barN(p, q, params.M, params.M)
        relation = emit_generateK_relation("a", "b", p, q, d, n)
        bad = verify_generateK(relation, range(-1, 2))
        wt = check_wt_conformal(relation.as_term())
        checks.append(
            CheckResult.of(
                f"generate_k_p{p}_q{q}_d{d}",
                not bad and wt == p + q + d - 2,
                parameters={"n": n, "terms": len(relation.terms)},
                artifacts={"relation": relation.render(), "weight": str(wt)},
            )
        )
    terms = sample_terms(rng, ("a", "b"), 60)
    failures = check_weight_criterion(terms)
    tested = sum(1 for t in terms if check_wt_conformal(t) == -1)
    checks.append(
        CheckResult.of(
            "weight_criterion",
            not failures,
            parameters={"samples": len(terms), "weight_minus_one": tested},
            artifacts={"failures": [f"{f.term.render()}: {f.reason}" for f in failures]},
        )
    )
    return [_finish("generate_k", start, checks, params, M=params.M)]


SCENARIOS: dict[str, ScenarioSpec] = {
    spec.name: spec
    for spec in (
        ScenarioSpec("series00", "a''x y (w-z)^3M split and rewritten via d", _series00),
        ScenarioSpec("series_pq", "a x^(p) y^(q) (w-z)^((p+q)M) split, p0/0q rewritings", _series_pq),
        ScenarioSpec("case1", "a^(r)(k) f^{0,0}(n,m; 3M) in I(N), r >= 2", _case1),
        ScenarioSpec("case2", "f^{1,0}, f^{0,1} and d f^{0,0} in I(N)", _case2),
        ScenarioSpec("case3", "u d^l f^{p,q}(n,m; barN) in I(N), p+q+l >= 2", _case3),
        ScenarioSpec("counterexample", "W is Novikov conformal but not special", _counterexample),
        ScenarioSpec("quadratic_np", "1-dim Novikov-Poisson algebra and its coefficient algebra", _quadratic_np),
        ScenarioSpec("gelfand_demo", "C^(D) for the current algebra with D = del + Euler", _gelfand_demo),
        ScenarioSpec("coeff_locality", "coefficient products, locality relations, residues", _coeff_locality),
        ScenarioSpec("generate_k", "generating relations of K and the weight -1 criterion", _generate_k),
    )
}

ALIASES: dict[str, Runner] = {"embedding": _embedding}


def list_scenarios() -> str:
    width = max(len(name) for name in SCENARIOS)
    return "\n".join(f"{name.ljust(width)}  {spec.summary}" for name, spec in SCENARIOS.items())


def run_scenario(name: str, params: ScenarioParams | None = None) -> list[ScenarioReport]:
    """Run a built-in scenario (or the ``embedding`` dispatcher) by name.

    Raises:
        UsageError: If the name is unknown or a parameter violates a case precondition.
    """
    params = params or ScenarioParams()
    if name in SCENARIOS:
        runner = SCENARIOS[name].runner
    elif name in ALIASES:
        runner = ALIASES[name]
    else:
        known = ", ".join([*SCENARIOS, *ALIASES])
        msg = f"unknown scenario {name!r}; known: {known}"
        raise UsageError(msg)
    logger.info("running scenario %s", name)
    return runner(params)


def with_overrides(params: ScenarioParams, **changes: object) -> ScenarioParams:
    return replace(params, **changes)  # type: ignore[arg-type]
