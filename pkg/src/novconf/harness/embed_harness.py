"""Embedding scenarios: the N̄ construction checked case by case at desk scale.

Each ``run_*`` builds the distributions or polynomials of one step of the
embedding argument, verifies the identities exactly and, where the step is a
membership claim, asks the oracle for a certificate inside a finite window.
Every window used ends up in the returned ScenarioReport.
"""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass

from novconf.errors import UsageError
from novconf.models.report import CheckResult, ScenarioReport
from novconf.models.window import Window
from novconf.tools import distribution as dist
from novconf.tools.confalg import (
    DEL,
    LAM,
    MU,
    NU,
    SYMBOL_NAMES,
    ConfElement,
    Identity,
    bracket,
    build_w,
    check_on_generators,
    coeff_in,
    locality,
    n_product,
    subst_neg_partial,
    w_generator,
)
from novconf.tools.diffpoly import DiffPoly, derive, derive_n, var, weight
from novconf.tools.distribution import Distribution, Laurent, binom_power, binom_split, series
from novconf.tools.idealkit import (
    LocalityFn,
    MembershipCertificate,
    barN,
    default_window,
    emit_f,
    emit_fpq,
    generators_I,
    leibniz_fpq,
    membership,
    verify_certificate,
)

logger = logging.getLogger(__name__)

W, Z, ZETA = "w", "z", "zeta"
CASE2_VARIANTS = ("f10", "f01", "df00")
_LAM_INDEX = SYMBOL_NAMES.index("lam")


@dataclass(frozen=True)
class WindowPolicy:
    """How a membership window is chosen: explicit overrides or padding around the target."""

    index_range: tuple[int, int] | None = None
    s_max: int = 2
    degree: int | None = None
    pad_factor: int = 3

    def window_for(self, h: DiffPoly, M: int, *, max_p: int = 1) -> Window:  # noqa: N803
        w = default_window(
            h, M, pad_factor=self.pad_factor, s_max=self.s_max, max_p=max_p, degree=self.degree
        )
        if self.index_range is None:
            return w
        lo, hi = self.index_range
        return Window(
            index_lo=lo,
            index_hi=hi,
            s_max=w.s_max,
            max_p=w.max_p,
            max_multiplier_degree=w.max_multiplier_degree,
        )


DEFAULT_POLICY = WindowPolicy()


def _residual_text(d: Distribution | DiffPoly) -> str:
    return d.render() if not d.is_zero else "0"


def _finish(
    name: str,
    start: float,
    checks: list[CheckResult],
    *,
    seed: int = 0,
    parameters: dict[str, int | str | list[int] | list[str]] | None = None,
    windows: list[Window] | None = None,
) -> ScenarioReport:
    report = ScenarioReport(
        scenario=name,
        seed=seed,
        parameters=parameters or {},
        windows=windows or [],
        checks=checks,
        elapsed_ms=int((time.monotonic() - start) * 1000),
    )
    logger.info("scenario %s finished: %s (%d checks)", name, report.status, len(checks))
    for failed in report.failed_checks():
        logger.warning("scenario %s: check %s failed", name, failed.name)
    return report


def _require_m(M: int) -> None:  # noqa: N803
    if M < 1:
        msg = f"the locality bound M must be >= 1, got {M}"
        raise UsageError(msg)


# ── Series identities ──────────────────────────────────────────


def _pow(va: str, vb: str, n: int) -> Laurent:
    return binom_power(va, vb, n)


def run_series00(M: int, a: str = "a", x: str = "x", y: str = "y") -> ScenarioReport:  # noqa: N803
    """a''(ζ)x(w)y(z)(w−z)^{3M} split along (w−ζ)^M and (ζ−z)^M, then rewritten via d."""
    _require_m(M)
    start = time.monotonic()
    logger.info("scenario series00 with M=%d", M)
    checks: list[CheckResult] = []
    params: dict[str, int | str | list[int] | list[str]] = {"M": M, "letters": [a, x, y]}

    p_poly, q_poly = binom_split(W, Z, ZETA, M, M)
    split = _pow(W, ZETA, M) * p_poly + _pow(ZETA, Z, M) * q_poly - _pow(W, Z, 2 * M)
    checks.append(
        CheckResult.of(
            "binom_split",
            split.is_zero,
            parameters={"a": M, "b": M},
            artifacts={"P": p_poly.render(), "Q": q_poly.render(), "residual": split.render()},
        )
    )

    base = dist.mul(dist.mul(series(a, 2, ZETA), series(x, 0, W)), series(y, 0, Z))
    lhs = base * _pow(W, Z, 3 * M)
    first = base * _pow(W, ZETA, M) * _pow(W, Z, M) * p_poly
    second = base * _pow(ZETA, Z, M) * _pow(W, Z, M) * q_poly
    residual = lhs - (first + second)
    checks.append(
        CheckResult.of(
            "series00_split",
            residual.is_zero,
            parameters={"exponent": 3 * M},
            artifacts={"residual": _residual_text(residual)},
        )
    )

    # a''x y (w−ζ)^M (w−z)^M = (a'x(w−ζ)^M)' y (w−z)^M − a'(w−ζ)^M (x'y(w−z)^M)
    a1 = series(a, 1, ZETA)
    target = base * _pow(W, ZETA, M) * _pow(W, Z, M)
    rewrite = (
        dist.mul(dist.derive(dist.mul(a1, series(x, 0, W)) * _pow(W, ZETA, M)), series(y, 0, Z))
        * _pow(W, Z, M)
        - dist.mul(a1 * _pow(W, ZETA, M), dist.mul(series(x, 1, W), series(y, 0, Z)) * _pow(W, Z, M))
    )
    residual = target - rewrite
    checks.append(
        CheckResult.of(
            "series00_first_rewrite",
            residual.is_zero,
            artifacts={"residual": _residual_text(residual)},
        )
    )

    target = base * _pow(ZETA, Z, M) * _pow(W, Z, M)
    rewrite = (
        dist.mul(dist.derive(dist.mul(a1, series(y, 0, Z)) * _pow(ZETA, Z, M)), series(x, 0, W))
        * _pow(W, Z, M)
        - dist.mul(a1 * _pow(ZETA, Z, M), dist.mul(series(y, 1, Z), series(x, 0, W)) * _pow(W, Z, M))
    )
    residual = target - rewrite
    checks.append(
        CheckResult.of(
            "series00_second_rewrite",
            residual.is_zero,
            artifacts={"residual": _residual_text(residual)},
        )
    )
    return _finish("series00", start, checks, parameters=params)


def run_series_pq(  # noqa: N803
    M: int, p: int, q: int, a: str = "a", x: str = "x", y: str = "y"
) -> ScenarioReport:
    """a(ζ)x^(p)(w)y^(q)(z)(w−z)^{(p+q)M} split along (w−ζ)^{pM} and (ζ−z)^{qM}."""
    _require_m(M)
    if p < 0 or q < 0 or p + q < 1:
        msg = f"series_pq needs p, q >= 0 with p + q >= 1, got p={p}, q={q}"
        raise UsageError(msg)
    start = time.monotonic()
    logger.info("scenario series_pq with M=%d p=%d q=%d", M, p, q)
    checks: list[CheckResult] = []

    p_poly, q_poly = binom_split(W, Z, ZETA, p * M, q * M)
    base = dist.mul(dist.mul(series(a, 0, ZETA), series(x, p, W)), series(y, q, Z))
    lhs = base * _pow(W, Z, (p + q) * M)
    rhs = base * _pow(W, ZETA, p * M) * p_poly + base * _pow(ZETA, Z, q * M) * q_poly
    residual = lhs - rhs
    checks.append(
        CheckResult.of(
            "series_pq_split",
            residual.is_zero,
            parameters={"exponent": (p + q) * M},
            artifacts={"residual": _residual_text(residual)},
        )
    )

    a0 = series(a, 0, ZETA)
    if q == 0:
        # a x^(p) y (w−z)^{pM} = a (x^(p−1) y (w−z)^{(p−1)M})' (w−z)^M − a x^(p−1) y' (w−z)^{pM}
        inner = dist.mul(series(x, p - 1, W), series(y, 0, Z)) * _pow(W, Z, (p - 1) * M)
        rewrite = dist.mul(a0, dist.derive(inner)) * _pow(W, Z, M) - dist.mul(
            a0, dist.mul(series(x, p - 1, W), series(y, 1, Z))
        ) * _pow(W, Z, p * M)
        residual = lhs - rewrite
        checks.append(
            CheckResult.of(
                "series_p0_rewrite",
                residual.is_zero,
                artifacts={"residual": _residual_text(residual)},
            )
        )
    elif p == 0:
        inner = dist.mul(series(x, 0, W), series(y, q - 1, Z)) * _pow(W, Z, (q - 1) * M)
        rewrite = dist.mul(a0, dist.derive(inner)) * _pow(W, Z, M) - dist.mul(
            a0, dist.mul(series(x, 1, W), series(y, q - 1, Z))
        ) * _pow(W, Z, q * M)
        residual = lhs - rewrite
        checks.append(
            CheckResult.of(
                "series_0q_rewrite",
                residual.is_zero,
                artifacts={"residual": _residual_text(residual)},
            )
        )
    return _finish("series_pq", start, checks, parameters={"M": M, "p": p, "q": q})


# ── Membership cases ───────────────────────────────────────────


def membership_check(
    name: str,
    h: DiffPoly,
    gens_alphabet: tuple[str, ...],
    loc: LocalityFn,
    w: Window,
    *,
    unit_multipliers: bool = False,
) -> CheckResult:
    """Search a certificate for h within w and re-verify it from its descriptors."""
    gens = generators_I(gens_alphabet, loc, w)
    cert: MembershipCertificate | None = membership(h, gens, w)
    artifacts: dict[str, str | list[str]] = {"target": h.render(), "window": w.label()}
    if cert is None:
        artifacts["diagnostics"] = (
            f"no certificate among {len(gens)} generators of I within {w.label()}"
        )
        return CheckResult.of(name, False, artifacts=artifacts)
    ok = verify_certificate(h, cert, gens)
    if unit_multipliers:
        ok = ok and all(not e.multiplier for e in cert.entries)
    artifacts["certificate"] = cert.render_lines()
    return CheckResult.of(
        name, ok, parameters={"summands": len(cert)}, artifacts=artifacts
    )


def run_case1(  # noqa: N803
    M: int,
    k: int = 0,
    n: int = 0,
    m: int = 0,
    r: int = 2,
    policy: WindowPolicy = DEFAULT_POLICY,
    *,
    loc: LocalityFn | None = None,
    alphabet: tuple[str, str, str] = ("a", "x", "y"),
) -> ScenarioReport:
    """a^(r)(k)·f^{0,0}_{x,y}(n,m; 3M) ∈ I(N)."""
    _require_m(M)
    if r < 2:
        msg = f"case1 needs a letter of derivative order r >= 2, got r={r}"
        raise UsageError(msg)
    start = time.monotonic()
    loc = loc or LocalityFn(M)
    a, x, y = alphabet
    h = var(a, r, k) * emit_fpq(x, y, 0, 0, n, m, 3 * M)
    w = policy.window_for(h, M)
    logger.info("scenario case1 r=%d within %s", r, w.label())
    check = membership_check("case1_membership", h, alphabet, loc, w)
    return _finish(
        "case1",
        start,
        [check],
        parameters={"M": M, "k": k, "n": n, "m": m, "r": r, "letters": list(alphabet)},
        windows=[w],
    )


def run_case2(  # noqa: N803
    M: int,
    variant: str,
    n: int = 0,
    m: int = 0,
    policy: WindowPolicy = DEFAULT_POLICY,
    *,
    loc: LocalityFn | None = None,
    alphabet: tuple[str, str] = ("x", "y"),
) -> ScenarioReport:
    """The weight-zero multiplier cases: f^{1,0}, f^{0,1} and d f^{0,0}."""
    _require_m(M)
    if variant not in CASE2_VARIANTS:
        msg = f"case2 variant must be one of {CASE2_VARIANTS}, got {variant!r}"
        raise UsageError(msg)
    start = time.monotonic()
    loc = loc or LocalityFn(M)
    x, y = alphabet
    checks: list[CheckResult] = []
    windows: list[Window] = []

    if variant == "f10":
        exponent = loc(x, y)
        lhs = emit_fpq(x, y, 1, 0, n, m, exponent)
        rhs = emit_f(x, y, n, m, exponent)
        checks.append(
            CheckResult.of(
                "f10_equals_f",
                lhs == rhs,
                parameters={"exponent": exponent},
                artifacts={"f10": lhs.render(), "residual": _residual_text(lhs - rhs)},
            )
        )
    elif variant == "f01":
        h = emit_fpq(x, y, 0, 1, n, m, M)
        reindexed = emit_f(y, x, m + M, n - M, M) * (-1) ** M
        checks.append(
            CheckResult.of(
                "f01_reindex",
                h == reindexed,
                parameters={"exponent": M},
                artifacts={"f01": h.render(), "reindexed": reindexed.render()},
            )
        )
        w = policy.window_for(h, M).model_copy(update={"max_multiplier_degree": 0})
        windows.append(w)
        checks.append(
            membership_check("f01_membership", h, alphabet, loc, w, unit_multipliers=True)
        )
    else:
        exponent = 3 * M
        identity = leibniz_fpq(x, y, 0, 0, n, m, exponent)
        checks.append(
            CheckResult.of(
                "df00_leibniz_common_exponent",
                identity.holds,
                parameters={"exponent": exponent},
                artifacts={"residual": _residual_text(identity.residual)},
            )
        )
        h = derive(emit_fpq(x, y, 0, 0, n, m, exponent))
        w = policy.window_for(h, M)
        windows.append(w)
        checks.append(membership_check("df00_membership", h, alphabet, loc, w))
    return _finish(
        "case2",
        start,
        checks,
        parameters={"M": M, "variant": variant, "n": n, "m": m, "letters": list(alphabet)},
        windows=windows,
    )


def case3_multiplier(rng: random.Random, letter: str, target_weight: int) -> DiffPoly:
    """A product of −target_weight letters letter(k) with k drawn from [−1, 1]."""
    if target_weight >= 0:
        msg = f"case3 multipliers have negative weight, got {target_weight}"
        raise UsageError(msg)
    u = DiffPoly.const(1)
    for _ in range(-target_weight):
        u = u * var(letter, 0, rng.randint(-1, 1))
    return u


def run_case3(  # noqa: N803
    M: int,
    p: int,
    q: int,
    l: int,  # noqa: E741
    n: int = 0,
    m: int = 0,
    policy: WindowPolicy = DEFAULT_POLICY,
    *,
    seed: int = 0,
    multiplier: DiffPoly | None = None,
    loc: LocalityFn | None = None,
    alphabet: tuple[str, str, str] = ("a", "x", "y"),
) -> ScenarioReport:
    """u·d^l f^{p,q}_{x,y}(n,m; N̄) ∈ I(N) for a multiplier u of weight 1−p−q−l."""
    _require_m(M)
    if min(p, q, l) < 0 or p + q + l < 2:
        msg = f"case3 needs p, q, l >= 0 with p + q + l >= 2, got {(p, q, l)}"
        raise UsageError(msg)
    start = time.monotonic()
    loc = loc or LocalityFn(M)
    a, x, y = alphabet
    exponent = barN(p, q, M, loc(x, y))
    u = multiplier if multiplier is not None else case3_multiplier(random.Random(seed), a, 1 - p - q - l)
    h = u * derive_n(emit_fpq(x, y, p, q, n, m, exponent), l)
    w = policy.window_for(h, M, max_p=p + q + 1)
    logger.info("scenario case3 (p,q,l)=(%d,%d,%d) within %s", p, q, l, w.label())

    checks = [
        CheckResult.of(
            "case3_weight",
            weight(h) == -1,
            parameters={"exponent": exponent},
            artifacts={"multiplier": u.render(), "weight": str(weight(h))},
        ),
        membership_check("case3_membership", h, alphabet, loc, w),
    ]
    return _finish(
        "case3",
        start,
        checks,
        seed=seed,
        parameters={"M": M, "p": p, "q": q, "l": l, "n": n, "m": m, "letters": list(alphabet)},
        windows=[w],
    )


# ── The non-special algebra W ──────────────────────────────────


def run_counterexample(kmax: int) -> ScenarioReport:
    """W is Novikov conformal, yet (v_k ∘₀ x) has locality 2k+1 with x."""
    if kmax < 1:
        msg = f"kmax must be >= 1, got {kmax}"
        raise UsageError(msg)
    start = time.monotonic()
    algebra = build_w(kmax)
    logger.info("scenario counterexample on %s", algebra.name)
    checks: list[CheckResult] = []

    triples = len(algebra.generators) ** 3
    for which in (Identity.RSYM_NOVIKOV, Identity.LCOM_NOVIKOV):
        failures = check_on_generators(algebra, which)
        checks.append(
            CheckResult.of(
                f"{which}_on_generators",
                not failures,
                parameters={"triples": triples},
                artifacts={
                    "failures": [
                        f"{','.join(f.arguments)}: {f.residual.render()}" for f in failures
                    ]
                },
            )
        )

    x = algebra.element("x")
    localities: list[int] = []
    for k in range(kmax + 1):
        vk = w_generator(k)
        v = algebra.element(vk)
        expected = ConfElement.gen(vk, (-MU) ** k * (DEL + LAM + MU) ** k)
        inner = bracket(algebra, v, x, LAM)
        lhs = bracket(algebra, inner, x, LAM + MU)
        rhs = subst_neg_partial(bracket(algebra, inner, x, NU), MU)
        checks.append(
            CheckResult.of(
                f"rsym_terms_k{k}",
                lhs == expected and rhs == expected,
                parameters={"k": k},
                artifacts={"left": lhs.render(), "right": rhs.render()},
            )
        )

        zeroth = n_product(algebra, v, x, 0)
        value = bracket(algebra, zeroth, x, LAM)
        loc = locality(algebra, zeroth, x)
        localities.append(loc)
        lead = coeff_in(value.coeff(vk), _LAM_INDEX, k)
        ok = (
            value == ConfElement.gen(vk, (-LAM) ** k * (DEL + LAM) ** k)
            and loc == 2 * k + 1
            and lead == (-1) ** k * DEL**k
            and bool(lead)
        )
        checks.append(
            CheckResult.of(
                f"obstruction_k{k}",
                ok,
                parameters={"k": k, "locality": loc},
                artifacts={"bracket": value.render(), "lam_power_coeff": ConfElement.gen(vk, lead).render()},
            )
        )

    expected_seq = [2 * k + 1 for k in range(kmax + 1)]
    checks.append(
        CheckResult.of(
            "locality_sequence",
            localities == expected_seq,
            parameters={"localities": localities},
            artifacts={"locality_sequence": ",".join(str(v) for v in localities)},
        )
    )
    return _finish("counterexample", start, checks, parameters={"kmax": kmax})
