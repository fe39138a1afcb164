"""Reduced-size invariant suite behind the `selfcheck` CLI command.

Each check exercises one module invariant at sizes small enough for the
whole suite to finish in well under ten minutes, with tolerances scaled
to the requested digits.  A deliberate-fault hook (`corrupt_moments`)
injects a relative 1e-10 error into the copy of the moment table seen by
the determinant path only, which the determinant / kappa-product
cross-check must catch.
"""

from __future__ import annotations

import dataclasses
import random
from dataclasses import dataclass

from mpmath import mp, mpf

from . import asymptotics, mc_gue, specfun
from .hankel import char_poly_average_log, hankel_log_determinant, selberg_log
from .orthopoly import eval_basis, kappa_logproduct, recurrence_from_moments
from .precision import DEFAULT_CTX, PrecisionContext
from .weights import WeightSpec, moment_table, symmetric_moment_oracle


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


def _tol(ctx: PrecisionContext, drop: int) -> mpf:
    return mpf(10) ** (-(ctx.digits - drop))


def run_selfcheck(
    ctx: PrecisionContext = DEFAULT_CTX, corrupt_moments: bool = False
) -> list[CheckResult]:
    checks = [
        _check_gamma_recurrence,
        _check_digamma_derivative,
        _check_c_two_forms,
        _check_barnes_recurrence,
        _check_g_half_identity,
        _check_moment_oracle,
        _check_moment_odd_symmetry,
        _check_selberg,
        lambda c: _check_det_vs_kappa(c, corrupt_moments),
        _check_christoffel_darboux,
        _check_g_function,
        _check_szego_product,
        _check_theorem1_direction,
        _check_johansson_direction,
        _check_mc_reproducible,
    ]
    results = []
    for check in checks:
        try:
            results.append(check(ctx))
        except Exception as exc:  # a crash is a failed check, not a crash of the suite
            name = getattr(check, "__name__", "<lambda>").removeprefix("_check_")
            if name == "<lambda>":
                name = "determinant_vs_kappa_product"
            results.append(CheckResult(name=name, ok=False, detail=repr(exc)))
    return results


def _check_gamma_recurrence(ctx) -> CheckResult:
    with mp.workdps(ctx.work_dps):
        worst = mp.mpf(0)
        for x in (mpf("0.3"), mpf("1.7"), mpf("9.5")):
            lhs = specfun.log_gamma(x + 1, ctx) - specfun.log_gamma(x, ctx)
            worst = max(worst, abs(lhs - mp.log(x)))
        ok = worst < _tol(ctx, ctx.guard_digits)
    return CheckResult("gamma_recurrence", ok, f"worst |resid| = {mp.nstr(worst, 3)}")


def _check_digamma_derivative(ctx) -> CheckResult:
    with mp.workdps(2 * ctx.work_dps):
        h = mpf(10) ** (-(ctx.digits // 3))
        x = mpf("1.7")
        fd = (specfun.log_gamma(x + h, ctx) - specfun.log_gamma(x - h, ctx)) / (2 * h)
        resid = abs(fd - specfun.digamma(x, ctx))
        ok = resid < mpf(10) ** (-(ctx.digits // 3))
    return CheckResult("digamma_is_dloggamma", ok, f"|resid| = {mp.nstr(resid, 3)}")


def _check_c_two_forms(ctx) -> CheckResult:
    with mp.workdps(ctx.work_dps):
        worst = mp.mpf(0)
        for a in (mpf("-0.4"), mpf("0.25"), mpf(1)):
            d = abs(
                specfun.log_C_integral_form(a, ctx) - specfun.log_C_barnes_form(a, ctx)
            )
            worst = max(worst, d)
        ok = worst < _tol(ctx, 2 * ctx.guard_digits)
    return CheckResult("C_alpha_two_forms", ok, f"worst |diff| = {mp.nstr(worst, 3)}")


def _check_barnes_recurrence(ctx) -> CheckResult:
    with mp.workdps(ctx.work_dps):
        worst = abs(specfun.log_barnes_G(1, ctx))
        for x in (mpf("0.5"), mpf("1.5"), mpf(3), mpf("4.5")):
            resid = abs(
                specfun.log_barnes_G(x + 1, ctx)
                - specfun.log_gamma(x, ctx)
                - specfun.log_barnes_G(x, ctx)
            )
            worst = max(worst, resid)
        ok = worst < _tol(ctx, 2 * ctx.guard_digits)
    return CheckResult("barnes_G_recurrence", ok, f"worst |resid| = {mp.nstr(worst, 3)}")


def _check_g_half_identity(ctx) -> CheckResult:
    with mp.workdps(ctx.work_dps):
        zp = specfun.zeta_prime_minus1(ctx).value
        lhs = 2 * specfun.log_barnes_G(mpf(1) / 2, ctx)
        rhs = mp.log(2) / 12 - mp.log(mp.sqrt(mp.pi)) + 3 * zp
        resid = abs(lhs - rhs)
        ok = resid < _tol(ctx, 2 * ctx.guard_digits)
    return CheckResult("barnes_G_half_identity", ok, f"|resid| = {mp.nstr(resid, 3)}")


def _check_moment_oracle(ctx) -> CheckResult:
    spec = WeightSpec(lambdas=[0.0], alphas=["0.5"], n=2)
    table = moment_table(spec, 10, ctx)
    with mp.workdps(ctx.work_dps):
        worst = mp.mpf(0)
        for k in range(0, 11, 2):
            oracle = symmetric_moment_oracle(spec.alphas[0], k, ctx)
            worst = max(worst, abs(table.values[k] - oracle) / oracle)
        ok = worst < _tol(ctx, ctx.guard_digits)
    return CheckResult("moments_vs_gamma_oracle", ok, f"worst rel = {mp.nstr(worst, 3)}")


def _check_moment_odd_symmetry(ctx) -> CheckResult:
    spec = WeightSpec(lambdas=[0.0], alphas=["0.5"], n=2)
    table = moment_table(spec, 9, ctx)
    with mp.workdps(ctx.work_dps):
        worst = mp.mpf(0)
        for k in range(1, 10, 2):
            worst = max(worst, abs(table.values[k]) / table.abs_scales[k])
        ok = worst < 10 * max(table.achieved_tol, 10.0 ** (-table.work_dps + 5))
    return CheckResult("moments_odd_symmetry", ok, f"worst scaled = {mp.nstr(worst, 3)}")


def _check_selberg(ctx) -> CheckResult:
    spec = WeightSpec(lambdas=[0.0], alphas=[0.0], n=8)
    table = moment_table(spec, 14, ctx)
    with mp.workdps(ctx.work_dps):
        worst = mp.mpf(0)
        for n in range(1, 9):
            d = hankel_log_determinant(table, n, ctx).log_value
            worst = max(worst, abs(d - selberg_log(n, ctx)))
        ok = worst < _tol(ctx, 2 * ctx.guard_digits)
    return CheckResult("selberg_exactness", ok, f"worst |diff| = {mp.nstr(worst, 3)}")


def _check_det_vs_kappa(ctx, corrupt: bool) -> CheckResult:
    n = 6
    spec = WeightSpec(lambdas=[-0.4, 0.3], alphas=[0.5, 0.25], n=n)
    table = moment_table(spec, 2 * n, ctx)
    lu_table = table
    if corrupt:
        values = list(table.values)
        with mp.workdps(table.work_dps):
            values[4] *= 1 + mpf(10) ** (-10)
        lu_table = dataclasses.replace(table, values=tuple(values))
    det = hankel_log_determinant(lu_table, n, ctx)
    rec = recurrence_from_moments(table, n, ctx)
    with mp.workdps(ctx.work_dps):
        diff = abs(det.log_value - kappa_logproduct(rec, n))
        ok = diff < mpf(10) ** (-(ctx.digits // 2))
    return CheckResult(
        "determinant_vs_kappa_product", ok, f"|diff| = {mp.nstr(diff, 3)}"
    )


def _check_christoffel_darboux(ctx) -> CheckResult:
    n = 8
    spec = WeightSpec(lambdas=[-0.4, 0.3], alphas=[0.5, 0.25], n=n)
    table = moment_table(spec, 2 * n, ctx)
    rec = recurrence_from_moments(table, n, ctx)
    rng = random.Random(20240917)
    with mp.workdps(ctx.work_dps):
        span = 3 * mp.sqrt(2 * mp.mpf(n))
        worst = mp.mpf(0)
        for _ in range(6):
            x = mpf(rng.uniform(-1, 1)) * span
            vals, ders = eval_basis(rec, x, n)
            lhs = sum(vals[j] ** 2 for j in range(n))
            rhs = rec.b[n - 1] * (ders[n] * vals[n - 1] - vals[n] * ders[n - 1])
            worst = max(worst, abs(lhs - rhs) / abs(rhs))
        ok = worst < mpf(10) ** (-(ctx.digits // 3))
    return CheckResult("christoffel_darboux", ok, f"worst rel = {mp.nstr(worst, 3)}")


def _check_g_function(ctx) -> CheckResult:
    gctx = PrecisionContext(digits=30)
    with mp.workdps(gctx.work_dps):
        worst = mp.mpf(0)
        for x in (mpf("-0.5"), mpf("0.1"), mpf("0.7")):
            gp = asymptotics.g_boundary(x, "+", gctx)
            gm = asymptotics.g_boundary(x, "-", gctx)
            r1 = abs(gp + gm - 2 * x * x - asymptotics.lagrange_constant())
            r2 = abs(gp - gm - 2j * mp.pi * asymptotics.equilibrium_tail(x))
            worst = max(worst, r1, r2)
        ok = worst < mpf("1e-8")
    return CheckResult("g_function_boundary", ok, f"worst |resid| = {mp.nstr(worst, 3)}")


def _check_szego_product(ctx) -> CheckResult:
    spec = WeightSpec(lambdas=[-0.4, 0.3], alphas=[0.5, 0.25], n=4)
    with mp.workdps(ctx.work_dps):
        x = mpf("0.1")
        prod = asymptotics.szego_boundary(spec, x, "+") * asymptotics.szego_boundary(
            spec, x, "-"
        )
        omega = mp.mpf(1)
        for lam, alpha in zip(spec.lambdas, spec.alphas):
            omega *= abs(x - lam) ** (2 * alpha)
        resid = abs(prod - omega)
        ok = resid < _tol(ctx, 2 * ctx.guard_digits)
    return CheckResult("szego_boundary_product", ok, f"|resid| = {mp.nstr(resid, 3)}")


def _check_theorem1_direction(ctx) -> CheckResult:
    errs = []
    for n in (8, 16):
        spec = WeightSpec(lambdas=[0.3], alphas=[0.5], n=n)
        exact = char_poly_average_log(spec, ctx)
        asym = asymptotics.theorem1_log(spec, ctx).log_value
        with mp.workdps(ctx.work_dps):
            errs.append(abs(exact - asym))
    ok = all(e < mpf("0.1") for e in errs)
    return CheckResult(
        "theorem1_small_error",
        ok,
        f"e_8 = {mp.nstr(errs[0], 3)}, e_16 = {mp.nstr(errs[1], 3)}",
    )


def _check_johansson_direction(ctx) -> CheckResult:
    devs = []
    for n in (4, 8):
        spec = WeightSpec(lambdas=[1.5], alphas=[0.5], n=n)
        exact = char_poly_average_log(spec, ctx)
        asym = asymptotics.johansson_log(spec.lambdas[0], spec.alphas[0], n, ctx)
        with mp.workdps(ctx.work_dps):
            devs.append(abs(exact - asym.log_value) / n)
    ok = devs[1] < devs[0]
    return CheckResult(
        "johansson_error_decay",
        ok,
        f"per-n dev {mp.nstr(devs[0], 3)} -> {mp.nstr(devs[1], 3)}",
    )


def _check_mc_reproducible(ctx) -> CheckResult:
    spec = WeightSpec(lambdas=[0.2], alphas=[1.0], n=2)
    e1 = mc_gue.mc_average_log(spec, 2000, seed=99)
    e2 = mc_gue.mc_average_log(spec, 2000, seed=99)
    ok = e1 == e2
    return CheckResult("mc_reproducibility", ok, f"mean_log = {e1.mean_log:.6f}")
