"""Extended-precision special functions for the asymptotic formulas.

log-Gamma and digamma are delegated to mpmath (argument-shifted Stirling
series under the hood).  Barnes G is computed from the classical identity

    int_0^z lnGamma(x+1) dx = (z/2) ln 2pi - z(z+1)/2
                              + z lnGamma(z+1) - ln G(z+1)

by Gauss-Legendre quadrature of lnGamma, so the two routes to the
constant

    C(a) = Gamma(a+1/2)^(-2a) exp(2 int_0^a lnGamma(s+1/2) ds + a^2)
         = 2^(2a^2) G(a+1)^2 / G(2a+1)

stay genuinely independent and their agreement is a nontrivial check.
zeta'(-1) is computed by mpmath's zeta (Euler-Maclaurin / functional
equation), never from the G(1/2) identity it is tested against.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp, mpf

from .exceptions import InternalConsistencyError, InvalidSpecError, PrecisionUnreachableError
from .precision import DEFAULT_CTX, PrecisionContext


@dataclass(frozen=True)
class SpecialConstant:
    name: str
    value: mpf
    derivation: str


def _require_positive(x, what: str):
    if not x > 0:
        raise InvalidSpecError(f"{what} requires a positive argument, got {x}")


def log_gamma(x, ctx: PrecisionContext = DEFAULT_CTX) -> mpf:
    """ln Gamma(x) for x > 0."""
    with mp.workdps(ctx.work_dps):
        x = mp.mpf(x)
        _require_positive(x, "log_gamma")
        return mp.loggamma(x)


def digamma(x, ctx: PrecisionContext = DEFAULT_CTX) -> mpf:
    """Gamma'(x)/Gamma(x) for x > 0."""
    with mp.workdps(ctx.work_dps):
        x = mp.mpf(x)
        _require_positive(x, "digamma")
        return mp.digamma(x)


def _quad_gl(f, a, b, tol) -> mpf:
    """Gauss-Legendre integral of an analytic f over [a, b]."""
    if a == b:
        return mp.mpf(0)
    val, err = mp.quad(f, [a, b], method="gauss-legendre", maxdegree=9, error=True)
    if err > tol * max(1, abs(val)):
        raise PrecisionUnreachableError(
            f"Gauss-Legendre integral failed to reach tol={tol} (err={err})"
        )
    return val


def log_barnes_G(x, ctx: PrecisionContext = DEFAULT_CTX) -> mpf:
    """ln G(x) for x > 0, via the lnGamma-integral identity."""
    with mp.workdps(ctx.work_dps):
        x = mp.mpf(x)
        _require_positive(x, "log_barnes_G")
        z = x - 1
        tol = mpf(10) ** (-(ctx.digits + ctx.guard_digits // 2))
        integral = _quad_gl(lambda t: mp.loggamma(t + 1), mp.mpf(0), z, tol)
        return z / 2 * mp.log(2 * mp.pi) - z * (z + 1) / 2 + z * mp.loggamma(x) - integral


def log_C_integral_form(alpha, ctx: PrecisionContext = DEFAULT_CTX) -> mpf:
    """ln C(a) from the lnGamma integral definition."""
    with mp.workdps(ctx.work_dps):
        a = mp.mpf(alpha)
        if not a > mpf(-1) / 2:
            raise InvalidSpecError(f"log_C requires alpha > -1/2, got {a}")
        tol = mpf(10) ** (-(ctx.digits + ctx.guard_digits // 2))
        integral = _quad_gl(
            lambda s: mp.loggamma(s + mpf(1) / 2), mp.mpf(0), a, tol
        )
        return -2 * a * mp.loggamma(a + mpf(1) / 2) + 2 * integral + a * a


def log_C_barnes_form(alpha, ctx: PrecisionContext = DEFAULT_CTX) -> mpf:
    """ln C(a) from the Barnes G-function representation."""
    with mp.workdps(ctx.work_dps):
        a = mp.mpf(alpha)
        if not a > mpf(-1) / 2:
            raise InvalidSpecError(f"log_C requires alpha > -1/2, got {a}")
        return (
            2 * a * a * mp.log(2)
            + 2 * log_barnes_G(a + 1, ctx)
            - log_barnes_G(2 * a + 1, ctx)
        )


def log_C(alpha, ctx: PrecisionContext = DEFAULT_CTX) -> mpf:
    """ln C(a), integral form, cross-checked against the Barnes form."""
    with mp.workdps(ctx.work_dps):
        v1 = log_C_integral_form(alpha, ctx)
        v2 = log_C_barnes_form(alpha, ctx)
        tol = mpf(10) ** (-(ctx.digits - 2 * ctx.guard_digits))
        if abs(v1 - v2) > tol * max(1, abs(v1)):
            raise InternalConsistencyError(
                f"C(alpha) routes disagree at alpha={alpha}: {v1} vs {v2}"
            )
        return v1


def zeta_prime_minus1(ctx: PrecisionContext = DEFAULT_CTX) -> SpecialConstant:
    """zeta'(-1) = -0.16542114370045..., as a provenance-carrying constant."""
    with mp.workdps(ctx.work_dps):
        value = mp.zeta(-1, derivative=1)
    return SpecialConstant(
        name="zeta_prime_minus1",
        value=value,
        derivation=(
            "mpmath zeta derivative (Euler-Maclaurin + functional equation); "
            "independently verified against 2 ln G(1/2) = (1/12) ln 2 "
            "- ln sqrt(pi) + 3 zeta'(-1) in the test suite"
        ),
    )
