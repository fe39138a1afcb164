"""Exact finite-n quantities: Hankel determinants and the Selberg value.

D_n = det(M_{i+j})_{i,j=0}^{n-1} is positive for real exponents > -1/2
(the underlying moment form is positive definite), so the determinant is
returned on the log scale; the raw value overflows fixed-width formats
already at moderate n.

Moment Hankel matrices are exponentially ill-conditioned in n, so the LU
factorization runs at an n-dependent starting precision, is repeated at
twice that precision, and is accepted only when the two passes agree to
the context tolerance.  A non-positive pivot is treated as a precision
failure and triggers the same escalation.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp, mpf

from . import specfun
from .exceptions import (
    InvalidSpecError,
    NumericallySingularError,
    PrecisionUnreachableError,
)
from .precision import DEFAULT_CTX, PrecisionContext, agreement_digits
from .weights import MomentTable, WeightSpec, moment_table

# Escalation policy: start at max(user digits, 20 + 2.5 n), double on
# disagreement, at most this many attempts in total.
MAX_ESCALATIONS = 3


@dataclass(frozen=True)
class LogDeterminant:
    log_value: mpf
    n: int
    precision_used: int
    agreement_digits: int


def effective_digits(n: int, ctx: PrecisionContext) -> int:
    return max(ctx.digits, int(mp.ceil(20 + 2.5 * n)))


def _lu_log_det(values, n: int, dps: int):
    """ln det of the n x n Hankel matrix (values[i+j]) by unpivoted LU.

    Returns None when a non-positive pivot appears; for a positive
    definite moment form that only happens when precision is too low.
    """
    with mp.workdps(dps):
        a = [[mp.mpf(values[i + j]) for j in range(n)] for i in range(n)]
        log_det = mp.mpf(0)
        for k in range(n):
            pivot = a[k][k]
            if not pivot > 0:
                return None
            log_det += mp.log(pivot)
            for i in range(k + 1, n):
                factor = a[i][k] / pivot
                row_i = a[i]
                row_k = a[k]
                for j in range(k + 1, n):
                    row_i[j] -= factor * row_k[j]
        return log_det


def hankel_log_determinant(
    M: MomentTable, n: int, ctx: PrecisionContext = DEFAULT_CTX
) -> LogDeterminant:
    """ln D_n from a moment table, with two-pass precision verification."""
    if n < 1:
        raise InvalidSpecError(f"n must be >= 1, got {n}")
    if M.K < 2 * n - 2:
        raise InvalidSpecError(
            f"moment table has K={M.K}, need K >= 2n-2 = {2 * n - 2}"
        )
    digits = effective_digits(n, ctx)
    pivot_failures = 0
    for _attempt in range(MAX_ESCALATIONS + 1):
        d1 = _lu_log_det(M.values, n, digits + ctx.guard_digits)
        d2 = _lu_log_det(M.values, n, 2 * digits + ctx.guard_digits)
        if d1 is None and d2 is None:
            pivot_failures += 1
        elif d1 is not None and d2 is not None:
            with mp.workdps(2 * digits):
                diff = abs(d1 - d2)
                if diff <= ctx.target_tol * max(1, abs(d2)):
                    return LogDeterminant(
                        log_value=d2,
                        n=n,
                        precision_used=digits,
                        agreement_digits=agreement_digits(d1, d2),
                    )
        digits *= 2
    if pivot_failures > MAX_ESCALATIONS:
        raise NumericallySingularError(
            f"non-positive pivot at every precision pass for n={n}; "
            "numerically singular moment matrix"
        )
    raise PrecisionUnreachableError(
        f"determinant passes never agreed to {ctx.target_tol} for n={n}"
    )


def selberg_log(n: int, ctx: PrecisionContext = DEFAULT_CTX) -> mpf:
    """Exact ln D_n of the pure Gaussian weight:

    (n/2) ln 2pi - (n^2/2) ln 2 + sum_{j=1}^{n-1} lnGamma(j+1).
    """
    if n < 1:
        raise InvalidSpecError(f"n must be >= 1, got {n}")
    with mp.workdps(ctx.work_dps):
        out = mp.mpf(n) / 2 * mp.log(2 * mp.pi) - mp.mpf(n) ** 2 / 2 * mp.log(2)
        for j in range(1, n):
            out += specfun.log_gamma(j + 1, ctx)
        return out


def selberg_log_asymptotic(n: int, ctx: PrecisionContext = DEFAULT_CTX) -> mpf:
    """Large-n form of ln D_n(0,..,0), accurate to O(1/n):

    n ln 2pi + (n^2/2) ln(n/2) - (1/12) ln n - (3/4) n^2 + zeta'(-1).
    """
    with mp.workdps(ctx.work_dps):
        zp = specfun.zeta_prime_minus1(ctx).value
        n = mp.mpf(n)
        return (
            n * mp.log(2 * mp.pi)
            + n * n / 2 * mp.log(n / 2)
            - mp.log(n) / 12
            - mpf(3) / 4 * n * n
            + zp
        )


def char_poly_average_log(
    spec: WeightSpec,
    ctx: PrecisionContext = DEFAULT_CTX,
    moments: MomentTable | None = None,
) -> mpf:
    """ln of the GUE average of prod_j |det(H - mu_j)|^(2 alpha_j).

    Equals ln D_n(alpha_1..alpha_m) - ln D_n(0..0) with mu_j on the
    eigenvalue scale; the denominator comes from the closed Selberg form.
    Valid for any spec positions off +-1 (inside the bulk it is compared
    with the bulk asymptotics, outside with the regular-symbol regime).
    """
    n = spec.n
    if moments is None:
        moments = moment_table(spec, 2 * n, ctx)
    if moments.spec is not spec and moments.spec != spec:
        raise InvalidSpecError("moment table belongs to a different spec")
    det = hankel_log_determinant(moments, n, ctx)
    with mp.workdps(ctx.work_dps):
        return det.log_value - selberg_log(n, ctx)
