"""Orthonormal polynomials of the singular weight, from its moments.

The moment-to-recurrence map is the classical Chebyshev sigma-table
recursion.  It is exponentially unstable in fixed precision but exact in
exact arithmetic, so it is run at extended precision with the same
two-pass agreement acceptance as the determinant; at desk scale
(n <= ~100) this is the simplest correct route.

Conventions: p_j = kappa_j x^j + ... orthonormal, three-term recurrence
b_{j-1} p_{j-1} + (a_j - x) p_j + b_j p_{j+1} = 0, monic expansion
p_n / kappa_n = x^n + beta_n x^{n-1} + gamma_n x^{n-2} + ..., with the
coefficient identities b_j = kappa_j/kappa_{j+1}, a_j = beta_j -
beta_{j+1}, b_{j-1}^2 = gamma_j - gamma_{j+1} - beta_j^2 +
beta_j beta_{j+1}.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from mpmath import mp, mpf

from .exceptions import InvalidSpecError, PrecisionUnreachableError
from .hankel import MAX_ESCALATIONS, effective_digits
from .precision import DEFAULT_CTX, PrecisionContext, agreement_digits
from .weights import MomentTable, WeightSpec


@dataclass
class RecurrenceData:
    """Jacobi data and leading/subleading coefficients of p_0..p_n."""

    a: tuple
    b: tuple
    kappa: tuple
    spec: WeightSpec
    digits_used: int
    agreement_digits: int
    beta: tuple = field(default=())
    gamma: tuple = field(default=())

    @property
    def n(self) -> int:
        return len(self.a)


def _chebyshev_pass(values, n: int, dps: int):
    """Monic recurrence (alpha_0..alpha_{n-1}, beta_0..beta_n) from moments.

    beta_k here are the monic off-diagonal squares (b_{k-1}^2 of the
    orthonormal recurrence); returns None if positivity of an inner
    beta_k is lost, the instability signature of insufficient precision.
    """
    with mp.workdps(dps):
        m = [mp.mpf(v) for v in values[: 2 * n + 1]]
        alphas = [m[1] / m[0]]
        betas = [m[0]]
        prev = [mp.mpf(0)] * (2 * n + 1)
        cur = m
        for k in range(1, n + 1):
            new = [mp.mpf(0)] * (2 * n + 1)
            for l in range(k, 2 * n - k + 1):
                new[l] = cur[l + 1] - alphas[k - 1] * cur[l] - betas[k - 1] * prev[l]
            beta_k = new[k] / cur[k - 1]
            if not beta_k > 0:
                return None
            betas.append(beta_k)
            if k <= n - 1:
                alphas.append(new[k + 1] / new[k] - cur[k] / cur[k - 1])
            prev, cur = cur, new
        return alphas, betas


def recurrence_from_moments(
    M: MomentTable, n: int, ctx: PrecisionContext = DEFAULT_CTX
) -> RecurrenceData:
    """Recurrence coefficients a_j, b_j and kappa_0..kappa_n from moments."""
    if n < 1:
        raise InvalidSpecError(f"n must be >= 1, got {n}")
    if M.K < 2 * n:
        raise InvalidSpecError(f"moment table has K={M.K}, need K >= 2n = {2 * n}")
    digits = effective_digits(n, ctx)
    for _attempt in range(MAX_ESCALATIONS + 1):
        r1 = _chebyshev_pass(M.values, n, digits + ctx.guard_digits)
        dps2 = 2 * digits + ctx.guard_digits
        r2 = _chebyshev_pass(M.values, n, dps2)
        if r1 is not None and r2 is not None:
            alphas1, betas1 = r1
            alphas2, betas2 = r2
            with mp.workdps(dps2):
                worst = mp.mpf(0)
                for x1, x2 in zip(betas1, betas2):
                    worst = max(worst, abs(x1 - x2) / abs(x2))
                for j, (x1, x2) in enumerate(zip(alphas1, alphas2)):
                    scale = abs(x2) + mp.sqrt(betas2[min(j + 1, n)]) + 1
                    worst = max(worst, abs(x1 - x2) / scale)
                if worst <= ctx.target_tol:
                    a = tuple(alphas2)
                    b = tuple(mp.sqrt(betas2[j + 1]) for j in range(n))
                    kappa = [1 / mp.sqrt(betas2[0])]
                    for j in range(n):
                        kappa.append(kappa[j] / b[j])
                    rec = RecurrenceData(
                        a=a,
                        b=b,
                        kappa=tuple(kappa),
                        spec=M.spec,
                        digits_used=digits,
                        agreement_digits=agreement_digits(
                            betas1[n], betas2[n]
                        ),
                    )
                    subleading_coefficients(rec)
                    return rec
        digits *= 2
    raise PrecisionUnreachableError(
        f"moment-to-recurrence passes never agreed to {ctx.target_tol} for n={n}"
    )


def subleading_coefficients(R: RecurrenceData):
    """Fill beta_0..beta_n, gamma_0..gamma_n from the coefficient identities.

    beta_{j+1} = beta_j - a_j with beta_0 = 0; gamma_{j+1} = gamma_j
    - beta_j^2 + beta_j beta_{j+1} - b_{j-1}^2 with gamma_0 = gamma_1 = 0.
    Stored into R and returned.
    """
    n = R.n
    beta = [mp.mpf(0)]
    for j in range(n):
        beta.append(beta[j] - R.a[j])
    gamma = [mp.mpf(0), mp.mpf(0)]
    for j in range(1, n):
        gamma.append(
            gamma[j] - beta[j] ** 2 + beta[j] * beta[j + 1] - R.b[j - 1] ** 2
        )
    R.beta = tuple(beta)
    R.gamma = tuple(gamma)
    return R.beta, R.gamma


def kappa_logproduct(R: RecurrenceData, n: int) -> mpf:
    """ln D_n along the leading-coefficient route: -2 sum_{j<n} ln kappa_j."""
    if n > len(R.kappa) - 1:
        raise InvalidSpecError(
            f"recurrence data has {len(R.kappa)} leading coefficients, need {n + 1}"
        )
    return -2 * sum(mp.log(R.kappa[j]) for j in range(n))


def eval_basis(R: RecurrenceData, x, upto: int):
    """Values and x-derivatives of p_0..p_upto at x by forward recurrence.

    The derivative recurrence is the differentiated three-term relation,
    so no finite differences enter.
    """
    if upto > R.n:
        raise InvalidSpecError(f"upto={upto} exceeds available degree {R.n}")
    x = mp.mpf(x)
    values = [R.kappa[0]]
    derivs = [mp.mpf(0)]
    if upto == 0:
        return values, derivs
    values.append((x - R.a[0]) * values[0] / R.b[0])
    derivs.append(values[0] / R.b[0])
    for j in range(1, upto):
        values.append(
            ((x - R.a[j]) * values[j] - R.b[j - 1] * values[j - 1]) / R.b[j]
        )
        derivs.append(
            (values[j] + (x - R.a[j]) * derivs[j] - R.b[j - 1] * derivs[j - 1])
            / R.b[j]
        )
    return values, derivs
