"""The singular Gaussian weight and its Hankel moments.

A weight
    w(x) = prod_j |x - mu_j|^(2 alpha_j) * exp(-x^2),   mu_j = lambda_j*sqrt(2n),
with alpha_j > -1/2 is integrable; its moments M_k = int x^k w(x) dx are
computed by singularity-aware tanh-sinh quadrature: the line is truncated
where the integrand is below the precision floor, split at every mu_j
(and at 0, so each piece has a single-signed x^k integrand), and the
whole table M_0..M_K is accumulated in one node sweep per piece.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from mpmath import mp, mpf

from . import quadrature, specfun
from .exceptions import InvalidSpecError, SingularPointError
from .precision import CONVERSION_DPS, DEFAULT_CTX, PrecisionContext, as_exact_mpf


@dataclass(frozen=True)
class WeightSpec:
    """Singular positions (scaled), exponents, and the matrix size.

    lambdas are on the (-1, 1) bulk scale; the eigenvalue-scale positions
    are mu_j = lambda_j * sqrt(2n).  Exponents must satisfy alpha_j > -1/2
    (integrability); positions must be pairwise distinct and off +-1.
    """

    lambdas: tuple = ()
    alphas: tuple = ()
    n: int = 1

    def __post_init__(self):
        lams = tuple(as_exact_mpf(x) for x in self.lambdas)
        alps = tuple(as_exact_mpf(x) for x in self.alphas)
        object.__setattr__(self, "lambdas", lams)
        object.__setattr__(self, "alphas", alps)
        if len(lams) != len(alps) or len(lams) < 1:
            raise InvalidSpecError(
                "lambdas and alphas must have equal length m >= 1"
            )
        if not (isinstance(self.n, int) and self.n >= 1):
            raise InvalidSpecError(f"n must be a positive integer, got {self.n}")
        for a in alps:
            if not a > mpf(-1) / 2:
                raise InvalidSpecError(f"alpha_j must exceed -1/2, got {a}")
        for l in lams:
            if abs(l) == 1:
                raise InvalidSpecError("lambda_j exactly at +-1 is unsupported")
        if len(set(lams)) != len(lams):
            raise InvalidSpecError("lambda_j must be pairwise distinct")

    @property
    def m(self) -> int:
        return len(self.lambdas)

    @property
    def bigA(self) -> mpf:
        return sum(self.alphas, mpf(0))

    def mu(self) -> tuple:
        """Eigenvalue-scale positions lambda_j*sqrt(2n) at ambient precision."""
        root = mp.sqrt(2 * mp.mpf(self.n))
        return tuple(l * root for l in self.lambdas)

    @property
    def is_symmetric(self) -> bool:
        # negate at full conversion precision: mpmath rounds unary minus
        # to the ambient precision, which would break exact mirroring
        with mp.workdps(CONVERSION_DPS + 10):
            pairs = sorted((l, a) for l, a in zip(self.lambdas, self.alphas))
            mirrored = sorted((-l, a) for l, a in zip(self.lambdas, self.alphas))
            return pairs == mirrored

    def in_bulk(self) -> bool:
        return all(abs(l) < 1 for l in self.lambdas)


@dataclass(frozen=True)
class MomentTable:
    """Moments M_0..M_K of a weight, with an accuracy estimate.

    achieved_tol is relative to abs_scales[k] = int |x|^k w dx, which
    coincides with |M_k| except where cancellation makes M_k small (odd k
    of a symmetric weight); there it bounds the absolute error instead.
    """

    values: tuple
    K: int
    spec: WeightSpec
    achieved_tol: float
    abs_scales: tuple = field(repr=False, default=())
    work_dps: int = 0

    def __post_init__(self):
        if self.values and not self.values[0] > 0:
            raise InvalidSpecError("M_0 must be positive for an integrable weight")


def weight_eval(spec: WeightSpec, x, include_gaussian: bool = True) -> mpf:
    """Evaluate prod_j |x-mu_j|^(2 alpha_j), optionally times exp(-x^2)."""
    x = mp.mpf(x)
    mus = spec.mu()
    out = mp.exp(-x * x) if include_gaussian else mp.mpf(1)
    for mu_j, a_j in zip(mus, spec.alphas):
        if a_j == 0:
            continue
        d = abs(x - mu_j)
        if d == 0:
            if a_j < 0:
                raise SingularPointError(
                    f"weight diverges at x = mu_j = {mu_j} (alpha={a_j} < 0)"
                )
            return mp.mpf(0)
        out *= d ** (2 * a_j)
    return out


def _tail_cutoff(K: int, alphas, digits_goal: int) -> mpf:
    """X with exp(-X^2) X^(K + 2 sum max(a,0) + 2) below the precision floor."""
    p = K + 2 * float(sum(max(a, mpf(0)) for a in alphas)) + 2
    target = digits_goal * mp.log(10)
    x = mp.sqrt(target + p)
    for _ in range(4):
        x = mp.sqrt(target + p * mp.log(x))
    return x


def moment_table(spec: WeightSpec, K: int, ctx: PrecisionContext = DEFAULT_CTX) -> MomentTable:
    """Moments M_0..M_K of the weight at extended precision.

    Deterministic for fixed (spec, K, ctx): fixed node sets, fixed
    summation order.  Raises PrecisionUnreachableError if the refinement
    cap is hit before two successive levels agree.
    """
    if K < 0:
        raise InvalidSpecError(f"K must be >= 0, got {K}")
    work_dps = ctx.digits + 2 * ctx.guard_digits + 10
    with mp.workdps(work_dps):
        tol = mpf(10) ** (-(ctx.digits + ctx.guard_digits))
        min_alpha = min(spec.alphas)
        q = max(0.05, float(1 + 2 * min(min_alpha, mpf(0))))
        floor_exp = int((ctx.digits + 2 * ctx.guard_digits) / q) + 10
        cutoff = _tail_cutoff(K, spec.alphas, ctx.digits + 2 * ctx.guard_digits + 5)
        mus = spec.mu()
        if mus and cutoff < max(abs(u) for u in mus) + 2:
            cutoff = max(abs(u) for u in mus) + 2
        singular = {mu_j: a_j for mu_j, a_j in zip(mus, spec.alphas) if a_j != 0}
        splits = sorted(set(list(singular.keys()) + [mp.mpf(0)]))
        edges = [-cutoff] + splits + [cutoff]

        values = [mp.mpf(0)] * (K + 1)
        scales = [mp.mpf(0)] * (K + 1)
        err_abs = [mp.mpf(0)] * (K + 1)
        for a, b in itertools.pairwise(edges):

            def wf(x, da, db, _a=a, _b=b):
                out = mp.exp(-x * x)
                for mu_j, alpha_j in singular.items():
                    if mu_j == _a:
                        d = da
                    elif mu_j == _b:
                        d = db
                    else:
                        d = abs(x - mu_j)
                    out *= d ** (2 * alpha_j)
                return out

            vals, errs, _level = quadrature.integrate_powers(
                wf, a, b, K, tol, min_order=q, floor_exp=floor_exp
            )
            for k in range(K + 1):
                values[k] += vals[k]
                scales[k] += abs(vals[k])
                err_abs[k] += errs[k]
        achieved = max(
            float(e / s) if s > 0 else float(e) for e, s in zip(err_abs, scales)
        )
        achieved = max(achieved, 10.0 ** (-work_dps))
    return MomentTable(
        values=tuple(values),
        K=K,
        spec=spec,
        achieved_tol=achieved,
        abs_scales=tuple(scales),
        work_dps=work_dps,
    )


def symmetric_moment_oracle(alpha, k: int, ctx: PrecisionContext = DEFAULT_CTX) -> mpf:
    """Closed-form moment of |x|^(2a) e^(-x^2): Gamma(a + (k+1)/2), or 0 for odd k.

    Independent analytic route used to validate the quadrature for the
    one-point weight centered at the origin.
    """
    alpha = mp.mpf(alpha)
    if not alpha > mpf(-1) / 2:
        raise InvalidSpecError(f"oracle requires alpha > -1/2, got {alpha}")
    if k < 0:
        raise InvalidSpecError(f"moment index must be >= 0, got {k}")
    if k % 2 == 1:
        return mp.mpf(0)
    with mp.workdps(ctx.work_dps):
        return mp.exp(specfun.log_gamma(alpha + mpf(k + 1) / 2, ctx))
