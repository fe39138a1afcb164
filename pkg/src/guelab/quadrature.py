"""Double-exponential (tanh-sinh) quadrature at extended precision.

The substitution x = mid + half*tanh((pi/2)*sinh(t)) maps (-1, 1) to the
real line and turns algebraic endpoint singularities |x - a|^p, p > -1,
into doubly-exponentially decaying integrands in t, so one trapezoid rule
in t handles every exponent p > -1 without per-exponent node tables.

Nodes are stored as (distance-to-endpoint, weight) pairs, with
dist = 1 - |tanh(.)| computed in the cancellation-free form 2/(1+e^{2g}).
This matters: at 200 digits, tanh saturates to exactly 1 long before the
node weights become negligible, and singular integrands need the true
distance to the endpoint, not the rounded node position.

Refinement halves the step (doubling the node density) until two
successive levels agree to the requested relative tolerance, capped at
level MAX_LEVEL.  Summation order is fixed (ascending t within each
level, levels in order), so results are bit-identical between runs.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable

from mpmath import mp, mpf

from .exceptions import PrecisionUnreachableError

BASE_LEVEL = 4
MAX_LEVEL = 14


def _t_max(floor_exp: int) -> mpf:
    # Largest |t| kept: where the endpoint distance falls to 10^-floor_exp.
    return mp.asinh(mp.log(2 * mp.mpf(10) ** floor_exp) / mp.pi)


@lru_cache(maxsize=None)
def _node_block(dps: int, floor_exp: int, level: int):
    """Positive-t nodes introduced at `level`, as ((dist, weight), ...).

    At BASE_LEVEL all multiples of h are returned; above it only odd
    multiples (the even ones are inherited from the previous level).
    dist is the node's gap to the near endpoint of (-1, 1); weight is
    (pi/2) cosh(t) sech^2((pi/2) sinh(t)), without the step factor h.
    """
    with mp.workdps(dps):
        h = mpf(1) / 2**level
        tmax = _t_max(floor_exp)
        kmax = int(mp.ceil(tmax / h))
        step = 1 if level == BASE_LEVEL else 2
        start = 1 if level == BASE_LEVEL else 1
        nodes = []
        for k in range(start, kmax + 1, step):
            t = k * h
            g = mp.pi / 2 * mp.sinh(t)
            dist = 2 / (1 + mp.exp(2 * g))
            w = mp.pi / 2 * mp.cosh(t) * dist * (2 - dist)
            nodes.append((dist, w))
        return tuple(nodes)


def _center_weight() -> mpf:
    return mp.pi / 2


def integrate(
    f: Callable,
    a,
    b,
    tol,
    min_order: float = 1.0,
    max_level: int = MAX_LEVEL,
    floor_exp: int | None = None,
):
    """Adaptively integrate f over [a, b] to relative tolerance `tol`.

    f is called as f(x, dist_a, dist_b) where dist_a/dist_b are the exact
    distances of the node to the interval endpoints; integrands that are
    singular at an endpoint should use the distance, not x - a.  Values
    may be mpf or mpc.

    min_order is the lowest algebraic order d^(q-1) of `f` near an
    endpoint (q = 1 for a bounded integrand); it controls how deep the
    node tail must reach.  Returns (value, err_estimate, level).
    """
    a = mp.mpf(a)
    b = mp.mpf(b)
    if a == b:
        return mp.mpf(0), mp.mpf(0), BASE_LEVEL
    half = (b - a) / 2
    mid = (a + b) / 2
    width = b - a
    if floor_exp is None:
        floor_exp = int((mp.dps + 5) / max(min_order, 0.05)) + 10

    def eval_pair(dist, w):
        # node on the a side, then its mirror on the b side
        da = half * dist
        xl = a + da
        left = w * f(xl, da, width - da)
        db = half * dist
        xr = b - db
        right = w * f(xr, width - db, db)
        return left + right

    total = None
    prev = None
    err = None
    level_used = None
    for level in range(BASE_LEVEL, max_level + 1):
        h = mpf(1) / 2**level
        block = _node_block(mp.dps, floor_exp, level)
        new_sum = mp.mpf(0)
        comp = mp.mpf(0)  # Neumaier compensation
        for dist, w in block:
            v = eval_pair(dist, w)
            s = new_sum + v
            if abs(new_sum) >= abs(v):
                comp += (new_sum - s) + v
            else:
                comp += (v - s) + new_sum
            new_sum = s
        new_sum += comp
        if level == BASE_LEVEL:
            center = _center_weight() * f(mid, half, half)
            total = h * (center + new_sum)
        else:
            total = total / 2 + h * new_sum
        if prev is not None:
            err = abs(total - prev)
            scale = max(abs(total), mpf(10) ** (-mp.dps))
            if err <= tol * scale:
                level_used = level
                break
        prev = total
    if level_used is None:
        raise PrecisionUnreachableError(
            f"tanh-sinh failed to reach tol={tol} by level {max_level}",
            level_reached=max_level,
        )
    return half * total, half * err, level_used


def integrate_powers(
    weight_f: Callable,
    a,
    b,
    kmax: int,
    tol,
    min_order: float = 1.0,
    max_level: int = MAX_LEVEL,
    floor_exp: int | None = None,
):
    """Integrate x^k * weight_f(x) for all k = 0..kmax in one node sweep.

    weight_f is called as weight_f(x, dist_a, dist_b) like in integrate().
    The power accumulation reuses each node's weight evaluation, so the
    whole moment table costs one quadrature pass.  Intended for intervals
    on which x does not change sign (callers split at 0), so every
    component converges in a meaningful relative sense.

    Returns (values, errors, level): lists of length kmax+1.
    """
    a = mp.mpf(a)
    b = mp.mpf(b)
    half = (b - a) / 2
    mid = (a + b) / 2
    width = b - a
    if floor_exp is None:
        floor_exp = int((mp.dps + 5) / max(min_order, 0.05)) + 10

    def accumulate(partial, x, wv):
        p = wv
        partial[0] += p
        for k in range(1, kmax + 1):
            p *= x
            partial[k] += p

    totals = None
    prev = None
    errs = None
    level_used = None
    for level in range(BASE_LEVEL, max_level + 1):
        h = mpf(1) / 2**level
        block = _node_block(mp.dps, floor_exp, level)
        partial = [mp.mpf(0) for _ in range(kmax + 1)]
        for dist, w in block:
            da = half * dist
            xl = a + da
            accumulate(partial, xl, w * weight_f(xl, da, width - da))
            db = half * dist
            xr = b - db
            accumulate(partial, xr, w * weight_f(xr, width - db, db))
        if level == BASE_LEVEL:
            wc = _center_weight() * weight_f(mid, half, half)
            center = [mp.mpf(0)] * (kmax + 1)
            accumulate(center, mid, wc)
            totals = [h * (c + p) for c, p in zip(center, partial)]
        else:
            totals = [t / 2 + h * p for t, p in zip(totals, partial)]
        if prev is not None:
            errs = [abs(t - p) for t, p in zip(totals, prev)]
            ok = True
            fallback = max(abs(t) for t in totals)
            for t, e in zip(totals, errs):
                scale = abs(t) if t != 0 else fallback
                if e > tol * max(scale, mpf(10) ** (-mp.dps)):
                    ok = False
                    break
            if ok:
                level_used = level
                break
        prev = list(totals)
    if level_used is None:
        raise PrecisionUnreachableError(
            f"tanh-sinh moment sweep failed to reach tol={tol} "
            f"by level {max_level}",
            level_reached=max_level,
        )
    return [half * t for t in totals], [half * e for e in errs], level_used
