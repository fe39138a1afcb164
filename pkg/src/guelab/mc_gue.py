"""Monte Carlo cross-check of the characteristic-polynomial average.

Spectra are drawn from the tridiagonal beta=2 Hermite ensemble, whose
eigenvalue density is prod_{i<j} (x_i-x_j)^2 prod_k e^{-x_k^2}: diagonal
entries N(0, 1/2), off-diagonal entries chi_{2(n-i)}/2.  Gaussian
variates come from Box-Muller applied to a counter-based Philox stream
keyed by (seed, sample index), so every sample is reproducible in
isolation and the estimate is bit-identical for fixed (spec, samples,
seed) regardless of batching.

Everything runs in hardware precision: the target accuracy is
statistical (~1e-2), only the exact reference values it is compared
against are extended precision.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidSpecError
from .weights import WeightSpec

logger = logging.getLogger(__name__)

# Fixed reduction chunk: partial sums are accumulated per chunk and
# combined with math.fsum, so the result does not depend on memory or
# parallelism choices.
CHUNK = 4096

_RETRY_SALT = np.uint64(1) << np.uint64(48)


@dataclass(frozen=True)
class McEstimate:
    mean_log: float
    stderr_rel: float
    samples: int
    seed: int
    discarded: int = 0


def _normals(seed: int, index: int, count: int, retry: int = 0) -> np.ndarray:
    """`count` standard normals from Box-Muller over Philox(seed, index)."""
    key = np.array(
        [
            np.uint64(seed % 2**64),
            np.uint64(index % 2**48) + np.uint64(retry) * _RETRY_SALT,
        ],
        dtype=np.uint64,
    )
    gen = np.random.Generator(np.random.Philox(key=key))
    pairs = (count + 1) // 2
    u = gen.random(2 * pairs)
    r = np.sqrt(-2.0 * np.log1p(-u[:pairs]))
    ang = 2.0 * np.pi * u[pairs:]
    z = np.empty(2 * pairs)
    z[0::2] = r * np.cos(ang)
    z[1::2] = r * np.sin(ang)
    return z[:count]


def _tridiagonal(n: int, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal of one tridiagonal ensemble matrix."""
    diag = z[:n] / math.sqrt(2.0)
    off = np.empty(n - 1)
    pos = n
    for i in range(1, n):
        dof = 2 * (n - i)
        block = z[pos : pos + dof]
        pos += dof
        off[i - 1] = math.sqrt(np.dot(block, block)) / 2.0
    return diag, off


def sample_spectrum(n: int, rng_state: tuple[int, int]) -> np.ndarray:
    """Eigenvalues of one GUE(n) draw for the state (seed, sample_index)."""
    if n < 1:
        raise InvalidSpecError(f"n must be >= 1, got {n}")
    seed, index = rng_state
    for retry in range(4):
        z = _normals(seed, index, n * n, retry=retry)
        diag, off = _tridiagonal(n, z)
        a = np.diag(diag)
        if n > 1:
            a += np.diag(off, 1) + np.diag(off, -1)
        try:
            return np.linalg.eigvalsh(a)
        except np.linalg.LinAlgError:
            logger.warning(
                "eigensolver failed for sample %d (retry %d); resampling",
                index,
                retry,
            )
    raise RuntimeError(f"eigensolver kept failing for sample {index}")


def _spectra_chunk(n: int, seed: int, start: int, count: int) -> np.ndarray:
    """Eigenvalues for samples start..start+count-1, shape (count, n)."""
    mats = np.zeros((count, n, n))
    idx = np.arange(n)
    for c in range(count):
        z = _normals(seed, start + c, n * n)
        diag, off = _tridiagonal(n, z)
        mats[c, idx, idx] = diag
        if n > 1:
            mats[c, idx[:-1], idx[1:]] = off
            mats[c, idx[1:], idx[:-1]] = off
    try:
        return np.linalg.eigvalsh(mats)
    except np.linalg.LinAlgError:
        out = np.empty((count, n))
        for c in range(count):
            out[c] = sample_spectrum(n, (seed, start + c))
        return out


def mc_average_log(spec: WeightSpec, samples: int, seed: int) -> McEstimate:
    """Sample estimate of ln <prod_j |det(H - mu_j)|^(2 alpha_j)>.

    Per sample the log-integrand sum_j 2 alpha_j sum_i ln|x_i - mu_j| is
    formed first; exponentials are taken against the running maximum so
    the mean is computed in a log-safe way.  A sampled eigenvalue exactly
    at some mu_j (probability zero, floating point possible) discards
    that sample with a log message.
    """
    if samples < 1000:
        raise InvalidSpecError(f"samples must be >= 1000, got {samples}")
    n = spec.n
    mus = np.array([float(l) for l in spec.lambdas]) * math.sqrt(2.0 * n)
    alphas = np.array([float(a) for a in spec.alphas])
    live = alphas != 0.0  # alpha_j = 0 factors are identically 1
    mus, alphas = mus[live], alphas[live]

    log_vals = np.zeros(samples)
    for start in range(0, samples, CHUNK):
        count = min(CHUNK, samples - start)
        eigs = _spectra_chunk(n, seed, start, count)
        if mus.size == 0:
            continue
        # (count, n, m) distances
        d = np.abs(eigs[:, :, None] - mus[None, None, :])
        with np.errstate(divide="ignore"):
            ln_d = np.log(d)
        log_vals[start : start + count] = np.einsum("cnm,m->c", ln_d, 2.0 * alphas)

    collisions = ~np.isfinite(log_vals)
    discarded = int(np.count_nonzero(collisions))
    if discarded:
        logger.warning(
            "discarded %d sample(s) with an eigenvalue exactly at a mu_j",
            discarded,
        )
        log_vals = log_vals[~collisions]
    kept = log_vals.size
    if kept == 0:
        raise RuntimeError("every sample was discarded")

    lmax = float(np.max(log_vals))
    partial_s = []
    partial_s2 = []
    for start in range(0, kept, CHUNK):
        y = np.exp(log_vals[start : start + CHUNK] - lmax)
        partial_s.append(float(np.sum(y)))
        partial_s2.append(float(np.sum(y * y)))
    s1 = math.fsum(partial_s)
    s2 = math.fsum(partial_s2)
    mean_y = s1 / kept
    var_y = max(0.0, (s2 - kept * mean_y * mean_y) / max(1, kept - 1))
    stderr_rel = math.sqrt(var_y / kept) / mean_y
    return McEstimate(
        mean_log=lmax + math.log(mean_y),
        stderr_rel=stderr_rel,
        samples=kept,
        seed=seed,
        discarded=discarded,
    )
