"""Recurrence-data tests against three independent oracles: closed-form
Hermite data, brute-force Gram-Schmidt on Gamma-function moments, and
symbolic expansion of the monic recurrence."""

import random

import pytest
from mpmath import mp, mpf

import guelab.orthopoly as op
from guelab.exceptions import InvalidSpecError
from guelab.hankel import hankel_log_determinant, selberg_log
from guelab.precision import PrecisionContext
from guelab.quadrature import integrate
from guelab.weights import WeightSpec, symmetric_moment_oracle, weight_eval

CTX = PrecisionContext(digits=60)


def gram_schmidt_recurrence(moments, n):
    """Brute-force monic orthogonalization on a moment list.

    Returns (a_j, b_j, kappa_j) via projections <x^k, pi_j> computed
    directly from the moments; O(n^3) and independent of the sigma-table
    recursion it is used to check.
    """

    def inner(p, q):
        return sum(
            p[i] * q[j] * moments[i + j] for i in range(len(p)) for j in range(len(q))
        )

    def shift(p):  # multiply by x
        return [mp.mpf(0)] + list(p)

    polys = [[mp.mpf(1)]]
    norms = [moments[0]]
    a = []
    b = []
    for j in range(n):
        xp = shift(polys[j])
        a_j = inner(xp, polys[j]) / norms[j]
        a.append(a_j)
        new = [c for c in xp]
        for i, c in enumerate(polys[j]):
            new[i] -= a_j * c
        if j > 0:
            b_prev = norms[j] / norms[j - 1]
            for i, c in enumerate(polys[j - 1]):
                new[i] -= b_prev * c
        polys.append(new)
        norms.append(inner(new, new))
        b.append(mp.sqrt(norms[j + 1] / norms[j]))
    kappa = [1 / mp.sqrt(norms[j]) for j in range(n + 1)]
    return a, b, kappa


def expand_monic_coefficients(a, b, n):
    """Coefficient lists of the monic polynomials via
    pi_{j+1} = (x - a_j) pi_j - b_{j-1}^2 pi_{j-1}; the symbolic route to
    beta_n (x^{n-1} coefficient) and gamma_n (x^{n-2} coefficient)."""
    prev = [mp.mpf(1)]
    cur = [-a[0], mp.mpf(1)]
    for j in range(1, n):
        nxt = [mp.mpf(0)] + cur
        for i, c in enumerate(cur):
            nxt[i] -= a[j] * c
        for i, c in enumerate(prev):
            nxt[i] -= b[j - 1] ** 2 * c
        prev, cur = cur, nxt
    return cur


class TestHermiteReduction:
    def test_closed_forms(self, get_table):
        spec, table, _ = get_table(["0"], ["0"], 8, K=16)
        rec = op.recurrence_from_moments(table, 8, CTX)
        with mp.workdps(80):
            tol = mpf("1e-45")
            assert abs(rec.kappa[0] - mp.power(mp.pi, mpf(-1) / 4)) < tol
            for j in range(8):
                assert abs(rec.a[j]) < tol
                assert abs(rec.b[j] - mp.sqrt(mpf(j + 1) / 2)) < tol


class TestGramSchmidtOracle:
    def test_generalized_hermite(self):
        # moments from the Gamma closed form, never from quadrature
        n = 8
        spec = WeightSpec(lambdas=["0"], alphas=["0.7"], n=4)
        with mp.workdps(120):
            oracle_moments = [
                symmetric_moment_oracle(spec.alphas[0], k, CTX.with_digits(100))
                for k in range(2 * n + 1)
            ]
            a_o, b_o, kappa_o = gram_schmidt_recurrence(oracle_moments, n)
        from guelab.weights import moment_table

        table = moment_table(spec, 2 * n, CTX)
        rec = op.recurrence_from_moments(table, n, CTX)
        with mp.workdps(80):
            for j in range(n):
                assert abs(rec.b[j] - b_o[j]) < mpf("1e-40")
                assert abs(rec.a[j] - a_o[j]) < mpf("1e-40")
            assert abs(rec.kappa[n] - kappa_o[n]) < mpf("1e-38") * kappa_o[n]


class TestKappaLogProduct:
    def test_n1(self, get_table):
        spec, table, _ = get_table(["0.3"], ["0.5"], 2, K=4)
        rec = op.recurrence_from_moments(table, 2, CTX)
        with mp.workdps(70):
            assert abs(op.kappa_logproduct(rec, 1) - mp.log(table.values[0])) < mpf(
                "1e-50"
            )

    def test_gaussian_matches_selberg(self, get_table):
        spec, table, _ = get_table(["0"], ["0"], 4, K=8)
        rec = op.recurrence_from_moments(table, 4, CTX)
        with mp.workdps(70):
            assert abs(op.kappa_logproduct(rec, 4) - selberg_log(4, CTX)) < mpf(
                "1e-45"
            )

    def test_two_paths_generic(self, get_table):
        spec, table, _ = get_table(["0.3"], ["0.5"], 10, K=20)
        rec = op.recurrence_from_moments(table, 10, CTX)
        det = hankel_log_determinant(table, 10, CTX)
        with mp.workdps(80):
            assert abs(op.kappa_logproduct(rec, 10) - det.log_value) < mpf(10) ** (
                -(CTX.digits // 2)
            )

    def test_too_few_coefficients(self, get_table):
        spec, table, _ = get_table(["0.3"], ["0.5"], 2, K=4)
        rec = op.recurrence_from_moments(table, 2, CTX)
        with pytest.raises(InvalidSpecError):
            op.kappa_logproduct(rec, 5)


class TestSubleadingCoefficients:
    def test_symmetric_betas_vanish(self, get_table):
        spec, table, _ = get_table(["0"], ["0.7"], 4, K=12)
        rec = op.recurrence_from_moments(table, 6, CTX)
        with mp.workdps(70):
            for v in rec.beta:
                assert abs(v) < mpf("1e-40")

    def test_gaussian_gamma2(self, get_table):
        # monic Hermite pi_2 = x^2 - 1/2
        spec, table, _ = get_table(["0"], ["0"], 4, K=8)
        rec = op.recurrence_from_moments(table, 4, CTX)
        with mp.workdps(70):
            assert abs(rec.gamma[2] + mpf(1) / 2) < mpf("1e-45")

    def test_against_symbolic_expansion(self, get_table):
        n = 6
        spec, table, _ = get_table(["-0.4", "0.3"], ["0.5", "0.25"], n, K=12)
        rec = op.recurrence_from_moments(table, n, CTX)
        with mp.workdps(80):
            coeffs = expand_monic_coefficients(rec.a, rec.b, n)
            beta_n = coeffs[n - 1]
            gamma_n = coeffs[n - 2]
            assert abs(rec.beta[n] - beta_n) < mpf("1e-40") * (1 + abs(beta_n))
            assert abs(rec.gamma[n] - gamma_n) < mpf("1e-40") * (1 + abs(gamma_n))

    def test_coefficient_identity_triple(self, get_table):
        n = 6
        spec, table, _ = get_table(["-0.4", "0.3"], ["0.5", "0.25"], n, K=12)
        rec = op.recurrence_from_moments(table, n, CTX)
        with mp.workdps(80):
            tol = mpf("1e-50")
            for j in range(n):
                assert abs(rec.b[j] - rec.kappa[j] / rec.kappa[j + 1]) < tol * rec.b[j]
                assert abs(rec.a[j] - (rec.beta[j] - rec.beta[j + 1])) < tol * (
                    1 + abs(rec.a[j])
                )
            for j in range(1, n):
                lhs = rec.b[j - 1] ** 2
                rhs = (
                    rec.gamma[j]
                    - rec.gamma[j + 1]
                    - rec.beta[j] ** 2
                    + rec.beta[j] * rec.beta[j + 1]
                )
                assert abs(lhs - rhs) < tol * lhs


class TestEvalBasis:
    def test_p0_is_kappa0(self, get_table):
        spec, table, _ = get_table(["0.3"], ["0.5"], 4)
        rec = op.recurrence_from_moments(table, 4, CTX)
        with mp.workdps(70):
            for x in (mpf("-2.5"), mpf(0), mpf("17.3")):
                vals, ders = op.eval_basis(rec, x, 0)
                assert vals[0] == rec.kappa[0]
                assert ders[0] == 0

    def test_gaussian_p2_at_zero(self, get_table):
        # p_2(0) = kappa_2 * (0^2 - 1/2)
        spec, table, _ = get_table(["0"], ["0"], 4, K=8)
        rec = op.recurrence_from_moments(table, 4, CTX)
        with mp.workdps(70):
            vals, _ = op.eval_basis(rec, 0, 2)
            assert abs(vals[2] + rec.kappa[2] / 2) < mpf("1e-45")

    def test_christoffel_darboux_at_spec_point(self, get_table):
        n = 12
        spec, table, _ = get_table(["-0.4", "0.3"], ["0.5", "0.25"], n, K=24)
        rec = op.recurrence_from_moments(table, n, CTX)
        with mp.workdps(80):
            x = mpf("0.37")
            vals, ders = op.eval_basis(rec, x, n)
            lhs = sum(vals[j] ** 2 for j in range(n))
            rhs = rec.b[n - 1] * (ders[n] * vals[n - 1] - vals[n] * ders[n - 1])
            assert abs(lhs - rhs) < mpf(10) ** (-(CTX.digits // 3)) * abs(rhs)

    def test_christoffel_darboux_random_points(self, get_table):
        n = 10
        spec, table, _ = get_table(["0.3"], ["0.5"], n, K=20)
        rec = op.recurrence_from_moments(table, n, CTX)
        rng = random.Random(7121)
        with mp.workdps(80):
            span = 3 * mp.sqrt(2 * mp.mpf(n))
            for _ in range(20):
                x = mpf(rng.uniform(-1, 1)) * span
                vals, ders = op.eval_basis(rec, x, n)
                lhs = sum(vals[j] ** 2 for j in range(n))
                rhs = rec.b[n - 1] * (ders[n] * vals[n - 1] - vals[n] * ders[n - 1])
                assert abs(lhs - rhs) < mpf(10) ** (-(CTX.digits // 3)) * abs(rhs)

    def test_upto_bounds(self, get_table):
        spec, table, _ = get_table(["0.3"], ["0.5"], 2, K=4)
        rec = op.recurrence_from_moments(table, 2, CTX)
        with pytest.raises(InvalidSpecError):
            op.eval_basis(rec, 0, 5)


class TestOrthonormality:
    def test_quadrature_gram_matrix(self, get_table):
        n = 6
        spec, table, _ = get_table(["0.3"], ["0.5"], n, K=12)
        rec = op.recurrence_from_moments(table, n, CTX)
        ctx_int = PrecisionContext(digits=30)
        with mp.workdps(ctx_int.work_dps):
            mu = spec.mu()[0]
            cutoff = mpf(12)
            tol = mpf("1e-25")

            def gram(i, j):
                def f(x, da, db):
                    vals, _ = op.eval_basis(rec, x, max(i, j))
                    return vals[i] * vals[j] * weight_eval(spec, x)

                total = mp.mpf(0)
                for a, b in ((-cutoff, mpf(0)), (mpf(0), mu), (mu, cutoff)):
                    v, _, _ = integrate(f, a, b, tol, min_order=1.0)
                    total += v
                return total

            for i in range(n + 1):
                for j in range(i, n + 1):
                    val = gram(i, j)
                    target = 1 if i == j else 0
                    assert abs(val - target) < mpf(10) ** (-(ctx_int.digits // 3))

    def test_requires_2n_moments(self, get_table):
        spec, table, _ = get_table(["0.3"], ["0.5"], 2, K=4)
        with pytest.raises(InvalidSpecError):
            op.recurrence_from_moments(table, 3, CTX)
