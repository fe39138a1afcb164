"""Shared fixtures: precision contexts and a session-wide moment-table cache.

Moment tables are the only expensive objects in the suite; several test
modules (and most acceptance criteria) reuse tables for the same
(lambdas, alphas, n, K, digits) key, so they are memoized for the whole
session.  Inputs are given as strings so cache keys are unambiguous.
"""

import pytest

from guelab.precision import PrecisionContext
from guelab.weights import WeightSpec, moment_table

_TABLES: dict = {}


@pytest.fixture(scope="session")
def ctx60():
    return PrecisionContext(digits=60)


@pytest.fixture(scope="session")
def ctx40():
    return PrecisionContext(digits=40)


@pytest.fixture(scope="session")
def get_table():
    def _get(lambdas, alphas, n, K=None, digits=60):
        if K is None:
            K = 2 * n
        key = (tuple(map(str, lambdas)), tuple(map(str, alphas)), n, K, digits)
        if key not in _TABLES:
            spec = WeightSpec(lambdas=list(lambdas), alphas=list(alphas), n=n)
            ctx = PrecisionContext(digits=digits)
            _TABLES[key] = (spec, moment_table(spec, K, ctx), ctx)
        return _TABLES[key]

    return _get
