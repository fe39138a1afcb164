"""Working-precision bookkeeping.

All numerical operations in guelab take a :class:`PrecisionContext` that
fixes the number of decimal digits the caller wants certified, the guard
digits used internally, and the relative tolerance below which two
independent computations of one quantity are considered equal.

mpmath's global context is only ever touched through ``mp.workdps`` so
that every function is a pure map from inputs to mpf values.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp, mpf

from .exceptions import InvalidSpecError

# Decimal precision at which user-supplied floats/strings are converted to
# mpf once and for all.  Inputs are treated as exact after conversion.
CONVERSION_DPS = 120


@dataclass(frozen=True)
class PrecisionContext:
    """Precision request: certified digits, internal guard, acceptance tolerance.

    ``target_tol`` defaults to 10**-(digits - guard_digits), the loosest
    tolerance consistent with the invariant target_tol >= 10**(-digits+guard).
    """

    digits: int = 60
    guard_digits: int = 10
    target_tol: float | None = None

    def __post_init__(self):
        if self.digits < 30:
            raise InvalidSpecError(f"digits must be >= 30, got {self.digits}")
        if self.guard_digits < 10:
            raise InvalidSpecError(
                f"guard_digits must be >= 10, got {self.guard_digits}"
            )
        floor = 10.0 ** (-(self.digits - self.guard_digits))
        if self.target_tol is None:
            object.__setattr__(self, "target_tol", floor)
        elif self.target_tol < floor:
            raise InvalidSpecError(
                f"target_tol {self.target_tol} below 10^-(digits-guard) = {floor}"
            )

    @property
    def work_dps(self) -> int:
        """Decimal digits used for ordinary internal arithmetic."""
        return self.digits + self.guard_digits

    def with_digits(self, digits: int) -> "PrecisionContext":
        return PrecisionContext(digits=digits, guard_digits=self.guard_digits)


DEFAULT_CTX = PrecisionContext()


def as_exact_mpf(x) -> mpf:
    """Convert user input to mpf at the fixed conversion precision.

    Floats are binary-exact already; strings are rounded once at
    CONVERSION_DPS and treated as exact afterwards, so results do not
    depend on the ambient precision at call time.  Negative literals are
    parsed as the exact negation of their absolute value (mpmath's
    parser rounds '-0.3' and '0.3' to different last bits otherwise),
    keeping reflected specs exact mirrors of each other.
    """
    with mp.workdps(CONVERSION_DPS):
        if isinstance(x, str):
            s = x.strip()
            if s.startswith("-"):
                return -mp.mpf(s[1:])
            return mp.mpf(s)
        return mp.mpf(x)


def rel_diff(a, b) -> mpf:
    """|a - b| / max(|a|, |b|, 1); a convention-free relative disagreement."""
    scale = max(abs(a), abs(b), mpf(1))
    return abs(a - b) / scale


def agreement_digits(a, b) -> int:
    """Number of decimal digits on which two values agree (floored at 0)."""
    d = rel_diff(a, b)
    if d == 0:
        return mp.dps
    return max(0, int(-mp.log10(d)))
