"""Overflow-free series kernels and special functions.

Every normalization constant in the package is a sum of terms of the form
``x**n / (n! [n+s]! ([f(n)]! [f(n+s)]!)**2)``.  For super-factorial
nonlinearities those products leave the double range after a few hundred
terms, so terms are carried as :class:`LogNumber` (sign plus natural log of
the magnitude) and summed with exponentials shifted to the running maximum.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import BesselOverflow, NonConvergence

__all__ = [
    "LogNumber",
    "TruncationPolicy",
    "log_factorial",
    "log_factorial_table",
    "log_shifted_factorial",
    "bessel_I",
    "sum_log_series",
    "sum_log_series_log",
]


@dataclass(frozen=True)
class LogNumber:
    """A real number stored as ``sign * exp(log_magnitude)``.

    ``sign == 0`` encodes an exact zero; its ``log_magnitude`` is ``-inf``.
    Values made by :meth:`from_float` remember the original double, so the
    round trip is exact even where ``exp(log(v))`` would lose digits.
    """

    sign: int
    log_magnitude: float = -math.inf
    _exact: float | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {self.sign!r}")
        if self.sign == 0 and self.log_magnitude != -math.inf:
            object.__setattr__(self, "log_magnitude", -math.inf)
        if self.sign != 0 and math.isnan(self.log_magnitude):
            raise ValueError("log_magnitude is NaN")

    @classmethod
    def zero(cls) -> "LogNumber":
        return cls(0)

    @classmethod
    def one(cls) -> "LogNumber":
        return cls(1, 0.0)

    @classmethod
    def from_float(cls, value: float) -> "LogNumber":
        if value == 0:
            return cls(0)
        if not math.isfinite(value):
            raise ValueError(f"cannot represent {value!r}")
        value = float(value)
        return cls(1 if value > 0 else -1, math.log(abs(value)), value)

    @classmethod
    def from_log(cls, log_magnitude: float, sign: int = 1) -> "LogNumber":
        if log_magnitude == -math.inf:
            return cls(0)
        return cls(sign, float(log_magnitude))

    def __float__(self) -> float:
        if self.sign == 0:
            return 0.0
        if self._exact is not None:
            return self._exact
        return self.sign * math.exp(self.log_magnitude)

    def __mul__(self, other: "LogNumber") -> "LogNumber":
        if not isinstance(other, LogNumber):
            return NotImplemented
        if self.sign == 0 or other.sign == 0:
            return LogNumber(0)
        return LogNumber(self.sign * other.sign, self.log_magnitude + other.log_magnitude)

    def __truediv__(self, other: "LogNumber") -> "LogNumber":
        if not isinstance(other, LogNumber):
            return NotImplemented
        if other.sign == 0:
            raise ZeroDivisionError("division by LogNumber zero")
        if self.sign == 0:
            return LogNumber(0)
        return LogNumber(self.sign * other.sign, self.log_magnitude - other.log_magnitude)

    def __neg__(self) -> "LogNumber":
        exact = None if self._exact is None else -self._exact
        return LogNumber(-self.sign, self.log_magnitude, exact)

    def __pow__(self, exponent: float) -> "LogNumber":
        if self.sign == 0:
            if exponent <= 0:
                raise ZeroDivisionError("zero to a non-positive power")
            return LogNumber(0)
        if self.sign < 0 and exponent != int(exponent):
            raise ValueError("fractional power of a negative LogNumber")
        sign = self.sign ** int(exponent) if self.sign < 0 else 1
        return LogNumber(sign, self.log_magnitude * exponent)

    def sqrt(self) -> "LogNumber":
        return self ** 0.5

    def __abs__(self) -> "LogNumber":
        exact = None if self._exact is None else abs(self._exact)
        return LogNumber(abs(self.sign), self.log_magnitude, exact)


@dataclass(frozen=True)
class TruncationPolicy:
    """Stopping rules for infinite ladder series.

    Attributes
    ----------
    rel_tail_tol : float
        A term counts as negligible when its magnitude relative to the
        partial sum falls below this value.
    max_terms : int
        Hard cap on the number of terms generated.
    radius_guard : float
        Fraction of the convergence radius (in |xi|) beyond which states are
        refused.
    """

    rel_tail_tol: float = 1e-16
    max_terms: int = 10_000
    radius_guard: float = 0.999

    def __post_init__(self):
        if not self.rel_tail_tol > 0:
            raise ValueError("rel_tail_tol must be positive")
        if self.max_terms < 8:
            raise ValueError("max_terms must be at least 8")
        if not 0 < self.radius_guard < 1:
            raise ValueError("radius_guard must lie in (0, 1)")


# ln(n!) by cumulative recursion with Neumaier-compensated accumulation.
_lf_lock = threading.Lock()
_lf_values = [0.0]
_lf_state = [0.0, 0.0]  # running sum, compensation


def _extend_log_factorials(n: int) -> None:
    with _lf_lock:
        total, comp = _lf_state
        for k in range(len(_lf_values), n + 1):
            term = math.log(k)
            t = total + term
            if abs(total) >= abs(term):
                comp += (total - t) + term
            else:
                comp += (term - t) + total
            total = t
            _lf_values.append(total + comp)
        _lf_state[0], _lf_state[1] = total, comp


def log_factorial_table(n_max: int) -> np.ndarray:
    """Return ``ln(k!)`` for ``k = 0 .. n_max`` as a float array."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    if n_max >= len(_lf_values):
        _extend_log_factorials(n_max)
    return np.array(_lf_values[: n_max + 1])


def log_factorial(n: int) -> LogNumber:
    """ln(n!) as a positive :class:`LogNumber`.

    >>> log_factorial(0)
    LogNumber(sign=1, log_magnitude=0.0)
    """
    n = int(n)
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n >= len(_lf_values):
        _extend_log_factorials(n)
    return LogNumber(1, _lf_values[n])


def log_shifted_factorial(n: int, s: int) -> LogNumber:
    """ln of ``(n+s)(n-1+s)...(1+s) = (n+s)!/s!``; the empty product is 1."""
    n, s = int(n), int(s)
    if n < 0 or s < 0:
        raise ValueError("n and s must be nonnegative")
    if n == 0:
        return LogNumber.one()
    return LogNumber(1, log_factorial(n + s).log_magnitude - log_factorial(s).log_magnitude)


def bessel_I(q: int, x: float, rel_tol: float = 1e-16, max_terms: int = 100_000) -> float:
    """Modified Bessel function of the first kind by its ascending series.

    ``I_q(x) = sum_m (x/2)**(2m+q) / (m! (m+q)!)`` for integer ``q >= 0``.

    Raises
    ------
    BesselOverflow
        If a term or the partial sum is not representable as a double.
    """
    q = int(q)
    if q < 0:
        raise ValueError("order must be a nonnegative integer")
    x = float(x)
    if not math.isfinite(x):
        raise BesselOverflow(f"argument {x!r} is not finite")
    if x == 0.0:
        return 1.0 if q == 0 else 0.0
    half = 0.5 * x
    log_t0 = q * math.log(abs(half)) - log_factorial(q).log_magnitude
    if log_t0 > 709.0:
        raise BesselOverflow(f"I_{q}({x}) overflows; use the log-domain series instead")
    term = math.copysign(math.exp(log_t0), half) if q % 2 else math.exp(log_t0)
    total = term
    h2 = half * half
    for m in range(max_terms):
        term *= h2 / ((m + 1) * (m + 1 + q))
        total += term
        if not math.isfinite(total):
            raise BesselOverflow(f"I_{q}({x}) overflows; use the log-domain series instead")
        if abs(term) < rel_tol * abs(total):
            return total
    raise NonConvergence(f"I_{q}({x}) did not converge in {max_terms} terms")


def sum_log_series_log(
    terms: Iterable[LogNumber], policy: TruncationPolicy | None = None
) -> tuple[LogNumber, int]:
    """Sum log-domain terms; return the total as a :class:`LogNumber`.

    The accumulator is kept as ``S * exp(M)`` with ``M`` the largest
    log-magnitude seen so far, so neither huge nor tiny terms overflow.
    Summation stops after ``3`` consecutive terms whose magnitude relative
    to the partial sum is below ``policy.rel_tail_tol``; a finite iterable
    that ends earlier is summed exactly.  Exact zeros are counted as
    negligible once the partial sum is nonzero, which keeps parity ladders
    (alternate terms zero) from stopping on their holes alone.

    Returns
    -------
    total : LogNumber
    terms_used : int
        Number of terms consumed from ``terms``.
    """
    policy = policy or TruncationPolicy()
    tol = policy.rel_tail_tol
    anchor = -math.inf
    scaled = 0.0
    quiet = 0
    used = 0
    rel = math.inf
    for t in terms:
        used += 1
        if t.sign != 0:
            lm = t.log_magnitude
            if lm > anchor:
                scaled = scaled * math.exp(anchor - lm) + t.sign if scaled else float(t.sign)
                anchor = lm
            else:
                scaled += t.sign * math.exp(lm - anchor)
        if scaled == 0.0:
            quiet = 0
            rel = math.inf
        else:
            rel = 0.0 if t.sign == 0 else math.exp(t.log_magnitude - anchor) / abs(scaled)
            quiet = quiet + 1 if rel < tol else 0
            if quiet >= 3:
                break
        if used >= policy.max_terms:
            if rel >= tol:
                raise NonConvergence(
                    f"series not converged after {used} terms "
                    f"(last relative term {rel:.3g} >= {tol:g})"
                )
            break
    if scaled == 0.0:
        return LogNumber(0), used
    return LogNumber(1 if scaled > 0 else -1, anchor + math.log(abs(scaled))), used


def sum_log_series(
    terms: Iterable[LogNumber], policy: TruncationPolicy | None = None
) -> tuple[float, int]:
    """Like :func:`sum_log_series_log` but returns a plain float."""
    total, used = sum_log_series_log(terms, policy)
    if total.log_magnitude > 709.78:
        raise OverflowError("series total exceeds the double range")
    return float(total), used
