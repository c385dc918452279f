"""Decimal fixed-point reals for the numeric (lindep) stage.

Everything is integer arithmetic on ``mantissa / 10**P``.  The logarithm works
at ``P + 10`` or more guard digits and rounds once at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, TailTooLarge
from .series import QSeries, as_fraction


def _round_div(a: int, b: int) -> int:
    """Nearest integer to a/b (b > 0), ties away from zero."""
    q, r = divmod(abs(a), b)
    if 2 * r >= b:
        q += 1
    return q if a >= 0 else -q


@dataclass(frozen=True)
class HighPrecisionValue:
    mantissa: int
    digits: int

    @classmethod
    def from_fraction(cls, x, digits: int) -> "HighPrecisionValue":
        x = as_fraction(x)
        return cls(_round_div(x.numerator * 10 ** digits, x.denominator), digits)

    def to_fraction(self) -> Fraction:
        return Fraction(self.mantissa, 10 ** self.digits)

    def at(self, digits: int) -> "HighPrecisionValue":
        """Re-round to another precision (exact when increasing)."""
        if digits >= self.digits:
            return HighPrecisionValue(self.mantissa * 10 ** (digits - self.digits), digits)
        return HighPrecisionValue(_round_div(self.mantissa, 10 ** (self.digits - digits)), digits)

    def _same(self, other: "HighPrecisionValue") -> int:
        if other.digits != self.digits:
            raise ValueError("precision mismatch")
        return other.mantissa

    def __add__(self, other):
        return HighPrecisionValue(self.mantissa + self._same(other), self.digits)

    def __sub__(self, other):
        return HighPrecisionValue(self.mantissa - self._same(other), self.digits)

    def __neg__(self):
        return HighPrecisionValue(-self.mantissa, self.digits)

    def __abs__(self):
        return HighPrecisionValue(abs(self.mantissa), self.digits)

    def scaled(self, k: int) -> "HighPrecisionValue":
        return HighPrecisionValue(self.mantissa * k, self.digits)

    def __float__(self):
        return self.mantissa / 10 ** self.digits

    def __str__(self):
        sign = "-" if self.mantissa < 0 else ""
        s = str(abs(self.mantissa)).rjust(self.digits + 1, "0")
        return f"{sign}{s[:-self.digits] or '0'}.{s[-self.digits:]}" if self.digits else sign + s


def tail_estimate(s: QSeries, q0) -> Fraction:
    """Geometric estimate of the neglected tail ``sum_{n>N} c_n q0^n``.

    Uses the largest coefficient magnitude in the upper half of the window as
    the size of the next coefficients, doubled, and sums the geometric series.
    A heuristic bound: coefficient growth of the series families here is far
    slower than ``1/|q0|``.
    """
    r = abs(as_fraction(q0))
    if r >= 1:
        raise DomainError("|q0| must be < 1")
    if s.scale != 1:
        raise ValueError("numeric evaluation needs integer exponents")
    half = len(s.coeffs) // 2
    m = max((abs(c) for c in s.coeffs[half:]), default=0)
    m = max(as_fraction(m), Fraction(1)) * 2
    return m * r ** (s.order + 1) / (1 - r)


def eval_fixed(s: QSeries, q0, P: int, check_tail: bool = True) -> HighPrecisionValue:
    """Exact sum of the stored terms at ``q0``, rounded to P digits.

    Raises :class:`TailTooLarge` when the truncation tail may exceed 10^-P.
    """
    q0 = as_fraction(q0)
    if check_tail:
        t = tail_estimate(s, q0)
        if t * 10 ** P > 1:
            raise TailTooLarge(f"order {s.order} leaves a tail of about {float(t):.3g} at q0={q0}")
    if not s.coeffs:
        return HighPrecisionValue(0, P)
    # Horner over the dense window, exact
    u, w = q0.numerator, q0.denominator
    acc = Fraction(0)
    for c in reversed(s.coeffs):
        acc = acc * q0 + c
    acc *= Fraction(u, w) ** s.lo if s.lo >= 0 else Fraction(w, u) ** (-s.lo)
    return HighPrecisionValue.from_fraction(acc, P)


# ----------------------------------------------------------------- logarithm

def _isqrt_fixed(m: int, scale: int) -> int:
    """sqrt(m/scale)*scale rounded down."""
    return math.isqrt(m * scale)


def _log1p_alternating(t: int, scale: int) -> int:
    """log(1 + t/scale)*scale for small |t/scale| via t - t^2/2 + t^3/3 - ..."""
    total = 0
    power = t
    k = 1
    while power:
        term = power // k if power >= 0 else -((-power) // k)
        if term == 0:
            break
        total += term if k % 2 else -term
        power = power * t // scale if power * t >= 0 else -((-power * t) // scale)
        k += 1
    return total


def _log_fixed_int(m: int, scale: int, halvings: int) -> int:
    """log(m/scale)*scale for m/scale in [1/2, 2] after ``halvings`` square roots."""
    for _ in range(halvings):
        m = _isqrt_fixed(m, scale)
    return _log1p_alternating(m - scale, scale) << halvings


def log_fixed(v: HighPrecisionValue, P: int | None = None) -> HighPrecisionValue:
    """Natural logarithm of a positive fixed-point value, to about 2*10^-P."""
    if P is None:
        P = v.digits
    if v.mantissa <= 0:
        raise DomainError("log of a nonpositive value")
    halvings = max(4, int(math.isqrt(3 * P)))
    guard = P + 10 + int(halvings * 0.302) + 2
    scale = 10 ** guard
    x = _round_div(v.mantissa * scale, 10 ** v.digits)
    if x <= 0:
        raise DomainError("value underflows the working precision")
    # power-of-two reduction into [1/2, 2)
    k = x.bit_length() - scale.bit_length()
    if k > 0:
        x >>= k
    elif k < 0:
        x <<= -k
    while x >= 2 * scale:
        x >>= 1
        k += 1
    while 2 * x < scale:
        x <<= 1
        k -= 1
    r = _log_fixed_int(x, scale, halvings)
    if k:
        r += k * _log_fixed_int(2 * scale, scale, halvings)
    return HighPrecisionValue(_round_div(r, 10 ** (guard - P)), P)
