"""Integer relations among fixed-point logarithms, by LLL on a knapsack lattice.

The lattice for values ``v_0..v_n`` has rows ``(e_i, round(C * v_i))`` with
``C = 10^(P-5)``.  A short reduced vector ``(b, sum b_i w_i)`` with a tiny
last entry is a candidate relation ``sum b_i v_i = 0``.

Coordinates whose scaled value rounds to zero cannot be resolved at the
working precision (they would give spurious unit relations).  They are left
out of the lattice and reported in :attr:`IntegerRelation.unresolved`; the
caller's symbolic check settles them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import InsufficientPrecision, NotUnitLeading
from .fixedpoint import HighPrecisionValue, eval_fixed, log_fixed
from .lll import lll_reduce
from .products import poch_infinite
from .series import QSeries, SignedMonomial, as_fraction

SLACK_DIGITS = 5


@dataclass(frozen=True)
class LogLattice:
    values: tuple  # HighPrecisionValue: log S then log (q^j;q^L)_inf, j = 1..L
    q0: Fraction
    L: int
    P: int
    constant: Fraction = Fraction(1)  # exact constant term factored out of S

    def __post_init__(self):
        if len(self.values) != self.L + 1:
            raise ValueError("a log lattice has L + 1 entries")
        if any(v.digits != self.P for v in self.values):
            raise ValueError("all entries must share the precision P")


@dataclass(frozen=True)
class IntegerRelation:
    b: tuple  # b_0 .. b_L
    residual: HighPrecisionValue
    unresolved: tuple = ()  # indices left out of the lattice

    @property
    def max_abs(self) -> int:
        return max(abs(x) for x in self.b)

    def product_exponents(self) -> tuple:
        """``s_j = -b_j / b_0`` when ``b_0 = 1`` (the shape ``log S = sum s_j log(...)``)."""
        if self.b[0] != 1:
            raise ValueError("relation is not normalized to b_0 = 1")
        return tuple(-x for x in self.b[1:])


def _normalize(b: Sequence[int]) -> tuple:
    g = 0
    for x in b:
        g = math.gcd(g, x)
    if g == 0:
        return tuple(b)
    b = [x // g for x in b]
    lead = next((x for x in b if x), 0)
    if b[0] < 0 or (b[0] == 0 and lead < 0):
        b = [-x for x in b]
    return tuple(b)


@lru_cache(maxsize=256)
def product_logs(L: int, q0: Fraction, P: int) -> tuple:
    """``log (q^j; q^L)_inf`` at ``q0`` for j = 1..L, each to P digits."""
    out = []
    r = abs(q0)
    # smallest order with q0^(N+1) far below 10^-(P+10)
    N = max(1, math.ceil((P + 12) / -math.log10(r))) if r else 1
    for j in range(1, L + 1):
        s = poch_infinite(SignedMonomial(1, j), L, N)
        v = eval_fixed(s, q0, P + 10)
        out.append(log_fixed(v, P))
    return tuple(out)


def series_log(s: QSeries, q0, P: int) -> tuple[HighPrecisionValue, Fraction]:
    """``(log(S(q0) / c), c)`` with ``c`` the exact constant term of ``S``."""
    if s.is_zero() or s.lo != 0:
        raise NotUnitLeading("the series must have a nonzero constant term")
    c = as_fraction(s.coeffs[0])
    v = eval_fixed(s, q0, P + 10)
    ratio = HighPrecisionValue.from_fraction(v.to_fraction() / c, P + 10)
    return log_fixed(ratio, P), c


def required_order(q0, P: int) -> int:
    r = abs(as_fraction(q0))
    return max(4, math.ceil((P + 12) / -math.log10(r)) + 2)


def build_log_lattice(series: QSeries, L: int, q0=Fraction(1, 10_000), P: int = 60) -> LogLattice:
    """``(log S, log(q;q^L), ..., log(q^L;q^L))`` at ``q0``, P digits."""
    q0 = as_fraction(q0)
    v0, c = series_log(series, q0, P)
    return LogLattice((v0,) + product_logs(L, q0, P), q0, L, P, c)


def _scaled(v: HighPrecisionValue) -> int:
    # round(v * 10^(P-5)) from the P-digit mantissa
    m = v.mantissa
    d = 10 ** SLACK_DIGITS
    return (m + d // 2) // d if m >= 0 else -((-m + d // 2) // d)


def find_relation(lat: LogLattice, coeff_bound: int = 10, require_b0: bool = True,
                  precision_guard: bool = True) -> IntegerRelation | None:
    """Small-coefficient relation among the lattice values, or None.

    Every reduced basis vector is scanned; a vector counts as a relation when
    its scaled residual is within the rounding noise of its coefficients.
    Relations with ``max |b_j| >= coeff_bound`` are discarded as spurious.
    """
    n = lat.L + 1
    if precision_guard and 10 ** lat.P <= coeff_bound ** (n + 1):
        # not decisive at this precision even with all coordinates resolved
        raise InsufficientPrecision(f"P = {lat.P} is too small for {n} values with bound {coeff_bound}")
    w = [_scaled(v) for v in lat.values]
    keep = [i for i in range(n) if w[i] != 0]
    unresolved = tuple(i for i in range(n) if w[i] == 0)
    if require_b0 and 0 not in keep:
        # log S itself is below resolution: S = c to working precision
        b = [0] * n
        b[0] = 1
        return IntegerRelation(tuple(b), abs(lat.values[0]), unresolved)
    m = len(keep)
    basis = []
    for r, i in enumerate(keep):
        row = [0] * m
        row[r] = 1
        row.append(w[i])
        basis.append(row)
    red = lll_reduce(basis)
    best = None
    doubtful = False
    for row in red:
        coeffs, tail = row[:m], row[m]
        if require_b0 and coeffs[0] == 0:
            continue
        # each scaled entry carries up to 1/2 unit rounding plus log error
        noise = sum(abs(x) for x in coeffs) + 1
        big = max(abs(x) for x in coeffs)
        if abs(tail) <= noise:
            if big >= coeff_bound:
                continue
            b = [0] * n
            for r, i in enumerate(keep):
                b[i] = coeffs[r]
            b = _normalize(b)
            res = abs(sum((bi * v.mantissa for bi, v in zip(b, lat.values)), 0))
            cand = IntegerRelation(b, HighPrecisionValue(res, lat.P), unresolved)
            if best is None or cand.max_abs < best.max_abs:
                best = cand
        elif big < coeff_bound and abs(tail) <= noise * 10 ** 3:
            doubtful = True
    if best is None and doubtful:
        raise InsufficientPrecision("a small-coefficient vector has a residual near the noise floor")
    return best
