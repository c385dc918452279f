"""Factor a unit-leading series as ``c * prod_{n>=1} (1 - q^n)^(-e_n)``.

With ``q d/dq log s = sum a_m q^m`` one has ``a_m = sum_{d | m} d e_d``, so
Moebius inversion gives ``m e_m = sum_{d | m} mu(m/d) a_d``.  The ``a_m``
come from ``s * A = q s'`` solved term by term.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import NotUnitLeading
from .products import apply_poch_infinite
from .series import QSeries, _norm
from .series import SignedMonomial


@lru_cache(maxsize=None)
def _mobius_table(n: int) -> tuple[int, ...]:
    mu = [1] * (n + 1)
    is_comp = [False] * (n + 1)
    primes = []
    mu[0] = 0
    for i in range(2, n + 1):
        if not is_comp[i]:
            primes.append(i)
            mu[i] = -1
        for p in primes:
            if i * p > n:
                break
            is_comp[i * p] = True
            if i % p == 0:
                mu[i * p] = 0
                break
            mu[i * p] = -mu[i]
    return tuple(mu)


@dataclass(frozen=True)
class ExponentSeries:
    """``s = c * prod_{n=1}^{N} (1 - q^n)^(-e[n-1])`` to order N."""

    c: Fraction
    e: tuple  # e_1 .. e_N, ints where integral

    @property
    def N(self) -> int:
        return len(self.e)

    def __getitem__(self, n: int):
        """``e_n`` for 1 <= n <= N."""
        if not 1 <= n <= self.N:
            raise IndexError(n)
        return self.e[n - 1]

    def is_integral(self) -> bool:
        return all(isinstance(x, int) for x in self.e)

    def first_nonintegral(self) -> int | None:
        for n, x in enumerate(self.e, 1):
            if not isinstance(x, int):
                return n
        return None

    def __add__(self, other: "ExponentSeries") -> "ExponentSeries":
        n = min(self.N, other.N)
        return ExponentSeries(_norm(Fraction(self.c) * other.c),
                              tuple(_norm(a + b) for a, b in zip(self.e[:n], other.e[:n])))

    def to_series(self, order: int | None = None) -> QSeries:
        N = self.N if order is None else order
        cs = [0] * (N + 1)
        cs[0] = self.c
        for n, x in enumerate(self.e[:N], 1):
            if x:
                if not isinstance(x, int):
                    raise ValueError("non-integral exponents have no finite product form")
                # (1 - q^n)^(-x) = sum_k binom(x + k - 1, k) q^(n k), one pass for any x
                w = [1]
                for k in range(1, N // n + 1):
                    w.append(w[-1] * (x + k - 1) // k)
                out = [0] * (N + 1)
                for i, ci in enumerate(cs):
                    if ci:
                        for k in range(min(len(w), (N - i) // n + 1)):
                            if w[k]:
                                out[i + n * k] += ci * w[k]
                cs = out
        return QSeries(cs, 0, N)


def prodmake(s: QSeries, N: int | None = None) -> ExponentSeries:
    """Product exponents of ``s`` through ``q^N`` (default: its full order)."""
    if s.scale != 1:
        s = s.simplify_scale()
        if s.scale != 1:
            raise ValueError("prodmake needs integer exponents")
    if N is None:
        N = s.order
    if N > s.order:
        raise ValueError(f"N = {N} exceeds the series order {s.order}")
    if s.is_zero() or s.lo != 0:
        raise NotUnitLeading("prodmake needs a nonzero constant term")
    c0 = s.coeffs[0]
    cs = s.coeffs[: N + 1]
    integral = c0 in (1, -1) and all(isinstance(x, int) for x in cs)
    if integral:
        c = [x * c0 for x in cs] if c0 == -1 else list(cs)
    else:
        inv = Fraction(1) / Fraction(c0)
        c = [_norm(x * inv) for x in cs]
    c += [0] * (N + 1 - len(c))
    nz = [(k, c[k]) for k in range(1, N + 1) if c[k]]
    a = [0] * (N + 1)
    for m in range(1, N + 1):
        acc = m * c[m]
        for k, ck in nz:
            if k >= m:
                break
            ak = a[m - k]
            if ak:
                acc -= ak * ck
        a[m] = acc
    mu = _mobius_table(N)
    e = []
    for m in range(1, N + 1):
        tot = 0
        d = 1
        while d * d <= m:
            if m % d == 0:
                tot += mu[m // d] * a[d]
                if d * d != m:
                    tot += mu[d] * a[m // d]
            d += 1
        e.append(tot // m if tot % m == 0 else Fraction(tot, m))
    return ExponentSeries(_norm(c0), tuple(_norm(x) for x in e))


@dataclass(frozen=True)
class PeriodicProductForm:
    """``c * prod_{j=1}^{L} (q^j; q^L)_inf^(s_j)``."""

    L: int
    s: tuple  # s_1 .. s_L
    c: Fraction = Fraction(1)

    def __post_init__(self):
        if len(self.s) != self.L:
            raise ValueError("need exactly L exponents")
        object.__setattr__(self, "s", tuple(int(x) for x in self.s))
        object.__setattr__(self, "c", _norm(self.c))

    @property
    def max_abs(self) -> int:
        return max((abs(x) for x in self.s), default=0)

    def exponent(self, j: int) -> int:
        """Exponent of ``(q^j;q^L)_inf`` (j taken mod L, 1..L)."""
        return self.s[(j - 1) % self.L]

    def restate(self, L: int) -> "PeriodicProductForm":
        """Same product written modulo a multiple of ``L``."""
        if L % self.L:
            raise ValueError(f"{L} is not a multiple of {self.L}")
        return PeriodicProductForm(L, tuple(self.exponent(j) for j in range(1, L + 1)), self.c)

    def minimal(self) -> "PeriodicProductForm":
        for d in range(1, self.L + 1):
            if self.L % d == 0 and all(self.s[i] == self.s[i % d] for i in range(self.L)):
                return PeriodicProductForm(d, self.s[:d], self.c)
        return self  # pragma: no cover

    def to_series(self, order: int) -> QSeries:
        return product_to_series(self, order)

    def to_json(self) -> dict:
        c = Fraction(self.c)
        return {"L": self.L, "s": list(self.s), "c": str(c)}

    @classmethod
    def from_json(cls, d: dict) -> "PeriodicProductForm":
        return cls(int(d["L"]), tuple(d["s"]), Fraction(d.get("c", "1")))

    def __str__(self):
        parts = []
        for j, x in enumerate(self.s, 1):
            if x:
                parts.append(f"(q^{j};q^{self.L})^{x}" if x != 1 else f"(q^{j};q^{self.L})")
        body = " ".join(parts) or "1"
        return body if self.c == 1 else f"{self.c} * {body}"


def detect_period(e: ExponentSeries, moduli: Iterable[int], minimal: bool = True,
                  ) -> PeriodicProductForm | None:
    """First modulus L (smallest first) for which ``e_n`` depends only on n mod L.

    The whole window must be consistent and span at least ``2L`` terms; the
    exponents must be integers.  With ``minimal`` the result is reduced to its
    least period.
    """
    for L in sorted(set(moduli)):
        if L < 1 or e.N < 2 * L:
            continue
        ok = True
        for n in range(1, e.N + 1):
            x = e.e[n - 1]
            if not isinstance(x, int) or x != e.e[(n - 1) % L]:
                ok = False
                break
        if ok:
            p = PeriodicProductForm(L, tuple(-x for x in e.e[:L]), e.c)
            return p.minimal() if minimal else p
    return None


def product_to_series(p: PeriodicProductForm, order: int) -> QSeries:
    s = QSeries.monomial(p.c, 0, order)
    for j, x in enumerate(p.s, 1):
        if x:
            s = apply_poch_infinite(s, SignedMonomial(1, j), p.L, x)
    return s
