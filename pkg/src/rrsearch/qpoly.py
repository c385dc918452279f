"""q-binomial and q-trinomial coefficients, and two finite polynomial identities.

Polynomials here are exact at every order, so they get their own small type
instead of a truncated :class:`QSeries`.  Coefficients are integers; Laurent
support is allowed because ``V(m, a)`` carries a ``q^(m-a)`` weight.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError, VerificationError
from .series import QSeries, _fmt_term


@dataclass(frozen=True)
class QPolynomial:
    """``sum c_i q^(lo + i)`` with integer coefficients and no truncation."""

    coeffs: tuple = ()
    lo: int = 0

    def __post_init__(self):
        cs = list(self.coeffs)
        lo = self.lo
        while cs and cs[-1] == 0:
            cs.pop()
        i = 0
        while i < len(cs) and cs[i] == 0:
            i += 1
        object.__setattr__(self, "coeffs", tuple(cs[i:]))
        object.__setattr__(self, "lo", lo + i if cs[i:] else 0)

    @classmethod
    def const(cls, c: int) -> "QPolynomial":
        return cls((c,))

    @classmethod
    def monomial(cls, c: int, e: int) -> "QPolynomial":
        return cls((c,), e)

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int | None:
        return None if not self.coeffs else self.lo + len(self.coeffs) - 1

    def coeff(self, e: int) -> int:
        i = e - self.lo
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __add__(self, other: "QPolynomial") -> "QPolynomial":
        if not self.coeffs:
            return other
        if not other.coeffs:
            return self
        lo = min(self.lo, other.lo)
        hi = max(self.degree, other.degree)
        cs = [0] * (hi - lo + 1)
        for p in (self, other):
            for i, c in enumerate(p.coeffs):
                cs[p.lo - lo + i] += c
        return QPolynomial(tuple(cs), lo)

    def __neg__(self) -> "QPolynomial":
        return QPolynomial(tuple(-c for c in self.coeffs), self.lo)

    def __sub__(self, other: "QPolynomial") -> "QPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "QPolynomial":
        if isinstance(other, int):
            return QPolynomial(tuple(other * c for c in self.coeffs), self.lo)
        if not self.coeffs or not other.coeffs:
            return QPolynomial()
        cs = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        cs[i + j] += a * b
        return QPolynomial(tuple(cs), self.lo + other.lo)

    __rmul__ = __mul__

    def truncate(self, upto: int) -> "QPolynomial":
        """Drop every term above ``q^upto``."""
        if not self.coeffs or self.degree <= upto:
            return self
        return QPolynomial(self.coeffs[: max(upto - self.lo + 1, 0)], self.lo)

    def shift(self, e: int) -> "QPolynomial":
        return QPolynomial(self.coeffs, self.lo + e) if self.coeffs else self

    def substitute_power(self, k: int) -> "QPolynomial":
        if k < 1:
            raise ValueError("substitute_power needs a positive integer")
        if not self.coeffs:
            return self
        cs = [0] * ((len(self.coeffs) - 1) * k + 1)
        for i, c in enumerate(self.coeffs):
            cs[i * k] = c
        return QPolynomial(tuple(cs), self.lo * k)

    def divmod(self, d: "QPolynomial") -> tuple["QPolynomial", "QPolynomial"]:
        """Long division by ``d`` whose leading coefficient is +-1."""
        if not d.coeffs:
            raise ZeroDivisionError("division by the zero polynomial")
        lead = d.coeffs[-1]
        if lead not in (1, -1):
            raise ValueError("divisor must have leading coefficient +-1")
        r = list(self.coeffs)
        n, m = len(r), len(d.coeffs)
        if n < m:
            return QPolynomial(), self
        qc = [0] * (n - m + 1)
        for i in range(n - m, -1, -1):
            c = r[i + m - 1] * lead
            if c:
                qc[i] = c
                for j, x in enumerate(d.coeffs):
                    r[i + j] -= c * x
        return QPolynomial(tuple(qc), self.lo - d.lo), QPolynomial(tuple(r[: m - 1]), self.lo)

    def exact_div(self, d: "QPolynomial") -> "QPolynomial":
        quo, rem = self.divmod(d)
        if not rem.is_zero():
            raise VerificationError("polynomial division left a remainder")
        return quo

    def to_series(self, order: int) -> QSeries:
        if not self.coeffs:
            return QSeries.zero(order)
        return QSeries(list(self.coeffs), self.lo, order)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = [_fmt_term(c, self.lo + i) for i, c in enumerate(self.coeffs) if c]
        return " + ".join(parts).replace("+ -", "- ")


ZERO = QPolynomial()
ONE = QPolynomial.const(1)


@lru_cache(maxsize=None)
def _qfact(n: int) -> QPolynomial:
    """``(q;q)_n``."""
    p = ONE
    for j in range(1, n + 1):
        p = p * QPolynomial((1,) + (0,) * (j - 1) + (-1,))
    return p


@lru_cache(maxsize=None)
def _qbinom1(A: int, B: int) -> QPolynomial:
    if not 0 <= B <= A:
        return ZERO
    B = min(B, A - B)
    return _qfact(A).exact_div(_qfact(B) * _qfact(A - B))


def qbinom(A: int, B: int, base: int = 1) -> QPolynomial:
    """Gaussian coefficient ``[A; B]`` in base ``q^base`` (zero unless 0 <= B <= A)."""
    p = _qbinom1(A, B)
    return p.substitute_power(base) if base != 1 and p.coeffs else p


@lru_cache(maxsize=None)
def trinomial_T1(m: int, a: int, base: int = 1) -> QPolynomial:
    """``sum_j (-1)^j q^j [m; j]_{q^2} [2m-2j; m-a-j]_q`` (all in base ``q^base``)."""
    if m < 0:
        return ZERO
    out = ZERO
    for j in range(m + 1):
        t = qbinom(2 * m - 2 * j, m - a - j)
        if t.is_zero():
            continue
        term = (qbinom(m, j, 2) * t).shift(j)
        out = out - term if j % 2 else out + term
    return out.substitute_power(base) if base != 1 else out


@lru_cache(maxsize=None)
def trinomial_T0(m: int, a: int, base: int = 1) -> QPolynomial:
    """``sum_j (-1)^j [m; j]_{q^2} [2m-2j; m-a-j]_q`` (all in base ``q^base``)."""
    if m < 0:
        return ZERO
    out = ZERO
    for j in range(m + 1):
        t = qbinom(2 * m - 2 * j, m - a - j)
        if t.is_zero():
            continue
        term = qbinom(m, j, 2) * t
        out = out - term if j % 2 else out + term
    return out.substitute_power(base) if base != 1 else out


def trinomial_V(m: int, a: int, base: int = 1) -> QPolynomial:
    """``T1(m-1, a) + q^(m-a) T0(m-1, a-1)``; defined for m >= 1."""
    if m < 1:
        raise DomainError("V(m, a) needs m >= 1")
    p = trinomial_T1(m - 1, a) + trinomial_T0(m - 1, a - 1).shift(m - a)
    return p.substitute_power(base) if base != 1 else p


def _v_literal(m: int, a: int, base: int) -> QPolynomial:
    # the defining sums of V without the m >= 1 domain check
    p = trinomial_T1(m - 1, a) + trinomial_T0(m - 1, a - 1).shift(m - a)
    return p.substitute_power(base) if base != 1 else p


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def mod4poly_lhs(N: int, upto: int | None = None) -> QPolynomial:
    """Left side of the finite mod 4 identity, optionally only through ``q^upto``.

    Ranges come from the vanishing of the q-binomials: the last factor needs
    ``2i + 2j + 3k <= N`` and the first ``i <= j + 1``.
    """
    if N < 0:
        raise DomainError("N must be >= 0")

    def cut(p):
        return p if upto is None else p.truncate(upto)

    lhs = ZERO
    for k in range(N // 3 + 1):
        for j in range((N - 3 * k) // 2 + 1):
            for i in range(min(j + 1, (N - 3 * k - 2 * j) // 2) + 1):
                e = j * j + j + i * i + i + 3 * k
                if upto is not None and e > upto:
                    continue
                t = qbinom(N - 2 * i - j - 3 * k, j)
                if t.is_zero():
                    continue
                room = None if upto is None else upto - e
                t = t if room is None else t.truncate(room)
                t = cut_mul(cut_mul(t, qbinom(j + 1, i, 2), room), qbinom(j + k, k, 3), room)
                lhs = lhs + t.shift(e) * _sign(i + k)
    return cut(lhs)


def cut_mul(a: QPolynomial, b: QPolynomial, upto: int | None) -> QPolynomial:
    if upto is None:
        return a * b
    return (a.truncate(upto - (b.lo if b.coeffs else 0)) * b.truncate(upto - (a.lo if a.coeffs else 0))
            ).truncate(upto)


def mod4poly_sides(N: int) -> tuple[QPolynomial, QPolynomial]:
    """Both sides of the finite form of the mod 4 identity."""
    lhs = mod4poly_lhs(N)
    rhs = ZERO
    for j in range(-(N // 2), N // 2 + 1):
        t = trinomial_T1(N, 2 * j)
        if not t.is_zero():
            rhs = rhs + t.shift(2 * j * j) * _sign(j)
    return lhs, rhs


def check_mod4poly(N: int) -> bool:
    lhs, rhs = mod4poly_sides(N)
    return lhs == rhs


def mod8poly_sides(N: int) -> tuple[QPolynomial, QPolynomial]:
    """Both sides of the finite form of the mod 8 identity.

    ``[j+k-1; k]`` vanishes at j = 0 (for k = 0 it is ``[-1; 0] = 0``), so the
    explicit leading 1 is the whole j = 0 contribution.  At N = 0 the right
    side is evaluated literally: V(0, .) is built from the empty sums
    T(-1, .) = 0, so the sides are 1 and 0 and the identity fails there.
    """
    if N < 0:
        raise DomainError("N must be >= 0")
    lhs = ONE
    for k in range(N // 2 + 1):
        for j in range(1, N - 2 * k + 1):
            for i in range(min(2 * j, N - 2 * k - j) + 1):
                t = qbinom(N - i - 2 * k, j, 4)
                if t.is_zero():
                    continue
                t = t * qbinom(2 * j, i, 2) * qbinom(j + k - 1, k, 8)
                lhs = lhs + t.shift(2 * j * j - 2 * j + i * i + 4 * k) * _sign(i)
    rhs = ZERO
    for j in range(-N - 1, N + 1):
        v = _v_literal(N, 2 * j + 1, 2)
        if v.is_zero():
            continue
        w = ONE + QPolynomial.monomial(1, 2 * j)
        rhs = rhs + (v * w).shift(4 * j * j + j) * _sign(j)
    return lhs, rhs


def check_mod8poly(N: int) -> bool:
    lhs, rhs = mod8poly_sides(N)
    return lhs == rhs
