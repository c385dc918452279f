"""Truncated Laurent series in q with exact rational coefficients.

A :class:`QSeries` stores coefficients on the grid q^(1/scale).  Internally
every exponent is an integer number of grid units; ``lo`` is the first stored
unit and ``order`` the last unit known exactly.  Coefficients are ``int`` or
:class:`fractions.Fraction`, never floats.

Truncation is tracked honestly: binary operations return the largest order
for which the result is still exact.

    >>> q = QSeries.monomial(1, 1, order=5)
    >>> (1 - q).invert()
    1 + q + q^2 + q^3 + q^4 + q^5 + O(q^6)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Mapping, Union

from .errors import NotInvertible

Coeff = Union[int, Fraction]
Exponent = Union[int, Fraction]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def _norm(c) -> Coeff:
    """Exact coefficient, folded to ``int`` when integral."""
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, float):
        raise TypeError("floating point coefficients are not allowed")
    f = as_fraction(c)
    return f.numerator if f.denominator == 1 else f


def scale_for(*exponents: Exponent) -> int:
    """Smallest grid q^(1/k) containing all the given exponents."""
    k = 1
    for e in exponents:
        d = as_fraction(e).denominator
        k = k * d // math.gcd(k, d)
    return k


def to_units(e: Exponent, scale: int) -> int:
    u = as_fraction(e) * scale
    if u.denominator != 1:
        raise ValueError(f"exponent {e} is not on the q^(1/{scale}) grid")
    return u.numerator


def _units_floor(e: Exponent, scale: int) -> int:
    return math.floor(as_fraction(e) * scale)


@dataclass(frozen=True)
class SignedMonomial:
    """``sign * q^exponent`` with sign in {-1, 0, +1}; sign 0 is the constant 0."""

    sign: int
    exponent: Fraction = Fraction(0)

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or 1")
        object.__setattr__(self, "exponent", as_fraction(self.exponent))
        if self.sign == 0 and self.exponent != 0:
            object.__setattr__(self, "exponent", Fraction(0))

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    def __mul__(self, other: "SignedMonomial") -> "SignedMonomial":
        return SignedMonomial(self.sign * other.sign, self.exponent + other.exponent)

    def __neg__(self) -> "SignedMonomial":
        return SignedMonomial(-self.sign, self.exponent)

    def shift(self, e: Exponent) -> "SignedMonomial":
        return SignedMonomial(self.sign, self.exponent + as_fraction(e))

    def __str__(self) -> str:
        if self.sign == 0:
            return "0"
        s = "-" if self.sign < 0 else ""
        if self.exponent == 0:
            return s + "1"
        if self.exponent == 1:
            return s + "q"
        return f"{s}q^{self.exponent}"

    @classmethod
    def parse(cls, text: str) -> "SignedMonomial":
        """Parse ``'0'``, ``'1'``, ``'-1'``, ``'q'``, ``'-q^2'``, ``'q^3/2'``."""
        t = text.replace(" ", "").replace("**", "^")
        if t in ("0", "+0", "-0"):
            return cls(0)
        sign = 1
        if t[0] in "+-":
            sign = -1 if t[0] == "-" else 1
            t = t[1:]
        if t == "1":
            return cls(sign, 0)
        if not t.startswith("q"):
            raise ValueError(f"cannot parse monomial {text!r}")
        rest = t[1:]
        if rest == "":
            return cls(sign, 1)
        if not rest.startswith("^"):
            raise ValueError(f"cannot parse monomial {text!r}")
        e = rest[1:].strip("()")
        return cls(sign, Fraction(e))


def mono(text_or_sign, exponent: Exponent = 0) -> SignedMonomial:
    if isinstance(text_or_sign, str):
        return SignedMonomial.parse(text_or_sign)
    return SignedMonomial(text_or_sign, as_fraction(exponent))


class QSeries:
    """Immutable truncated Laurent series ``sum c_e q^(e/scale)``, exact through ``order``."""

    __slots__ = ("scale", "lo", "coeffs", "order")

    def __init__(self, coeffs: Iterable, lo: int = 0, order: int | None = None, scale: int = 1):
        cs = [_norm(c) for c in coeffs]
        if order is None:
            order = lo + len(cs) - 1
        if scale < 1:
            raise ValueError("scale must be a positive integer")
        # keep only lo..order
        keep = order - lo + 1
        if keep < len(cs):
            cs = cs[: max(keep, 0)]
        # strip leading zeros so lo is the valuation
        i = 0
        while i < len(cs) and cs[i] == 0:
            i += 1
        lo += i
        cs = cs[i:]
        if not cs:
            lo = order + 1
        else:
            cs.extend([0] * (order - lo + 1 - len(cs)))
        self.scale = scale
        self.lo = lo
        self.coeffs = tuple(cs)
        self.order = order

    def __setattr__(self, name, value):
        if hasattr(self, "order"):
            raise AttributeError("QSeries is immutable")
        object.__setattr__(self, name, value)

    # ----------------------------------------------------------- constructors

    @classmethod
    def _raw(cls, coeffs: list, lo: int, order: int, scale: int) -> "QSeries":
        # trusted fast path: coefficients already exact, list may be mutated
        keep = order - lo + 1
        if keep < len(coeffs):
            del coeffs[max(keep, 0):]
        i = 0
        n = len(coeffs)
        while i < n and not coeffs[i]:
            i += 1
        self = object.__new__(cls)
        if i == n:
            object.__setattr__(self, "coeffs", ())
            object.__setattr__(self, "lo", order + 1)
        else:
            if i:
                del coeffs[:i]
            if len(coeffs) < keep - i:
                coeffs.extend([0] * (keep - i - len(coeffs)))
            object.__setattr__(self, "coeffs", tuple(coeffs))
            object.__setattr__(self, "lo", lo + i)
        object.__setattr__(self, "scale", scale)
        object.__setattr__(self, "order", order)
        return self

    @classmethod
    def zero(cls, order: Exponent, scale: int = 1) -> "QSeries":
        return cls((), 0, _units_floor(order, scale), scale)

    @classmethod
    def one(cls, order: Exponent, scale: int = 1) -> "QSeries":
        return cls.monomial(1, 0, order, scale)

    @classmethod
    def monomial(cls, coeff, exponent: Exponent, order: Exponent, scale: int | None = None) -> "QSeries":
        if scale is None:
            scale = scale_for(exponent, order) if not isinstance(order, int) else scale_for(exponent)
        e = to_units(exponent, scale)
        n = _units_floor(order, scale)
        if e > n:
            return cls((), 0, n, scale)
        return cls([coeff], e, n, scale)

    @classmethod
    def from_terms(cls, terms: Mapping[Exponent, object] | Iterable[tuple], order: Exponent,
                   scale: int | None = None) -> "QSeries":
        """Build from ``{exponent: coeff}``; terms above ``order`` are dropped."""
        items = list(terms.items()) if isinstance(terms, Mapping) else list(terms)
        if scale is None:
            scale = scale_for(*(e for e, _ in items))
        n = _units_floor(order, scale)
        units = {}
        for e, c in items:
            u = to_units(e, scale)
            if u <= n:
                units[u] = units.get(u, 0) + _norm(c)
        if not units:
            return cls((), 0, n, scale)
        lo = min(units)
        cs = [0] * (n - lo + 1)
        for u, c in units.items():
            cs[u - lo] += c
        return cls(cs, lo, n, scale)

    @classmethod
    def polynomial(cls, coeffs: Iterable, order: Exponent, scale: int = 1) -> "QSeries":
        """Series from a dense coefficient list starting at exponent 0."""
        return cls(list(coeffs), 0, _units_floor(order, scale), scale)

    # ------------------------------------------------------------- accessors

    @property
    def max_exponent(self) -> Fraction:
        """Highest exponent (in powers of q) through which the series is exact."""
        return Fraction(self.order, self.scale)

    def is_zero(self) -> bool:
        return not self.coeffs

    def valuation(self) -> Fraction | None:
        return None if not self.coeffs else Fraction(self.lo, self.scale)

    def coeff(self, exponent: Exponent) -> Coeff:
        """Coefficient of q^exponent; raises if the exponent is beyond the known order."""
        f = as_fraction(exponent) * self.scale
        if f.denominator != 1:
            return 0
        u = f.numerator
        if u > self.order:
            raise IndexError(f"q^{exponent} is beyond the truncation order {self.max_exponent}")
        if u < self.lo:
            return 0
        return self.coeffs[u - self.lo]

    __getitem__ = coeff

    def unit_coeff(self, u: int) -> Coeff:
        if u < self.lo or u > self.order:
            if u > self.order:
                raise IndexError(u)
            return 0
        return self.coeffs[u - self.lo]

    def terms(self) -> Iterator[tuple[Exponent, Coeff]]:
        """Nonzero ``(exponent, coeff)`` pairs in increasing exponent order."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                yield _exp(self.lo + i, self.scale), c

    def to_dict(self) -> dict:
        return dict(self.terms())

    def dense(self, start: int = 0) -> list:
        """Coefficients for exponents ``start..order`` as a plain list (scale 1 helper)."""
        return [self.unit_coeff(u) if u >= self.lo else 0 for u in range(start, self.order + 1)]

    def nonzero_count(self, upto: Exponent | None = None) -> int:
        if upto is None:
            return sum(1 for c in self.coeffs if c != 0)
        lim = _units_floor(upto, self.scale)
        return sum(1 for i, c in enumerate(self.coeffs) if c != 0 and self.lo + i <= lim)

    # ------------------------------------------------------------- alignment

    def rescale(self, scale: int) -> "QSeries":
        """Same series on the finer grid q^(1/scale); ``scale`` must be a multiple."""
        if scale == self.scale:
            return self
        if scale % self.scale:
            raise ValueError(f"cannot move q^(1/{self.scale}) series onto q^(1/{scale}) grid")
        m = scale // self.scale
        cs = [0] * ((len(self.coeffs) - 1) * m + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            cs[i * m] = c
        order = self.order * m + (m - 1)
        return QSeries._raw(cs, self.lo * m, order, scale)

    def _aligned(self, other: "QSeries") -> tuple["QSeries", "QSeries"]:
        if self.scale == other.scale:
            return self, other
        k = self.scale * other.scale // math.gcd(self.scale, other.scale)
        return self.rescale(k), other.rescale(k)

    def simplify_scale(self) -> "QSeries":
        """Coarsest grid that still holds every stored exponent."""
        g = self.scale
        for i, c in enumerate(self.coeffs):
            if c:
                g = math.gcd(g, self.lo + i)
                if g == 1:
                    return self
        if g == 1:
            return self
        if not self.coeffs:
            return QSeries._raw([], 0, self.order // g, self.scale // g)
        return QSeries._raw(list(self.coeffs[::g]), self.lo // g, self.order // g, self.scale // g)

    # ------------------------------------------------------------ arithmetic

    def _coerce(self, other) -> "QSeries":
        if isinstance(other, QSeries):
            return other
        if isinstance(other, (int, Fraction)) or isinstance(other, Rational):
            return QSeries([other], 0, self.order if self.order >= 0 else 0, self.scale)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._aligned(other)
        order = min(a.order, b.order)
        lo = min(a.lo, b.lo)
        if lo > order:
            return QSeries._raw([], 0, order, a.scale)
        cs = [0] * (order - lo + 1)
        for src in (a, b):
            off = src.lo - lo
            for i, c in enumerate(src.coeffs):
                if off + i > order - lo:
                    break
                if c:
                    cs[off + i] += c
        return QSeries._raw(cs, lo, order, a.scale)

    __radd__ = __add__

    def __neg__(self):
        return QSeries._raw([-c for c in self.coeffs], self.lo, self.order, self.scale)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scalar_mul(self, c) -> "QSeries":
        c = _norm(c)
        if c == 0:
            return QSeries._raw([], 0, self.order, self.scale)
        return QSeries._raw([c * x for x in self.coeffs], self.lo, self.order, self.scale)

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            if isinstance(other, (int, Fraction)) or isinstance(other, Rational):
                return self.scalar_mul(other)
            return NotImplemented
        a, b = self._aligned(other)
        order = min(a.order + b.lo, b.order + a.lo)
        if not a.coeffs or not b.coeffs:
            return QSeries._raw([], 0, order, a.scale)
        lo = a.lo + b.lo
        n = order - lo + 1
        if n <= 0:
            return QSeries._raw([], 0, order, a.scale)
        # iterate over the sparser operand
        nza = [(i, c) for i, c in enumerate(a.coeffs[:n]) if c]
        nzb = [(i, c) for i, c in enumerate(b.coeffs[:n]) if c]
        if len(nzb) < len(nza):
            nza, nzb = nzb, nza
        cs = [0] * n
        for i, ca in nza:
            lim = n - i
            for j, cb in nzb:
                if j >= lim:
                    break
                cs[i + j] += ca * cb
        return QSeries._raw(cs, lo, order, a.scale)

    def __rmul__(self, other):
        return self.__mul__(other)

    def invert(self) -> "QSeries":
        """Multiplicative inverse; exact through ``order - 2*valuation``."""
        if not self.coeffs:
            raise NotInvertible("cannot invert a series that vanishes to its truncation order")
        v = self.lo
        order = self.order - 2 * v
        n = order + v + 1  # number of coefficients of the inverse (starting at -v)
        c0 = as_fraction(self.coeffs[0])
        inv0 = 1 / c0
        a = self.coeffs
        la = len(a)
        r = [0] * max(n, 0)
        if n > 0:
            r[0] = _norm(inv0)
        nz = [(i, a[i]) for i in range(1, min(la, n)) if a[i]]
        integral = inv0.denominator == 1 and all(isinstance(c, int) for _, c in nz)
        ninv = -inv0
        for k in range(1, n):
            s = 0
            for i, c in nz:
                if i > k:
                    break
                rk = r[k - i]
                if rk:
                    s += c * rk
            if integral:
                r[k] = int(ninv) * s
            else:
                r[k] = _norm(ninv * s)
        return QSeries._raw(r, -v, order, self.scale)

    def __truediv__(self, other):
        if isinstance(other, QSeries):
            return self * other.invert()
        if isinstance(other, (int, Fraction)) or isinstance(other, Rational):
            if other == 0:
                raise NotInvertible("division by zero")
            return self.scalar_mul(1 / as_fraction(other))
        return NotImplemented

    def __rtruediv__(self, other):
        return self.invert() * other

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.invert() ** (-k)
        if k == 0:
            order = self.order - self.lo if self.coeffs else self.order
            return QSeries._raw([1], 0, max(order, 0), self.scale)
        result = None
        base = self
        while True:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if not k:
                return result
            base = base * base

    # -------------------------------------------------------- fast factors

    def mul_binomial(self, c, exponent_units: int) -> "QSeries":
        """Multiply by ``1 + c*q^(e/scale)`` in O(length)."""
        c = _norm(c)
        e = exponent_units
        if c == 0:
            return self
        if e == 0:
            return self.scalar_mul(1 + c)
        if e < 0:
            # (1 + c q^e) = q^e (c + q^-e): exact polynomial of valuation e
            return self.shift_units(e).mul_binomial_rev(c, -e)
        a = self.coeffs
        n = len(a)
        cs = list(a)
        for i in range(e, n):
            x = a[i - e]
            if x:
                cs[i] += c * x
        return QSeries._raw(cs, self.lo, self.order, self.scale)

    def mul_binomial_rev(self, c, e: int) -> "QSeries":
        """Multiply by ``c + q^e`` (e > 0)."""
        a = self.coeffs
        cs = [c * x for x in a]
        for i in range(e, len(a)):
            x = a[i - e]
            if x:
                cs[i] += x
        return QSeries._raw(cs, self.lo, self.order, self.scale)

    def div_binomial(self, c, exponent_units: int) -> "QSeries":
        """Divide by ``1 + c*q^(e/scale)`` in O(length)."""
        c = _norm(c)
        e = exponent_units
        if c == 0:
            return self
        if e == 0:
            if 1 + c == 0:
                raise NotInvertible("division by the zero factor (1 - 1)")
            return self.scalar_mul(Fraction(1) / (1 + c))
        if e < 0:
            # 1 + c q^e = c q^e (1 + q^-e / c)
            inv = Fraction(1) / as_fraction(c)
            return self.shift_units(-e).scalar_mul(inv).div_binomial(inv, -e)
        cs = list(self.coeffs)
        nc = -c
        for i in range(e, len(cs)):
            x = cs[i - e]
            if x:
                cs[i] += nc * x
        return QSeries._raw(cs, self.lo, self.order, self.scale)

    def shift_units(self, u: int) -> "QSeries":
        return QSeries._raw(list(self.coeffs), self.lo + u, self.order + u, self.scale)

    def shift(self, exponent: Exponent) -> "QSeries":
        """Multiply by q^exponent (exact; the order moves with the series)."""
        k = scale_for(exponent)
        s = self.rescale(self.scale * k // math.gcd(self.scale, k)) if self.scale % k else self
        return s.shift_units(to_units(exponent, s.scale))

    # -------------------------------------------------------- transformations

    def truncate(self, order: Exponent) -> "QSeries":
        n = _units_floor(order, self.scale)
        if n >= self.order:
            return self
        return QSeries._raw(list(self.coeffs), self.lo, n, self.scale)

    def substitute_power(self, k: int) -> "QSeries":
        """q -> q^k for a positive integer k."""
        if not isinstance(k, int) or k < 1:
            raise ValueError("substitute_power needs a positive integer")
        if k == 1:
            return self
        cs = [0] * ((len(self.coeffs) - 1) * k + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            cs[i * k] = c
        # known through (order+1)*k - 1
        return QSeries._raw(cs, self.lo * k, (self.order + 1) * k - 1, self.scale)

    def derivative_q(self) -> "QSeries":
        """``q * d/dq`` applied termwise (exponent times coefficient)."""
        cs = [_norm(c * Fraction(self.lo + i, self.scale)) if c else 0 for i, c in enumerate(self.coeffs)]
        return QSeries._raw(cs, self.lo, self.order, self.scale)

    def evaluate(self, x) -> Fraction:
        """Exact sum of the stored terms at the rational point ``x`` (scale 1 only)."""
        if self.scale != 1:
            raise ValueError("exact evaluation needs integer exponents")
        x = as_fraction(x)
        total = Fraction(0)
        for e, c in self.terms():
            total += c * x ** int(e)
        return total

    # ----------------------------------------------------------- comparison

    def first_difference(self, other: "QSeries", upto: Exponent | None = None) -> Fraction | None:
        """Lowest exponent at which the two series disagree, within both orders."""
        a, b = self._aligned(other)
        order = min(a.order, b.order)
        if upto is not None:
            order = min(order, _units_floor(upto, a.scale))
        start = min(a.lo, b.lo)
        for u in range(start, order + 1):
            ca = a.coeffs[u - a.lo] if a.lo <= u < a.lo + len(a.coeffs) else 0
            cb = b.coeffs[u - b.lo] if b.lo <= u < b.lo + len(b.coeffs) else 0
            if ca != cb:
                return Fraction(u, a.scale)
        return None

    def agrees_with(self, other: "QSeries", upto: Exponent | None = None) -> bool:
        return self.first_difference(other, upto) is None

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        a, b = self._aligned(other)
        return a.order == b.order and a.lo == b.lo and a.coeffs == b.coeffs

    def __hash__(self):
        s = self.simplify_scale()
        return hash((s.scale, s.lo, s.coeffs, s.order))

    def __repr__(self) -> str:
        return self.format()

    def format(self, max_terms: int = 12) -> str:
        parts = []
        for k, (e, c) in enumerate(self.terms()):
            if k == max_terms:
                parts.append("...")
                break
            parts.append(_fmt_term(c, e))
        body = " + ".join(parts).replace("+ -", "- ") if parts else "0"
        return f"{body} + O(q^{_exp(self.order + 1, self.scale)})"


def _exp(u: int, scale: int) -> Exponent:
    if scale == 1:
        return u
    f = Fraction(u, scale)
    return f.numerator if f.denominator == 1 else f


def _fmt_term(c, e) -> str:
    if e == 0:
        return str(c)
    mon = "q" if e == 1 else f"q^{e}" if not isinstance(e, Fraction) else f"q^({e})"
    if c == 1:
        return mon
    if c == -1:
        return "-" + mon
    return f"{c}*{mon}"


def align_all(series: Iterable[QSeries]) -> list[QSeries]:
    series = list(series)
    k = 1
    for s in series:
        k = k * s.scale // math.gcd(k, s.scale)
    return [s.rescale(k) for s in series]
