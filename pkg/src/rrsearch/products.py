"""q-Pochhammer symbols, Ramanujan theta functions and false theta series.

Arguments are :class:`SignedMonomial` values (``-q^3``, ``q^(1/2)``, ``-1``,
``0``...).  Bases are positive powers ``q^base_exp``.  Every builder returns a
:class:`QSeries` exact through ``order``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

from .errors import DegenerateProduct, DomainError, NonConvergentTheta
from .series import Exponent, QSeries, SignedMonomial, as_fraction, mono, scale_for, to_units

Arg = Union[SignedMonomial, str]


def _arg(a: Arg) -> SignedMonomial:
    return mono(a) if isinstance(a, str) else a


def _grid(order: Exponent, *exps: Exponent, scale: int | None = None) -> tuple[int, int]:
    k = scale_for(*exps)
    if scale is not None:
        if scale % k:
            raise ValueError(f"scale {scale} does not hold exponents {exps}")
        k = scale
    return k, math.floor(as_fraction(order) * k)


def poch_finite(arg: Arg, base_exp: Exponent, n: int, order: Exponent, scale: int | None = None) -> QSeries:
    """``(arg; q^base_exp)_n = prod_{j<n} (1 - arg*q^(base_exp*j))``.

    Negative ``n`` follows the usual convention ``(a;q)_{-n} = 1/(a q^{-n}; q)_n``.
    """
    a = _arg(arg)
    base_exp = as_fraction(base_exp)
    k, N = _grid(order, a.exponent, base_exp, scale=scale)
    return apply_poch(QSeries._raw([1], 0, N, k), a, base_exp, n)


def _divide_poch(s: QSeries, a: SignedMonomial, base_exp: Fraction, n: int) -> QSeries:
    """``s / (a; q^base_exp)_n`` with n >= 0."""
    if a.is_zero or n <= 0:
        return s
    k = s.scale
    e0 = to_units(a.exponent, k)
    b = to_units(base_exp, k)
    c = -a.sign
    for j in range(n):
        e = e0 + b * j
        if e > 0 and e > s.order - s.lo:
            break
        s = s.div_binomial(c, e)
    return s


def _multiply_poch(s: QSeries, a: SignedMonomial, base_exp: Fraction, n: int) -> QSeries:
    if a.is_zero or n <= 0:
        return s
    k = s.scale
    e0 = to_units(a.exponent, k)
    b = to_units(base_exp, k)
    c = -a.sign
    for j in range(n):
        e = e0 + b * j
        if e > 0 and e > s.order - s.lo:
            break
        s = s.mul_binomial(c, e)
    return s


def apply_poch(s: QSeries, arg: Arg, base_exp: Exponent, n: int, power: int = 1) -> QSeries:
    """Multiply ``s`` by ``(arg; q^base_exp)_n ** power`` (power = +1 or -1).

    ``s`` must already sit on a grid holding the factor exponents.
    """
    a = _arg(arg)
    base_exp = as_fraction(base_exp)
    if n < 0:
        a = SignedMonomial(a.sign, a.exponent + n * base_exp)
        n, power = -n, -power
    if power == 1:
        return _multiply_poch(s, a, base_exp, n)
    if power == -1:
        return _divide_poch(s, a, base_exp, n)
    raise ValueError("power must be +1 or -1")


def _check_infinite(a: SignedMonomial, base_exp: Fraction):
    if base_exp <= 0:
        raise DomainError("the base must be a positive power of q")
    if a.exponent < 0:
        raise DomainError("infinite products need an argument exponent >= 0")
    if a.exponent == 0 and a.sign == 1:
        raise DegenerateProduct("(1; q)_inf contains the factor 1 - 1")


def poch_infinite(arg: Arg, base_exp: Exponent, order: Exponent, scale: int | None = None) -> QSeries:
    """``(arg; q^base_exp)_inf`` truncated to ``order``."""
    a = _arg(arg)
    base_exp = as_fraction(base_exp)
    k, N = _grid(order, a.exponent, base_exp, scale=scale)
    s = QSeries._raw([1], 0, N, k)
    if a.is_zero:
        return s
    _check_infinite(a, base_exp)
    return apply_poch_infinite(s, a, base_exp, 1)


def apply_poch_infinite(s: QSeries, arg: Arg, base_exp: Exponent, power: int = 1) -> QSeries:
    """Multiply ``s`` by ``(arg; q^base_exp)_inf ** power`` for any integer power."""
    a = _arg(arg)
    base_exp = as_fraction(base_exp)
    if a.is_zero or power == 0:
        return s
    _check_infinite(a, base_exp)
    k = s.scale
    e0 = to_units(a.exponent, k)
    b = to_units(base_exp, k)
    c = -a.sign
    # only factors whose exponent can reach the window matter
    top = s.order - s.lo
    j = 0
    while True:
        e = e0 + b * j
        if e > top and e > 0:
            break
        for _ in range(abs(power)):
            s = s.mul_binomial(c, e) if power > 0 else s.div_binomial(c, e)
        j += 1
    return s


def poch_signed_base(arg: SignedMonomial, base: SignedMonomial, order: Exponent,
                     scale: int | None = None) -> QSeries:
    """``(arg; base)_inf`` where the base itself may carry a sign (e.g. base -q^3)."""
    if base.sign == 1:
        return poch_infinite(arg, base.exponent, order, scale=scale)
    if base.sign != -1:
        raise DomainError("base must be a signed power of q")
    # split j even/odd: (a; -Q)_inf = (a; Q^2)_inf (-a Q; Q^2)_inf
    k, _ = _grid(order, arg.exponent, base.exponent, scale=scale)
    two = 2 * base.exponent
    s = poch_infinite(arg, two, order, scale=k)
    odd = SignedMonomial(-arg.sign, arg.exponent + base.exponent)
    return apply_poch_infinite(s, odd, two, 1)


# --------------------------------------------------------------------- theta


def _tri(n: int) -> int:
    return n * (n + 1) // 2


def _theta_indices(alpha: Fraction, beta: Fraction, top: Fraction):
    """Indices n with alpha*T(n) + beta*T(n-1) <= top, T(n) = n(n+1)/2."""
    s = alpha + beta
    # E(n) = (s n^2 + (alpha - beta) n) / 2, vertex at (beta - alpha) / (2 s)
    vertex = (beta - alpha) / (2 * s)
    out = []
    n = math.floor(vertex)
    while True:
        e = alpha * _tri(n) + beta * _tri(n - 1)
        if e > top and n < vertex:
            break
        if e <= top:
            out.append((n, e))
        n -= 1
    n = math.floor(vertex) + 1
    while True:
        e = alpha * _tri(n) + beta * _tri(n - 1)
        if e > top and n > vertex:
            break
        if e <= top:
            out.append((n, e))
        n += 1
    return out


def _check_theta(a: SignedMonomial, b: SignedMonomial):
    if a.is_zero or b.is_zero:
        raise DomainError("theta arguments must be nonzero monomials")
    if a.exponent + b.exponent <= 0:
        raise NonConvergentTheta(f"f({a}, {b}) does not converge: exponents sum to {a.exponent + b.exponent}")


def theta_f(a: Arg, b: Arg, order: Exponent, scale: int | None = None) -> QSeries:
    """Ramanujan's ``f(a, b) = sum_{n in Z} a^(n(n+1)/2) b^(n(n-1)/2)``."""
    a, b = _arg(a), _arg(b)
    _check_theta(a, b)
    k, N = _grid(order, a.exponent, b.exponent, scale=scale)
    terms: dict[int, int] = {}
    for n, e in _theta_indices(a.exponent, b.exponent, Fraction(N, k)):
        sign = (a.sign ** (_tri(n) % 2)) * (b.sign ** (_tri(n - 1) % 2))
        u = to_units(e, k)
        terms[u] = terms.get(u, 0) + sign
    return _from_units(terms, N, k)


def false_theta_psi(a: Arg, b: Arg, order: Exponent, scale: int | None = None) -> QSeries:
    """``Psi(a, b) = sum_{n>=0} a^T(n) b^T(n-1) - sum_{n>=1} a^T(n-1) b^T(n)``."""
    a, b = _arg(a), _arg(b)
    _check_theta(a, b)
    k, N = _grid(order, a.exponent, b.exponent, scale=scale)
    top = Fraction(N, k)
    terms: dict[int, int] = {}
    for n, e in _theta_indices(a.exponent, b.exponent, top):
        # n >= 0 gives the first sum; n = -m (m >= 1) gives a^T(m-1) b^T(m), the second
        sign = (a.sign ** (_tri(n) % 2)) * (b.sign ** (_tri(n - 1) % 2))
        if n < 0:
            sign = -sign
        u = to_units(e, k)
        terms[u] = terms.get(u, 0) + sign
    return _from_units(terms, N, k)


def _from_units(terms: dict[int, int], N: int, k: int) -> QSeries:
    terms = {u: c for u, c in terms.items() if c}
    if not terms:
        return QSeries._raw([], 0, N, k)
    lo = min(terms)
    cs = [0] * (N - lo + 1)
    for u, c in terms.items():
        cs[u - lo] = c
    return QSeries._raw(cs, lo, N, k)


def jtp_product(a: Arg, b: Arg, order: Exponent, scale: int | None = None) -> QSeries:
    """Product side of the Jacobi triple product, ``(-a, -b, ab; ab)_inf``."""
    a, b = _arg(a), _arg(b)
    _check_theta(a, b)
    ab = a * b
    k, _ = _grid(order, a.exponent, b.exponent, scale=scale)
    if SignedMonomial(-1, 0) in (a, b):
        # (1; ab)_inf has the factor 1 - 1; the theta series vanishes too
        return QSeries.zero(order, k)
    s = poch_signed_base(-a, ab, order, scale=k)
    s = s * poch_signed_base(-b, ab, order, scale=k)
    return s * poch_signed_base(ab, ab, order, scale=k)


CLASSICAL = ("f(-q)", "phi(q)", "phi(-q)", "psi(q)", "psi(-q)")


def classical_theta(kind: str, order: Exponent, k: int = 1) -> QSeries:
    """Ramanujan's named specializations, built from their product forms, at q -> q^k."""
    kind = kind.replace(" ", "").replace("φ", "phi").replace("ψ", "psi")
    N = math.floor(as_fraction(order) / k)
    if kind == "f(-q)":
        s = poch_infinite("q", 1, N)
    elif kind == "phi(q)":
        # f(q, q) = (-q, -q, q^2; q^2)_inf
        s = poch_infinite("-q", 2, N)
        s = apply_poch_infinite(s, "-q", 2, 1)
        s = apply_poch_infinite(s, "q^2", 2, 1)
    elif kind == "phi(-q)":
        s = poch_infinite("q", 1, N)
        s = apply_poch_infinite(s, "-q", 1, -1)
    elif kind == "psi(q)":
        s = poch_infinite("q^2", 2, N)
        s = apply_poch_infinite(s, "q", 2, -1)
    elif kind == "psi(-q)":
        s = poch_infinite("q^2", 2, N)
        s = apply_poch_infinite(s, "-q", 2, -1)
    else:
        raise ValueError(f"unknown classical theta {kind!r}; expected one of {CLASSICAL}")
    return s.substitute_power(k).truncate(order) if k != 1 else s
