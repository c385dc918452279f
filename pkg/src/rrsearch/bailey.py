"""Bailey pairs, the limiting Bailey-lemma transforms and first-order recurrences.

A pair relative to ``x = q^x_exp`` is given by an exact rule for ``alpha_n``
(a Laurent polynomial, possibly on a ``q^(1/2)`` grid) and optionally a
closed form for ``beta_n``.  ``beta_from_alpha`` is the defining sum and serves
as the independent oracle for every closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import IncompatibleSpecialization, NotInvertible
from .prodmake import prodmake
from .products import apply_poch, apply_poch_infinite, classical_theta
from .series import QSeries, SignedMonomial, as_fraction

# extra orders carried through intermediate products (Laurent tails are short)
PAD = 6

AlphaRule = Callable[[int], dict]


@dataclass(frozen=True)
class Check:
    """Outcome of an exact comparison; falsy on failure."""

    ok: bool
    failed_at: int | None = None
    exponent: Fraction | None = None

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "ok"
        return f"failed at n = {self.failed_at} (first difference at q^{self.exponent})"


@dataclass(frozen=True)
class BaileyPair:
    """``alpha_terms(n)`` returns ``{exponent: coeff}``, an exact Laurent polynomial."""

    name: str
    x_exp: Fraction
    alpha_terms: AlphaRule
    beta_closed: Callable[[int, int, int], QSeries] | None = None  # (n, order, scale)
    scale: int = 1
    note: str = ""

    def alpha(self, n: int, order) -> QSeries:
        return QSeries.from_terms(self.alpha_terms(n), order, self.scale)

    def beta(self, n: int, order, closed: bool = True) -> QSeries:
        if closed and self.beta_closed is not None:
            return self.beta_closed(n, order, self.scale)
        return beta_from_alpha(self, n, order)


def _mono(e) -> SignedMonomial:
    return SignedMonomial(1, as_fraction(e))


def _one(order, scale: int) -> QSeries:
    return QSeries.one(order, scale)


def beta_from_alpha(p: BaileyPair, n: int, order) -> QSeries:
    """``sum_{r<=n} alpha_r / ((q;q)_{n-r} (xq;q)_{n+r})`` exact through ``order``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    k = p.scale
    N = as_fraction(order)
    total = QSeries.zero(N, k)
    xq = _mono(p.x_exp + 1)
    for r in range(n + 1):
        a = p.alpha(r, N + PAD)
        if a.is_zero():
            continue
        v = min(a.valuation(), 0)
        d = _one(N - v + PAD, k)
        d = apply_poch(d, "q", 1, n - r, -1)
        d = apply_poch(d, xq, 1, n + r, -1)
        total = total + a * d
    return total.truncate(N)


def verify_pair(p: BaileyPair, n_max: int, order) -> Check:
    """The closed beta against the defining sum for n = 0..n_max."""
    if p.beta_closed is None:
        raise ValueError(f"pair {p.name!r} has no closed form for beta")
    for n in range(n_max + 1):
        a = beta_from_alpha(p, n, order)
        b = p.beta_closed(n, order, p.scale)
        d = a.first_difference(b)
        if d is not None:
            return Check(False, n, d)
    return Check(True)


# ------------------------------------------------------------ shipped pairs


def _unit_alpha(n: int) -> dict:
    return {0: 1} if n == 0 else {}


def unit_pair(x_exp=0) -> BaileyPair:
    """``alpha_n = delta_{n,0}``, so ``beta_n = 1/((q;q)_n (xq;q)_n)``."""
    x_exp = as_fraction(x_exp)

    def beta(n, order, scale):
        s = _one(order, scale)
        s = apply_poch(s, "q", 1, n, -1)
        return apply_poch(s, _mono(x_exp + 1), 1, n, -1)

    return BaileyPair(f"unit(x=q^{x_exp})", x_exp, _unit_alpha, beta,
                      scale=max(1, x_exp.denominator))


def _new_alpha(n: int) -> dict:
    if n == 0:
        return {0: 1}
    if n % 2:
        return {}
    m = n // 2
    e = 2 * m * m - 3 * m
    return {e: 1, e + 6 * m: 1}


def _new_beta(n: int, order, scale: int, half: bool = True) -> QSeries:
    N = as_fraction(order)
    if n == 0:
        return _one(N, scale)
    s = _one(N + PAD, scale)
    if n == 1:
        s = s.div_binomial(-1, scale).div_binomial(-1, scale)
    elif n == 2:
        for e in (-1, 2, 3):
            s = s.mul_binomial(1, e * scale)
        s = apply_poch(s, "q", 1, 4, -1)
    else:
        s = apply_poch(s, "-q^-1", 1, n, 1)
        s = apply_poch(s, "-q^2", 1, n, 1)
        s = apply_poch(s, "q", 1, 2 * n, -1)
        if half:
            s = s.scalar_mul(Fraction(1, 2))
    return s.truncate(N)


def new_pair() -> BaileyPair:
    """The pair relative to 1 with ``alpha_{2m} = q^(2m^2-3m)(1+q^(6m))``, odd terms 0."""
    return BaileyPair("new", Fraction(0), _new_alpha, _new_beta,
                      note="gives the mod 12 identity through WBL and mod 16 through ATNSBL")


def new_pair_misprint() -> BaileyPair:
    """Negative control: the n > 2 closed form without its factor 1/2."""
    return BaileyPair("new-misprint", Fraction(0), _new_alpha,
                      lambda n, order, scale: _new_beta(n, order, scale, half=False),
                      note="perturbed closed beta; must fail at n = 3")


def _g2_alpha(n: int) -> dict:
    # factors (1 - q^(j/2)) / (1 - q^(1/2)) as geometric sums in q^(1/2)
    if n == 0:
        return {Fraction(0): 1}
    r = n // 2
    if n % 2:
        base = Fraction(3 * r * r) + Fraction(7 * r, 2) + 1
        length = 4 * r + 3
        sign = -1
    else:
        base = Fraction(3 * r * r) + Fraction(r, 2)
        length = 4 * r + 1
        sign = 1
    return {base + Fraction(i, 2): sign for i in range(length)}


def _g2_beta(n: int, order, scale: int) -> QSeries:
    N = as_fraction(order)
    s = _one(N, scale)
    s = apply_poch(s, "q^2", 2, n, -1)
    return apply_poch(s, SignedMonomial(-1, Fraction(3, 2)), 1, n, -1)


def g2_pair() -> BaileyPair:
    """Slater's G(2) relative to q in the corrected form (half-integer powers)."""
    return BaileyPair("G2", Fraction(1), _g2_alpha, _g2_beta, scale=2,
                      note="corrected form; beta_n = 1/((q^2;q^2)_n (-q^(3/2);q)_n)")


PAIRS = {
    "unit": lambda: unit_pair(0),
    "unit-q": lambda: unit_pair(1),
    "new": new_pair,
    "new-misprint": new_pair_misprint,
    "G2": g2_pair,
}


def get_pair(name: str) -> BaileyPair:
    try:
        return PAIRS[name]()
    except KeyError:
        raise KeyError(f"unknown pair {name!r}; known: {', '.join(PAIRS)}") from None


# --------------------------------------------------------------- transforms

TRANSFORMS = ("WBL", "ATNSBL", "ATNSnegBL", "SSBL1", "FBL")


def _sum(terms: Callable[[int, Fraction], QSeries | None], low: Callable[[int], Fraction],
         order, scale: int) -> QSeries:
    """``sum_n terms(n, budget)`` where ``low(n)`` bounds the n-th valuation from below."""
    N = as_fraction(order)
    total = QSeries.zero(N, scale)
    n = 0
    while True:
        lo = low(n)
        if lo > N:
            if n > 2 and low(n + 1) > lo:
                break
        else:
            t = terms(n, N)
            if t is not None:
                total = total + t
        n += 1
    return total


def _half_base(p: BaileyPair, seq: str, n: int, budget, closed: bool) -> QSeries:
    """``alpha_n(x, q^2)`` or ``beta_n(x, q^2)``: the base-q object under q -> q^2."""
    half = as_fraction(budget) / 2 + PAD
    s = p.alpha(n, half) if seq == "alpha" else p.beta(n, half, closed)
    return s.substitute_power(2).truncate(as_fraction(budget))


def transform(kind: str, p: BaileyPair, order, closed_beta: bool = True,
              literal_prefactor: bool = False) -> tuple[QSeries, QSeries]:
    """Both sides of a limiting form of Bailey's lemma for the pair ``p``.

    WBL, SSBL1 and FBL insert the pair as given; the two ATNS transforms use
    it at base ``q^2`` (relative to ``x^2`` after q -> q^2).  The ATNS
    prefactors use the base ``q^2`` in their numerator products, which is
    what makes the lemma hold; ``literal_prefactor`` switches to base ``q``.
    """
    N = as_fraction(order)
    k = p.scale
    xe = p.x_exp
    W = N + PAD  # working order for summands, trimmed at the end
    if kind in ("SSBL1",) and xe != 0:
        raise IncompatibleSpecialization("SSBL1 needs a pair relative to x = 1")
    if kind == "FBL" and xe != 1:
        raise IncompatibleSpecialization("FBL needs a pair relative to x = q")

    def mono_series(e, budget) -> QSeries:
        return QSeries.monomial(1, e, budget, k)

    if kind == "WBL":
        def lhs_term(n, budget):
            e = xe * n + n * n
            b = p.beta(n, budget - e + PAD, closed_beta)
            return b.shift(e).truncate(budget)

        def rhs_term(n, budget):
            e = xe * n + n * n
            a = p.alpha(n, budget - e + PAD)
            return None if a.is_zero() else a.shift(e).truncate(budget)

        low = lambda n: xe * n + n * n - PAD
        lhs = _sum(lhs_term, low, W, k)
        rhs = _sum(rhs_term, low, W, k)
        rhs = apply_poch_infinite(rhs, _mono(xe + 1), 1, -1)
    elif kind in ("ATNSBL", "ATNSnegBL"):
        x2 = 2 * xe
        neg = kind == "ATNSnegBL"
        # (-q;q^2)_n for ATNSBL, (q;q^2)_n with (-1)^n for ATNSnegBL
        arg = SignedMonomial(1 if neg else -1, 1)
        xq = SignedMonomial(1 if neg else -1, x2 + 1)

        def lhs_term(n, budget):
            e = x2 * n + n * n
            b = _half_base(p, "beta", n, budget - e + PAD, closed_beta)
            t = apply_poch(b.shift(e), arg, 2, n, 1)
            t = t.truncate(budget)
            return -t if neg and n % 2 else t

        def rhs_term(n, budget):
            e = x2 * n + n * n
            a = _half_base(p, "alpha", n, budget - e + PAD, closed_beta)
            if a.is_zero():
                return None
            t = apply_poch(a.shift(e), arg, 2, n, 1)
            t = apply_poch(t, xq, 2, n, -1).truncate(budget)
            return -t if neg and n % 2 else t

        low = lambda n: x2 * n + n * n - PAD
        lhs = _sum(lhs_term, low, W, k)
        rhs = _sum(rhs_term, low, W, k)
        rhs = apply_poch_infinite(rhs, xq, 1 if literal_prefactor else 2, 1)
        rhs = apply_poch_infinite(rhs, _mono(x2 + 2), 2, -1)
    elif kind == "SSBL1":
        def lhs_term(n, budget):
            e = Fraction(n * (n + 1), 2)
            b = p.beta(n, budget - e + PAD, closed_beta)
            return apply_poch(b.shift(e), "-1", 1, n, 1).truncate(budget)

        def rhs_term(n, budget):
            e = Fraction(n * (n + 1), 2)
            a = p.alpha(n, budget - e + PAD)
            if a.is_zero():
                return None
            t = a.shift(e)
            t = t.scalar_mul(Fraction(1, 2)) if n == 0 else t.div_binomial(1, n * k)
            return t.truncate(budget)

        low = lambda n: Fraction(n * (n + 1), 2) - PAD
        lhs = _sum(lhs_term, low, W, k)
        rhs = _sum(rhs_term, low, W, k)
        rhs = rhs.scalar_mul(2) / classical_theta("phi(-q)", W).rescale(k)
    elif kind == "FBL":
        def lhs_term(n, budget):
            e = Fraction(n * (n + 1), 2)
            b = p.beta(n, budget - e + PAD, closed_beta)
            t = apply_poch(b.shift(e), "q", 1, n, 1).truncate(budget)
            return -t if n % 2 else t

        def rhs_term(n, budget):
            e = Fraction(n * (n + 1), 2)
            a = p.alpha(n, budget - e + PAD)
            if a.is_zero():
                return None
            t = a.shift(e).truncate(budget)
            return -t if n % 2 else t

        low = lambda n: Fraction(n * (n + 1), 2) - PAD
        lhs = _sum(lhs_term, low, W, k)
        lhs = lhs.div_binomial(-1, k)
        rhs = _sum(rhs_term, low, W, k)
    else:
        raise ValueError(f"unknown transform {kind!r}; expected one of {TRANSFORMS}")
    return lhs.truncate(N).simplify_scale(), rhs.truncate(N).simplify_scale()


# ------------------------------------------------------------- recurrences


@dataclass(frozen=True)
class RecurrenceCoefficient:
    """``constant * q^(e n + f) * prod (1 + s q^(c n + d)) / prod (1 + s q^(c n + d))``.

    Factors are ``(s, c, d)`` triples with ``s = +-1``.
    """

    constant: Fraction = Fraction(1)
    monomial: tuple = (0, 0)
    num_factors: tuple = ()
    den_factors: tuple = ()

    def __post_init__(self):
        norm = lambda fs: tuple(sorted((int(s), as_fraction(c), as_fraction(d)) for s, c, d in fs))
        object.__setattr__(self, "num_factors", norm(self.num_factors))
        object.__setattr__(self, "den_factors", norm(self.den_factors))
        object.__setattr__(self, "monomial", tuple(as_fraction(x) for x in self.monomial))
        object.__setattr__(self, "constant", as_fraction(self.constant))

    def evaluate(self, n: int, order, scale: int = 1) -> QSeries:
        N = as_fraction(order)
        e, f = self.monomial
        s = QSeries.monomial(self.constant, e * n + f, N + 2 * PAD, scale)
        for sg, c, d in self.num_factors:
            s = s.mul_binomial(sg, _units(c * n + d, s.scale))
        for sg, c, d in self.den_factors:
            m = c * n + d
            if m == 0 and sg == -1:
                raise NotInvertible(f"denominator factor vanishes at n = {n}")
            s = s.div_binomial(sg, _units(m, s.scale))
        return s.truncate(N)

    def __str__(self):
        def atom(s, c, d):
            ex = _affine(c, d)
            return f"(1{'+' if s > 0 else '-'}q^({ex}))"

        num = "".join(atom(*f) for f in self.num_factors) or "1"
        den = "".join(atom(*f) for f in self.den_factors) or "1"
        e, f = self.monomial
        pre = "" if self.constant == 1 else f"{self.constant}*"
        if e or f:
            pre += f"q^({_affine(e, f)})*"
        return f"{pre}{num}/{den}" if self.den_factors else f"{pre}{num}"


def _affine(c, d) -> str:
    parts = []
    if c:
        parts.append("n" if c == 1 else f"{c}n")
    if d or not parts:
        parts.append(_signed(d) if parts else f"{d}")
    return "".join(parts)


def _signed(x) -> str:
    return f"+{x}" if x >= 0 else f"{x}"


def _units(e: Fraction, scale: int) -> int:
    u = as_fraction(e) * scale
    if u.denominator != 1:
        raise ValueError(f"exponent {e} is off the q^(1/{scale}) grid")
    return int(u)


#: first-order recurrence of the new pair's beta, valid for n >= 3
NEW_PAIR_RECURRENCE = RecurrenceCoefficient(
    1, (0, 0), ((1, 1, -2), (1, 1, 1)), ((-1, 2, -1), (-1, 2, 0)))


def verify_recurrence(p: BaileyPair, coeff: RecurrenceCoefficient, n_range: Iterable[int],
                      order) -> Check:
    """``beta_n = coeff(n) * beta_{n-1}`` with both betas from the defining sum."""
    N = as_fraction(order)
    cache: dict[int, QSeries] = {}

    def beta(n):
        if n not in cache:
            cache[n] = beta_from_alpha(p, n, N + 2 * PAD)
        return cache[n]

    for n in n_range:
        try:
            rhs = coeff.evaluate(n, N + PAD, p.scale) * beta(n - 1)
        except NotInvertible:
            return Check(False, n, None)
        d = beta(n).truncate(N).first_difference(rhs.truncate(N))
        if d is not None:
            return Check(False, n, d)
    return Check(True)


def _atoms_from_exponents(e: Sequence) -> tuple[list, list] | None:
    """Split ``prod (1 - q^m)^(-e_m)`` into ``(1 +- q^m)`` atoms for num and den.

    A numerator ``1 - q^(2a)`` paired with a denominator ``1 - q^a`` is read
    as ``1 + q^a``, largest first.
    """
    num: dict[int, int] = {}
    den: dict[int, int] = {}
    for m, x in enumerate(e, 1):
        if not isinstance(x, int):
            return None
        if x < 0:
            num[m] = -x
        elif x > 0:
            den[m] = x
    out_num, out_den = [], []
    for side, other, out in ((num, den, out_num), (den, num, out_den)):
        for m in sorted(side, reverse=True):
            while side.get(m, 0) > 0 and m % 2 == 0 and other.get(m // 2, 0) > 0:
                side[m] -= 1
                other[m // 2] -= 1
                out.append((1, m // 2))
    for side, out in ((num, out_num), (den, out_den)):
        for m, x in side.items():
            out.extend([(-1, m)] * x)
    return out_num, out_den


def _fit_affine(points: list[tuple[int, Fraction]]) -> tuple[Fraction, Fraction] | None:
    (n0, y0), (n1, y1) = points[0], points[1]
    c = Fraction(y1 - y0, n1 - n0)
    d = y0 - c * n0
    if all(c * n + d == y for n, y in points):
        return c, d
    return None


def guess_first_order(p: BaileyPair, n_range: Sequence[int], max_atoms: int = 6,
                      max_slope: int = 4) -> RecurrenceCoefficient | None:
    """Fit ``beta_n / beta_{n-1}`` by a product of ``(1 +- q^(c n + d))`` atoms.

    Each ratio is expanded as a power series, factored with :func:`prodmake`
    (a finite atom product has finitely many nonzero exponents) and the atom
    exponents are fitted as affine functions of n.
    """
    ns = list(n_range)
    if len(ns) < 4:
        raise ValueError("need at least four values of n")
    k = p.scale
    per_n = []
    for n in ns:
        M = (2 * max_slope + 2) * n + 24  # in q^(1/k) units
        prev = beta_from_alpha(p, n - 1, Fraction(M, k) + 2 * PAD)
        cur = beta_from_alpha(p, n, Fraction(M, k) + 2 * PAD)
        if prev.is_zero() or cur.is_zero():
            return None
        r = cur / prev
        # treat q^(1/k) as the variable
        v = r.lo
        c0 = r.coeffs[0]
        unit = QSeries(list(r.coeffs), 0, min(r.order - v, M)).scalar_mul(Fraction(1) / as_fraction(c0))
        ex = prodmake(unit)
        tail = [m for m, x in enumerate(ex.e, 1) if x and m > M // 2]
        if tail:
            return None  # not a finite product of atoms within reach
        atoms = _atoms_from_exponents(ex.e)
        if atoms is None:
            return None
        num, den = atoms
        if len(num) + len(den) > max_atoms:
            return None
        per_n.append((n, as_fraction(c0), v, sorted(num), sorted(den)))
    # atoms can cancel at isolated n (e.g. 1 + q^3 against 1 + q^6), so fit on
    # the most common atom signature and let the verification cover every n
    sig = lambda row: (tuple(a for a, _ in row[3]), tuple(a for a, _ in row[4]), row[1])
    groups: dict = {}
    for row in per_n:
        groups.setdefault(sig(row), []).append(row)
    best = max(groups.values(), key=len)
    if len(best) < max(4, (len(per_n) + 1) // 2):
        return None
    mono = _fit_affine([(n, Fraction(v, k)) for n, _, v, _, _ in best])
    if mono is None:
        return None
    fitted = []
    for idx in (3, 4):
        atoms = []
        for j in range(len(best[0][idx])):
            fit = _fit_affine([(row[0], Fraction(row[idx][j][1], k)) for row in best])
            if fit is None or abs(fit[0]) > max_slope:
                return None
            atoms.append((best[0][idx][j][0], fit[0], fit[1]))
        fitted.append(tuple(atoms))
    rc = RecurrenceCoefficient(best[0][1], mono, fitted[0], fitted[1])
    check_order = Fraction((2 * max_slope + 2) * max(ns) + 24, k)
    if not verify_recurrence(p, rc, ns, check_order):
        return None
    return rc


# ----------------------------------------------------------- q-Gauss check


def q_gauss_sides(a: SignedMonomial | str, b: SignedMonomial | str, base_exp: int,
                  order) -> tuple[QSeries, QSeries]:
    """Limiting q-Gauss sum in base ``Q = q^base_exp``:
    ``sum (-1)^n Q^(n(n-1)/2) (a;Q)_n (b/a)^n / ((b;Q)_n (Q;Q)_n) = (b/a;Q)_inf / (b;Q)_inf``.
    """
    a = SignedMonomial.parse(a) if isinstance(a, str) else a
    b = SignedMonomial.parse(b) if isinstance(b, str) else b
    if a.is_zero:
        raise ValueError("a must be nonzero")
    ratio = SignedMonomial(a.sign * b.sign, b.exponent - a.exponent)
    N = as_fraction(order)
    B = base_exp
    lhs = QSeries.zero(N)
    n = 0
    while True:
        e = B * n * (n - 1) // 2 + ratio.exponent * n
        if e > N + PAD and n > 1:
            break
        sign = (-1) ** n * ratio.sign ** n
        t = QSeries.monomial(sign, e, N + PAD)
        t = apply_poch(t, a, B, n, 1)
        t = apply_poch(t, b, B, n, -1)
        t = apply_poch(t, SignedMonomial(1, B), B, n, -1)
        lhs = lhs + t.truncate(N)
        n += 1
    rhs = QSeries.one(N)
    rhs = apply_poch_infinite(rhs, ratio, B, 1)
    rhs = apply_poch_infinite(rhs, b, B, -1)
    return lhs, rhs
