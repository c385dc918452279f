"""Parameterized Rogers-Ramanujan type series families and their expansion.

A family is ``head + sum_{n >= start} (-1)^(c n) q^((a n^2 + b n)/2 + shift) * prod factors``
where each factor is ``(arg; q^base)_{m n + o}`` in the numerator or denominator.
The three numeric-search shapes, the symbolic-search shape and the catalog
identities are all instances.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import DivergentTerm, OrderTooLow
from .products import apply_poch
from .series import QSeries, SignedMonomial, as_fraction, mono

NUM, DEN = "num", "den"

#: argument domain of the numeric-search families
PARI_ARGS = ("0", "-1", "q", "-q", "-q^2", "q^2")


@dataclass(frozen=True, order=True)
class PochFactor:
    """``(arg; q^base_exp)_{mult*n + offset}``; ``mult = 0`` gives a fixed length."""

    arg: SignedMonomial
    base_exp: int
    mult: int = 1
    offset: int = 0
    position: str = NUM

    def __post_init__(self):
        if isinstance(self.arg, str):
            object.__setattr__(self, "arg", mono(self.arg))
        if self.base_exp <= 0:
            raise ValueError("base exponent must be positive")
        if self.position not in (NUM, DEN):
            raise ValueError("position is 'num' or 'den'")
        if self.mult < 0:
            raise ValueError("index multiplier must be >= 0")

    def length(self, n: int) -> int:
        return self.mult * n + self.offset

    def sort_key(self):
        return (self.base_exp, self.arg.exponent, self.arg.sign, self.mult, self.offset)

    def __str__(self):
        idx = {0: f"{self.offset}", 1: "n", 2: "2n"}.get(self.mult, f"{self.mult}n")
        if self.mult and self.offset:
            idx += f"{self.offset:+d}"
        base = "q" if self.base_exp == 1 else f"q^{self.base_exp}"
        return f"({self.arg};{base})_{{{idx}}}"

    def to_json(self) -> list:
        return [str(self.arg), self.base_exp, self.mult, self.offset, self.position]

    @classmethod
    def from_json(cls, d) -> "PochFactor":
        arg, base, m, o, pos = d
        return cls(mono(arg), int(base), int(m), int(o), pos)


def num(arg, base_exp: int, mult: int = 1, offset: int = 0) -> PochFactor:
    return PochFactor(mono(arg) if isinstance(arg, str) else arg, base_exp, mult, offset, NUM)


def den(arg, base_exp: int, mult: int = 1, offset: int = 0) -> PochFactor:
    return PochFactor(mono(arg) if isinstance(arg, str) else arg, base_exp, mult, offset, DEN)


@dataclass(frozen=True)
class HeadTerm:
    """A fixed rational term ``coeff * q^exp * prod factors`` (factor lengths fixed)."""

    coeff: Fraction
    exp: Fraction
    factors: tuple = ()

    def expand(self, order: int) -> QSeries:
        s = QSeries.monomial(self.coeff, self.exp, order)
        for f in self.factors:
            s = apply_poch(s, f.arg, f.base_exp, f.offset, 1 if f.position == NUM else -1)
        return s

    def to_json(self) -> dict:
        return {"coeff": str(Fraction(self.coeff)), "exp": str(self.exp),
                "factors": [f.to_json() for f in self.factors]}

    @classmethod
    def from_json(cls, d) -> "HeadTerm":
        return cls(as_fraction(d["coeff"]), as_fraction(d["exp"]),
                   tuple(PochFactor.from_json(f) for f in d["factors"]))


@dataclass(frozen=True)
class SeriesFamily:
    a: int
    b: int
    c: int = 0
    factors: tuple = ()
    tag: str = "custom"
    start: int = 0
    shift: Fraction = Fraction(0)
    head: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        object.__setattr__(self, "head", tuple(self.head))
        object.__setattr__(self, "shift", as_fraction(self.shift))
        if self.c not in (0, 1):
            raise ValueError("c must be 0 or 1")
        for f in self.factors:
            if f.arg.exponent < 0:
                raise ValueError("family factors need argument exponents >= 0")

    def exponent(self, n: int) -> Fraction:
        return Fraction(self.a * n * n + self.b * n, 2) + self.shift

    def describe(self) -> str:
        nums = " ".join(str(f) for f in self.factors if f.position == NUM) or "1"
        dens = " ".join(str(f) for f in self.factors if f.position == DEN) or "1"
        sign = "(-1)^n " if self.c else ""
        ex = f"q^(({self.a}n^2{self.b:+d}n)/2"
        ex += (f"+{self.shift})" if self.shift > 0 else f"{self.shift})") if self.shift else ")"
        head = " + ".join(f"[{h.coeff}*q^{h.exp}*{' '.join(map(str, h.factors))}]" for h in self.head)
        body = f"sum_{{n>={self.start}}} {sign}{ex} {nums} / ({dens})"
        return f"{head} + {body}" if head else body

    def key(self) -> str:
        return canonical_key(self)

    def to_json(self) -> dict:
        d = {"a": self.a, "b": self.b, "c": self.c, "tag": self.tag,
             "factors": [f.to_json() for f in self.factors]}
        if self.start:
            d["start"] = self.start
        if self.shift:
            d["shift"] = str(self.shift)
        if self.head:
            d["head"] = [h.to_json() for h in self.head]
        return d

    @classmethod
    def from_json(cls, d: dict) -> "SeriesFamily":
        return cls(int(d["a"]), int(d["b"]), int(d.get("c", 0)),
                   tuple(PochFactor.from_json(f) for f in d.get("factors", ())),
                   d.get("tag", "custom"), int(d.get("start", 0)), as_fraction(d.get("shift", "0")),
                   tuple(HeadTerm.from_json(h) for h in d.get("head", ())))


# ----------------------------------------------------------------- expansion


def _grows(fam: SeriesFamily) -> bool:
    return fam.a > 0 or (fam.a == 0 and fam.b > 0)


def expand_family(fam: SeriesFamily, order: int) -> QSeries:
    """Exact sum of the family through ``q^order``.

    Summands are generated incrementally: the factor product at ``n`` is the
    one at ``n - 1`` times the ``m`` new binomials of each factor.
    """
    if not _grows(fam):
        raise DivergentTerm(f"summand exponent ({fam.a} n^2 + {fam.b} n)/2 does not grow with n")
    N = order
    acc = QSeries.zero(N)
    for h in fam.head:
        acc = acc + h.expand(N)
    n = fam.start
    P = QSeries.one(N)
    for f in fam.factors:
        P = apply_poch(P, f.arg, f.base_exp, f.length(n), 1 if f.position == NUM else -1)
    total = [0] * (N + 1)
    below: dict[int, int] = {}  # Laurent terms from negative shifts
    while True:
        e = fam.exponent(n)
        if e > N and _past_vertex(fam, n):
            break
        if e <= N and P.coeffs:
            if e.denominator != 1:
                raise ValueError("fractional summand exponent; use an integral family")
            e = int(e)
            sign = -1 if fam.c and n % 2 else 1
            for i, x in enumerate(P.coeffs):
                u = P.lo + i + e
                if u > N:
                    break
                if x:
                    if u >= 0:
                        total[u] += sign * x
                    else:
                        below[u] = below.get(u, 0) + sign * x
        # advance the factor product to n + 1
        for f in fam.factors:
            if f.mult:
                arg = f.arg.shift(f.base_exp * f.length(n))
                P = apply_poch(P, arg, f.base_exp, f.mult, 1 if f.position == NUM else -1)
        n += 1
    body = QSeries(total, 0, N)
    below = {u: x for u, x in below.items() if x}
    if below:
        lo = min(below)
        body = body + QSeries([below.get(u, 0) for u in range(lo, 0)], lo, N)
    return acc + body


def _past_vertex(fam: SeriesFamily, n: int) -> bool:
    # the exponent is increasing from here on
    return fam.a * (2 * n + 1) + fam.b >= 0


def is_sparse(s: QSeries, cutoff: int = 55, threshold: int = 12) -> bool:
    """Fewer than ``threshold`` nonzero coefficients among exponents 0..cutoff."""
    if s.max_exponent < cutoff:
        raise OrderTooLow(f"series known through q^{s.max_exponent}, the criterion needs q^{cutoff}")
    return s.nonzero_count(cutoff) < threshold


# ---------------------------------------------------------- canonical keys


def _split_double(f: PochFactor) -> list[PochFactor]:
    """``(a;Q)_{2n+o} = (a;Q^2)_{n+ceil(o/2)} (aQ;Q^2)_{n+floor(o/2)}``."""
    if f.mult != 2:
        return [f]
    Q = f.base_exp
    hi = -((-f.offset) // 2)
    lo = f.offset // 2
    return [PochFactor(f.arg, 2 * Q, 1, hi, f.position),
            PochFactor(f.arg.shift(Q), 2 * Q, 1, lo, f.position)]


def normalized_factors(factors: Sequence[PochFactor]) -> tuple[tuple, tuple]:
    nums, dens = [], []
    for f in factors:
        if f.arg.is_zero:
            continue
        if f.mult == 0 and f.offset == 0:
            continue
        for g in _split_double(f):
            key = (g.arg.sign, g.arg.exponent, g.base_exp, g.mult, g.offset)
            (nums if g.position == NUM else dens).append(key)
    # cancel common factors
    for k in list(nums):
        if k in dens:
            nums.remove(k)
            dens.remove(k)
    order = lambda k: (k[2], k[1], k[0], k[3], k[4])
    return tuple(sorted(nums, key=order)), tuple(sorted(dens, key=order))


def _fmt_key_factor(k) -> str:
    sign, e, base, m, o = k
    return f"{'-' if sign < 0 else '+'}{e}/{base}/{m}/{o}"


def canonical_key(fam: SeriesFamily) -> str:
    """Deterministic text key; equal for trivially re-encoded summands."""
    nums, dens = normalized_factors(fam.factors)
    parts = [f"a={fam.a}", f"b={fam.b}", f"c={fam.c}"]
    if fam.start:
        parts.append(f"start={fam.start}")
    if fam.shift:
        parts.append(f"shift={fam.shift}")
    parts.append("num=" + ",".join(map(_fmt_key_factor, nums)))
    parts.append("den=" + ",".join(map(_fmt_key_factor, dens)))
    if fam.head:
        hs = sorted(f"{Fraction(h.coeff)}*{h.exp}*" + ",".join(
            f.position[0] + _fmt_key_factor((f.arg.sign, f.arg.exponent, f.base_exp, 0, f.offset))
            for f in sorted(h.factors, key=PochFactor.sort_key)) for h in fam.head)
        parts.append("head=" + "|".join(hs))
    return ";".join(parts)


# ------------------------------------------------------------------- grids


def _pairs(domain):
    return list(itertools.combinations_with_replacement(domain, 2))


def pari_grid(family: str = "S'", a_max: int = 10, args: Sequence[str] = PARI_ARGS,
              a_min: int = 0, c_values=(0, 1), skip_divergent: bool = True) -> Iterator[SeriesFamily]:
    """Instances of the numeric-search shapes in lexicographic parameter order.

    ``S``: (d,e;q)_n / (f,g,q;q)_n.  ``S'``: the same in base q^2.
    ``S''``: (d;q)_n / ((e;q^2)_{n+1} (q;q)_{n+1}).
    """
    argm = [mono(x) for x in args]
    for a in range(a_min, a_max + 1):
        for b in range(-a, a + 1):
            if skip_divergent and not (a > 0 or b > 0):
                continue
            for c in c_values:
                if family in ("S", "S'"):
                    B = 1 if family == "S" else 2
                    for d, e in _pairs(argm):
                        for f, g in _pairs(argm):
                            yield SeriesFamily(a, b, c, (
                                num(d, B), num(e, B), den(f, B), den(g, B), den(SignedMonomial(1, B), B)),
                                family)
                elif family == "S''":
                    for d in argm:
                        for e in argm:
                            yield SeriesFamily(a, b, c, (
                                num(d, 1), den(e, 2, 1, 1), den(SignedMonomial(1, 1), 1, 1, 1)), family)
                else:
                    raise ValueError(f"unknown numeric family {family!r}")


@dataclass(frozen=True)
class MapleGrid:
    """Bounds of the symbolic-search shape; defaults are the full published ranges."""

    m: tuple = tuple(range(1, 9))
    b: tuple = (1, 2, 3, 4)
    c: tuple = (0, 1, 2, 3, 4)
    h_max: int = 3
    r_max: int = 2
    exp_max: int = 6
    offsets: tuple = (0, 1)
    # lower bound of the argument exponent when the sign is -1:
    # ceil(-1/2) = 0 literally; the alternative reading allows -1
    negative_sign_floor: int = 0


def _maple_factors(grid: MapleGrid) -> list[tuple]:
    out = []
    for sign in (1, -1):
        lo = 1 if sign == 1 else grid.negative_sign_floor
        for e2 in range(lo, grid.exp_max + 1):
            for e3 in range(max(e2, 1), grid.exp_max + 1):
                for o in grid.offsets:
                    out.append((sign, e2, e3, o))
    return out


def maple_grid(grid: MapleGrid = MapleGrid()) -> Iterator[SeriesFamily]:
    """Instances of ``q^(b j^2 + c j) prod (n1 q^n2; q^n3)_{j+n4} / ((q^m;q^m)_j prod (...))``.

    Numerator multisets of size h and denominator multisets of size r are
    enumerated as multisets.  Factors with a negative argument exponent
    (only under the alternative reading of the bounds) are rewritten as
    ``(-q^-1; q^k)_{j+o} = (1 + q^-1) (-q^(k-1); q^k)_{j+o-1}``.
    """
    pool = _maple_factors(grid)
    for m in grid.m:
        for bb in grid.b:
            for cc in grid.c:
                for h in range(grid.h_max + 1):
                    for nf in itertools.combinations_with_replacement(pool, h):
                        for r in range(grid.r_max + 1):
                            for df in itertools.combinations_with_replacement(pool, r):
                                fam = _maple_family(m, bb, cc, nf, df)
                                if fam is not None:
                                    yield fam


def _maple_family(m, bb, cc, nf, df) -> SeriesFamily | None:
    factors = [den(SignedMonomial(1, m), m)]
    shift = 0
    for group, pos in ((nf, NUM), (df, DEN)):
        for sign, e2, e3, o in group:
            if e2 < 0:
                # (-q^-1; q^k)_{j+o} = q^-1 (1 + q) (-q^(k-1); q^k)_{j+o-1}
                shift += -1 if pos == NUM else 1
                factors.append(PochFactor(SignedMonomial(-1, 1), 1, 0, 1, pos))
                factors.append(PochFactor(SignedMonomial(-1, e3 - 1), e3, 1, o - 1, pos))
                continue
            arg = SignedMonomial(sign, e2)
            if pos == DEN and arg == SignedMonomial(1, 0):
                return None
            factors.append(PochFactor(arg, e3, 1, o, pos))
    return SeriesFamily(2 * bb, 2 * cc, 0, tuple(factors), "maple", shift=shift)
