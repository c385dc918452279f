"""Recognise sparse series as theta or false-theta expressions.

``f(a, b)`` with ``a = ea q^alpha``, ``b = eb q^beta`` (0 <= alpha <= beta) starts
``1 + ea q^alpha + eb q^beta + ...`` and every further term lies above beta, so
the two lowest nonconstant exponents of a normalized series pin down the
candidates.  ``Psi(a, b)`` starts ``1 + ea q^alpha - eb q^beta`` in the same way
but is not symmetric in its arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .products import false_theta_psi, theta_f, _theta_indices, _tri
from .series import QSeries, SignedMonomial, _norm, as_fraction, scale_for

KINDS = ("f", "Psi")


@dataclass(frozen=True)
class ThetaTerm:
    coeff: Fraction
    shift: Fraction
    kind: str
    a: SignedMonomial
    b: SignedMonomial

    def expand(self, order, scale: int | None = None) -> QSeries:
        top = as_fraction(order) - self.shift
        builder = theta_f if self.kind == "f" else false_theta_psi
        k = _grid_scale(self, order, scale)
        if top < 0:
            return QSeries.zero(order, k)
        s = builder(self.a, self.b, top, scale=k)
        return s.shift(self.shift).scalar_mul(self.coeff)

    @property
    def weight(self) -> Fraction:
        """The order (alpha + beta) / 2 in the false-theta terminology."""
        return (self.a.exponent + self.b.exponent) / 2

    def __str__(self):
        name = "f" if self.kind == "f" else "Psi"
        body = f"{name}({self.a}, {self.b})"
        pre = ""
        if self.shift:
            pre = "q*" if self.shift == 1 else f"q^{self.shift}*"
        c = self.coeff
        cs = "" if c == 1 else "-" if c == -1 else f"{c}*"
        return f"{cs}{pre}{body}"

    def to_json(self) -> dict:
        return {"coeff": str(Fraction(self.coeff)), "shift": str(self.shift), "kind": self.kind,
                "a": str(self.a), "b": str(self.b)}

    @classmethod
    def from_json(cls, d: dict) -> "ThetaTerm":
        return cls(_norm(Fraction(d["coeff"])), as_fraction(d.get("shift", "0")), d["kind"],
                   SignedMonomial.parse(d["a"]), SignedMonomial.parse(d["b"]))


def _grid_scale(term: ThetaTerm, order, scale):
    k = scale_for(term.a.exponent, term.b.exponent, term.shift, order)
    if scale is not None:
        k = k * scale // math.gcd(k, scale)
    return k


@dataclass(frozen=True)
class ThetaExpr:
    terms: tuple

    def expand(self, order, scale: int | None = None) -> QSeries:
        out = None
        for t in self.terms:
            s = t.expand(order, scale)
            out = s if out is None else out + s
        return out

    @property
    def kind(self) -> str:
        return self.terms[0].kind

    @property
    def weights(self) -> tuple:
        return tuple(t.weight for t in self.terms)

    def __str__(self):
        return " + ".join(str(t) for t in self.terms).replace("+ -", "- ")

    def to_json(self) -> dict:
        return {"terms": [t.to_json() for t in self.terms]}

    @classmethod
    def from_json(cls, d: dict) -> "ThetaExpr":
        return cls(tuple(ThetaTerm.from_json(t) for t in d["terms"]))


def single(kind: str, a, b, coeff=1, shift=0) -> ThetaExpr:
    a = SignedMonomial.parse(a) if isinstance(a, str) else a
    b = SignedMonomial.parse(b) if isinstance(b, str) else b
    return ThetaExpr((ThetaTerm(_norm(as_fraction(coeff)), as_fraction(shift), kind, a, b),))


# ------------------------------------------------------------ sparse helpers


def _sparse(s: QSeries) -> dict:
    return {e: c for e, c in s.terms()}


def _theta_terms(kind: str, a: SignedMonomial, b: SignedMonomial, top: Fraction) -> dict:
    out: dict = {}
    for n, e in _theta_indices(a.exponent, b.exponent, top):
        sign = (a.sign ** (_tri(n) % 2)) * (b.sign ** (_tri(n - 1) % 2))
        if kind == "Psi" and n < 0:
            sign = -sign
        out[e] = out.get(e, 0) + sign
    return {e: c for e, c in out.items() if c}


def _matches(target: dict, kind, a, b, coeff, shift, top) -> bool:
    got = _theta_terms(kind, a, b, top - shift)
    if len(got) != len([e for e in target if e <= top]):
        return False
    for e, c in got.items():
        if target.get(e + shift) != coeff * c:
            return False
    return True


def _canonical_f(coeff, shift, a: SignedMonomial, b: SignedMonomial) -> ThetaTerm:
    if (a.exponent, -a.sign) > (b.exponent, -b.sign):
        a, b = b, a
    # c f(e q^k, e q^3k) with even c is (c/2) f(1, e q^k)
    if a.exponent > 0 and b.exponent == 3 * a.exponent and a.sign == b.sign:
        half = Fraction(coeff) / 2
        if half.denominator == 1:
            return ThetaTerm(_norm(half), shift, "f", SignedMonomial(1, 0), a)
    return ThetaTerm(_norm(coeff), shift, "f", a, b)


def _anchors(terms: dict, lead_exp, k: int = 2):
    rest = sorted(e for e in terms if e > lead_exp)
    return rest[:k]


def match_theta(s: QSeries, max_exp: int = 36) -> ThetaExpr | None:
    """Single term ``c q^t f(a, b)`` equal to ``s`` through its order, or None."""
    terms = _sparse(s)
    if not terms:
        return None
    top = s.max_exponent
    t = min(terms)
    lead = terms[t]
    anchors = _anchors(terms, t)
    if not anchors:
        return None
    e1 = anchors[0] - t
    d1 = Fraction(terms[anchors[0]], lead)
    cands = []
    if len(anchors) > 1:
        e2 = anchors[1] - t
        d2 = Fraction(terms[anchors[1]], lead)
        if abs(d1) == 1 and abs(d2) == 1:
            cands.append((e1, int(d1), e2, int(d2)))
    if abs(d1) == 2:
        cands.append((e1, int(d1) // 2, e1, int(d1) // 2))
    if Fraction(e1) % 4 == 0:
        cands.append((Fraction(e1) / 4, 1, Fraction(e1) / 4, -1))
    for al, sa, be, sb in cands:
        if al > max_exp or be > max_exp or al <= 0:
            continue
        a, b = SignedMonomial(sa, al), SignedMonomial(sb, be)
        if _matches(terms, "f", a, b, lead, t, top):
            return ThetaExpr((_canonical_f(lead, t, a, b),))
    return None


def _psi_candidates(terms: dict, t, lead):
    anchors = _anchors(terms, t)
    if not anchors:
        return []
    e1 = anchors[0] - t
    d1 = Fraction(terms[anchors[0]], lead)
    out = []
    if len(anchors) > 1:
        e2 = anchors[1] - t
        d2 = Fraction(terms[anchors[1]], lead)
        if abs(d1) == 1 and abs(d2) == 1:
            d1, d2 = int(d1), int(d2)
            out.append((e1, d1, e2, -d2))   # alpha < beta
            out.append((e2, d2, e1, -d1))   # beta < alpha
    if abs(d1) == 2:
        out.append((e1, int(d1) // 2, e1, -int(d1) // 2))
    return out


def match_single_psi(s: QSeries, max_exp: int = 36, terms: dict | None = None,
                     top=None) -> ThetaTerm | None:
    terms = _sparse(s) if terms is None else terms
    if not terms:
        return None
    top = s.max_exponent if top is None else top
    t = min(terms)
    lead = terms[t]
    for al, sa, be, sb in _psi_candidates(terms, t, lead):
        if not (0 < al <= max_exp and 0 < be <= max_exp):
            continue
        a, b = SignedMonomial(sa, al), SignedMonomial(sb, be)
        if _matches(terms, "Psi", a, b, lead, t, top):
            return ThetaTerm(_norm(lead), t, "Psi", a, b)
    return None


def match_false_theta(s: QSeries, max_exp: int = 36, max_shift: int = 4,
                      coeffs: Iterable[int] = (1, -1)) -> ThetaExpr | None:
    """``Psi(a, b)`` or ``Psi(a, b) + c q^t Psi(a', b')`` equal to ``s``, or None."""
    terms = _sparse(s)
    if not terms:
        return None
    top = s.max_exponent
    hit = match_single_psi(s, max_exp, terms, top)
    if hit is not None:
        return ThetaExpr((hit,))
    t0 = min(terms)
    lead = terms[t0]
    coeffs = tuple(coeffs)
    # two terms: the first Psi carries the lowest term, the second starts at t0 + t
    for al in range(1, max_exp + 1):
        for be in range(1, max_exp + 1):
            for sa in (1, -1):
                for sb in (1, -1):
                    a, b = SignedMonomial(sa, al), SignedMonomial(sb, be)
                    first = _theta_terms("Psi", a, b, top - t0)
                    rest = dict(terms)
                    for e, c in first.items():
                        v = rest.get(e + t0, 0) - lead * c
                        if v:
                            rest[e + t0] = v
                        else:
                            rest.pop(e + t0, None)
                    if not rest:
                        continue
                    t1 = min(rest)
                    shift = t1 - t0
                    if not (0 < shift <= max_shift) or Fraction(rest[t1], lead) not in coeffs:
                        continue
                    second = match_single_psi(s, max_exp, rest, top)
                    if second is not None:
                        return ThetaExpr((ThetaTerm(_norm(lead), t0, "Psi", a, b), second))
    return None


def match_any(s: QSeries, max_exp: int = 36) -> ThetaExpr | None:
    """A theta or false theta match, or None when the window fits both kinds.

    A short window can agree with some ``f(a, b)`` and some ``Psi(a', b')`` at
    once (the K6ft series to q^55 is also ``f(-q^8, q^24)``); choosing either
    would make the answer depend on the order, so neither is returned.
    """
    f = match_theta(s, max_exp)
    psi = match_false_theta(s, max_exp)
    if f is not None and psi is not None:
        return None
    return f or psi
