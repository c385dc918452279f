"""Engel expansion of a truncated Laurent series.

With ``[A]`` the part of ``A`` at nonpositive exponents::

    a_0 = [A],  A_1 = A - a_0,  a_n = [1 / A_n],  A_{n+1} = a_n A_n - 1

so that ``A = a_0 + 1/a_1 + 1/(a_1 a_2) + ...``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import EngelStall, NotInvertible
from .series import QSeries


def principal_part(s: QSeries) -> QSeries:
    """``[s]``: the terms of ``s`` with exponent <= 0, as an exact polynomial."""
    if not s.coeffs or s.lo > 0:
        return QSeries._raw([], 0, max(s.order, 0), s.scale)
    top = min(0, s.order)
    cs = list(s.coeffs[: top - s.lo + 1])
    # a Laurent polynomial, exact at every order; stored through exponent 0
    return QSeries._raw(cs, s.lo, max(s.order, 0), s.scale)


def _padded(p: QSeries, order: int) -> QSeries:
    """An exact polynomial re-declared as known through ``order`` units."""
    return QSeries._raw(list(p.coeffs), p.lo, max(order, p.order), p.scale)


@dataclass
class EngelExpansion:
    digits: list[QSeries] = field(default_factory=list)
    terminated: bool = False  # some A_n vanished identically: the expansion is finite

    def __len__(self):
        return len(self.digits)

    def __getitem__(self, i):
        return self.digits[i]


def engel_expand(A: QSeries, steps: int) -> EngelExpansion:
    """Digits ``a_0 .. a_steps``.

    Stops early (``terminated``) when some ``A_n`` is identically zero in its
    window.  Raises :class:`EngelStall` once truncation makes the next digit
    undeterminable, carrying the digits computed so far.
    """
    a0 = principal_part(A)
    out = EngelExpansion([a0])
    An = A - a0
    for _ in range(steps):
        if An.is_zero():
            out.terminated = True
            return out
        try:
            inv = An.invert()
        except NotInvertible:  # pragma: no cover - guarded by is_zero
            raise EngelStall("A_n vanished", out.digits)
        if inv.order < 0:
            raise EngelStall(f"truncation exhausted after {len(out.digits) - 1} digits", out.digits)
        an = principal_part(inv)
        out.digits.append(an)
        An = (an * An) - 1
    return out


def engel_partial_sums(digits: list[QSeries], order: int, scale: int = 1) -> list[QSeries]:
    """Reconstructions ``a_0 + sum_{k<=n} 1/(a_1...a_k)`` for each n, truncated to ``order``."""
    depth = order + 2 * sum(-d.lo for d in digits[1:] if d.coeffs and d.lo < 0)
    total = _padded(digits[0], order).truncate(order)
    out = [total]
    prod = QSeries.one(depth, scale)
    for a in digits[1:]:
        prod = prod * _padded(a, depth)
        total = total + prod.invert().truncate(order)
        out.append(total)
    return out
