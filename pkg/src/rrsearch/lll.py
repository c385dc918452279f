"""Integral LLL: exact Gram-Schmidt data held as integers (Cohen, Alg. 2.6.7).

``d[i]`` are the Gram determinants and ``lam[k][j] = d[j+1] * mu[k][j]``, both
integers for an integral basis, so no rational arithmetic is needed at all.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import DegenerateBasis

DELTA = Fraction(99, 100)


def _dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


def lll_reduce(basis: Sequence[Sequence[int]], delta: Fraction = DELTA) -> list[list[int]]:
    """LLL-reduce the rows of an integer matrix (rows must be independent)."""
    b = [list(map(int, row)) for row in basis]
    n = len(b)
    if n == 0:
        return b
    dn, dd = delta.numerator, delta.denominator
    # 1-based Gram data: d[0] = 1, d[i] for the first i rows
    d = [1] + [0] * n
    lam = [[0] * n for _ in range(n)]
    d[1] = _dot(b[0], b[0])
    if d[1] == 0:
        raise DegenerateBasis("zero vector in basis")
    k, kmax = 2, 1

    def red(k: int, l: int):
        # size-reduce row k against row l (1-based)
        lk = lam[k - 1][l - 1]
        if 2 * abs(lk) > d[l]:
            qq = (2 * lk + d[l]) // (2 * d[l])
            bk, bl = b[k - 1], b[l - 1]
            for t in range(len(bk)):
                if bl[t]:
                    bk[t] -= qq * bl[t]
            lam[k - 1][l - 1] = lk - qq * d[l]
            rk, rl = lam[k - 1], lam[l - 1]
            for i in range(l - 1):
                if rl[i]:
                    rk[i] -= qq * rl[i]

    def swap(k: int):
        b[k - 1], b[k - 2] = b[k - 2], b[k - 1]
        rk, rk1 = lam[k - 1], lam[k - 2]
        for j in range(k - 2):
            rk[j], rk1[j] = rk1[j], rk[j]
        lm = rk[k - 2]
        B = (d[k - 2] * d[k] + lm * lm) // d[k - 1]
        for i in range(k + 1, kmax + 1):
            ri = lam[i - 1]
            t = ri[k - 1]
            ri[k - 1] = (d[k] * ri[k - 2] - lm * t) // d[k - 1]
            ri[k - 2] = (B * t + lm * ri[k - 1]) // d[k]
        d[k - 1] = B

    while k <= n:
        if k > kmax:
            kmax = k
            rowk = lam[k - 1]
            for j in range(1, k + 1):
                u = _dot(b[k - 1], b[j - 1])
                rowj = lam[j - 1]
                for i in range(1, j):
                    u = (d[i] * u - rowk[i - 1] * rowj[i - 1]) // d[i - 1]
                if j < k:
                    rowk[j - 1] = u
                else:
                    if u == 0:
                        raise DegenerateBasis(f"row {k - 1} depends on the previous rows")
                    d[k] = u
        while True:
            red(k, k - 1)
            lm = lam[k - 1][k - 2]
            if dd * d[k] * d[k - 2] < dn * d[k - 1] * d[k - 1] - dd * lm * lm:
                swap(k)
                k = max(2, k - 1)
                continue
            for l in range(k - 2, 0, -1):
                red(k, l)
            k += 1
            break
    return b


def is_lll_reduced(basis: Sequence[Sequence[int]], delta: Fraction = DELTA) -> bool:
    """Exact check of size reduction and the Lovasz condition (rational Gram-Schmidt)."""
    rows = [[Fraction(x) for x in r] for r in basis]
    n = len(rows)
    bstar = []
    Bs = []
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        v = rows[i][:]
        for j in range(i):
            mu[i][j] = _dot(rows[i], bstar[j]) / Bs[j]
            v = [a - mu[i][j] * c for a, c in zip(v, bstar[j])]
        bstar.append(v)
        Bs.append(_dot(v, v))
    for i in range(n):
        for j in range(i):
            if abs(mu[i][j]) > Fraction(1, 2):
                return False
    for k in range(1, n):
        if Bs[k] < (delta - mu[k][k - 1] ** 2) * Bs[k - 1]:
            return False
    return True
