"""Independent reference computations used by the tests.

Nothing here touches the package: coefficient lists are plain Python lists
indexed by exponent and every product is multiplied out term by term.
"""

from fractions import Fraction


def mul(a, b, N):
    out = [0] * (N + 1)
    for i, x in enumerate(a[: N + 1]):
        if x:
            for j, y in enumerate(b[: N + 1 - i]):
                out[i + j] += x * y
    return out


def binomial_factor(c, e, N):
    """1 + c q^e as a list."""
    out = [0] * (N + 1)
    out[0] = 1
    if e <= N:
        out[e] += c
    return out


def inverse(a, N):
    inv = [Fraction(0)] * (N + 1)
    inv[0] = Fraction(1, a[0])
    for k in range(1, N + 1):
        inv[k] = -sum(a[i] * inv[k - i] for i in range(1, min(k, len(a) - 1) + 1)) / a[0]
    return [int(x) if x.denominator == 1 else x for x in inv]


def poch(sign, e0, base, n, N):
    """(sign q^e0; q^base)_n, n = None for the infinite product."""
    out = [1] + [0] * N
    j = 0
    while n is None or j < n:
        e = e0 + base * j
        if n is None and e > N and e > 0:
            break
        out = mul(out, binomial_factor(-sign, e, N), N) if e > 0 else [x * (1 - sign) for x in out]
        j += 1
    return out


def partitions_with_parts(allowed, N):
    """Number of partitions of each n <= N into parts from ``allowed``."""
    p = [1] + [0] * N
    for part in allowed:
        if part > N:
            continue
        for n in range(part, N + 1):
            p[n] += p[n - part]
    return p


def theta(sa, alpha, sb, beta, N):
    """Direct bilateral sum of a^(n(n+1)/2) b^(n(n-1)/2), a = sa q^alpha, b = sb q^beta."""
    out = [0] * (N + 1)
    for n in range(-3 * N - 3, 3 * N + 4):
        t1, t2 = n * (n + 1) // 2, n * (n - 1) // 2
        e = alpha * t1 + beta * t2
        if 0 <= e <= N:
            out[e] += sa ** (t1 % 2) * sb ** (t2 % 2)
    return out


def false_theta(sa, alpha, sb, beta, N):
    out = [0] * (N + 1)
    for n in range(0, 3 * N + 4):
        t1, t2 = n * (n + 1) // 2, n * (n - 1) // 2
        e = alpha * t1 + beta * t2
        if e <= N:
            out[e] += sa ** (t1 % 2) * sb ** (t2 % 2)
        if n >= 1:
            e = alpha * t2 + beta * t1
            if e <= N:
                out[e] -= sa ** (t2 % 2) * sb ** (t1 % 2)
    return out


def gaussian(A, B):
    """[A; B]_q by the Pascal recursion [A;B] = [A-1;B-1] + q^B [A-1;B]."""
    if B < 0 or B > A:
        return []
    if B == 0 or B == A:
        return [1]
    x = gaussian(A - 1, B - 1)
    y = [0] * B + gaussian(A - 1, B)
    n = max(len(x), len(y))
    return [(x[i] if i < len(x) else 0) + (y[i] if i < len(y) else 0) for i in range(n)]


def coeffs_of(s, N):
    """Dense coefficients 0..N of an integral-exponent package series."""
    return [s.coeff(e) for e in range(N + 1)]
