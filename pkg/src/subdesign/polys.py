"""Dense univariate polynomials over an exact field.

A polynomial is a tuple of coefficients, lowest degree first, with no trailing
zeros (the zero polynomial is the empty tuple).
"""
from __future__ import annotations


def trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def degree(a) -> int:
    return len(a) - 1  # -1 for the zero polynomial


def add(F, a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else F.zero
        y = b[i] if i < len(b) else F.zero
        out.append(F.add(x, y))
    return trim(out)


def neg(F, a):
    return tuple(F.neg(x) for x in a)


def sub(F, a, b):
    return add(F, a, neg(F, b))


def scale(F, c, a):
    return trim(F.mul(c, x) for x in a)


def mul(F, a, b):
    if not a or not b:
        return ()
    out = [F.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y != 0:
                out[i + j] = F.add(out[i + j], F.mul(x, y))
    return trim(out)


def divmod_poly(F, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    db = len(b) - 1
    inv = F.inv(b[-1])
    qt = [F.zero] * max(0, len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c == 0:
            continue
        c = F.mul(c, inv)
        qt[i - db] = c
        for j, y in enumerate(b):
            if y != 0:
                a[i - db + j] = F.sub(a[i - db + j], F.mul(c, y))
    return trim(qt), trim(a[:db])


def exact_div(F, a, b):
    qt, r = divmod_poly(F, a, b)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return qt


def divides(F, d, a) -> bool:
    return not divmod_poly(F, a, d)[1]


def evaluate(F, a, x):
    acc = F.zero
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def substitute_scaled(F, a, c):
    """a(c X): coefficient i gets multiplied by c^i."""
    out = []
    power = F.one
    for x in a:
        out.append(F.mul(x, power))
        power = F.mul(power, c)
    return trim(out)


def linear(F, root):
    """X - root."""
    return trim((F.neg(root), F.one))


def power(F, a, k):
    out = (F.one,)
    for _ in range(k):
        out = mul(F, out, a)
    return out


def from_roots(F, roots):
    out = (F.one,)
    for r in roots:
        out = mul(F, out, linear(F, r))
    return out


def x_power(F, k):
    return tuple([F.zero] * k + [F.one])


def lowest_degree(a) -> int:
    """Largest j with X^j | a (infinite for zero; reported as len)."""
    for i, x in enumerate(a):
        if x != 0:
            return i
    return len(a)


def det(F, M):
    """Determinant of a square matrix of polynomials via Bareiss over F[X]."""
    n = len(M)
    A = [[trim(x) for x in row] for row in M]
    sign = 1
    prev = (F.one,)
    for k in range(n - 1):
        if not A[k][k]:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return ()
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = sub(F, mul(F, A[k][k], A[i][j]), mul(F, A[i][k], A[k][j]))
                A[i][j] = exact_div(F, num, prev)
        prev = A[k][k]
    out = A[n - 1][n - 1] if n else (F.one,)
    return out if sign == 1 else neg(F, out)
