"""Independent reference arithmetic on plain nested lists (no package code)."""

from fractions import Fraction


def matmul(a, b):
    return [[sum((Fraction(a[i][t]) * b[t][j] for t in range(len(b))), Fraction(0)) for j in range(len(b[0]))]
            for i in range(len(a))]


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def power(a, k):
    out = identity(len(a))
    for _ in range(k):
        out = matmul(out, a)
    return out


def rows_of(m):
    """Plain rows of an RMatrix or nested list."""
    return [list(r) for r in getattr(m, "rows", m)]


def accept(initial, mats, final, word):
    """``u^T M_w v`` with ``word`` a sequence of matrix indices, one step at a time."""
    vec = [Fraction(x) for x in initial]
    for letter in word:
        m = mats[letter]
        vec = [sum((vec[i] * m[i][j] for i in range(len(vec))), Fraction(0)) for j in range(len(vec))]
    return sum((vec[i] * final[i] for i in range(len(vec))), Fraction(0))


def pfa_accept(pfa, word):
    return accept(pfa.initial, [rows_of(m) for m in pfa.matrices], pfa.final, word)
