"""Brute-force ground truth by bounded enumeration.

Deliberately shares nothing with the decider beyond the PFA type: values are
produced by plain vector-matrix stepping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .linalg import dot, format_rational, mat_mul, mat_vec, vec_mat
from .pfa import Pfa, PfaError, Query


@dataclass(frozen=True)
class SweepResult:
    entries: tuple[tuple[object, Fraction], ...]  # (k or (x, y), probability)

    @property
    def values(self) -> list[Fraction]:
        return [p for _, p in self.entries]

    @property
    def minimum(self) -> Fraction:
        return min(self.values)

    @property
    def maximum(self) -> Fraction:
        return max(self.values)

    def hits(self, q: Query) -> list:
        return [w for w, p in self.entries if q.holds(p)]

    def to_csv(self) -> str:
        lines = []
        for w, p in self.entries:
            key = w if isinstance(w, int) else ",".join(map(str, w))
            lines.append(f"{key},{format_rational(p)}")
        return "\n".join(lines) + "\n"


def iter_unary(pfa: Pfa) -> Iterator[Fraction]:
    """``P(a^0), P(a^1), ...`` by one vector-matrix product per step.

    Works on integers: with ``M = N / D`` and ``u = w / E`` the numerators
    ``w N^k`` are exact and the value is their final mass over ``E D^k``.
    """
    if not pfa.is_unary:
        raise PfaError("unary automaton required")
    a = pfa.matrices[0]
    D = math.lcm(*(x.denominator for row in a.rows for x in row))
    E = math.lcm(*(x.denominator for x in pfa.initial))
    N = [[int(x * D) for x in row] for row in a.rows]
    vec = [int(x * E) for x in pfa.initial]
    finals = [i for i, b in enumerate(pfa.final) if b]
    n = pfa.n
    scale = E
    while True:
        yield Fraction(sum(vec[i] for i in finals), scale)
        nxt = [0] * n
        for i, x in enumerate(vec):
            if x:
                row = N[i]
                for j in range(n):
                    if row[j]:
                        nxt[j] += x * row[j]
        vec = nxt
        scale *= D


def sweep_unary(pfa: Pfa, max_k: int) -> SweepResult:
    values = iter_unary(pfa)
    return SweepResult(tuple((k, next(values)) for k in range(max_k + 1)))


def sweep_grid(pfa: Pfa, max_x: int, max_y: int) -> SweepResult:
    """``P(h^x g^y)`` for the two letters in alphabet order.

    Only meaningful as a description of all words when the matrices commute,
    so non-commuting input is refused.
    """
    if len(pfa.alphabet) != 2:
        raise PfaError("two-letter automaton required")
    H, G = pfa.matrices
    if mat_mul(H, G) != mat_mul(G, H):
        raise PfaError("letter matrices do not commute; a grid sweep would not cover all words")
    rows = [pfa.initial]
    for _ in range(max_x):
        rows.append(vec_mat(rows[-1], H))
    cols = [pfa.final_vector()]
    for _ in range(max_y):
        cols.append(mat_vec(G, cols[-1]))
    return SweepResult(tuple(((x, y), dot(rows[x], cols[y])) for x in range(max_x + 1) for y in range(max_y + 1)))


@dataclass(frozen=True)
class OracleResult:
    """A witness word (letter indices) or ``None`` meaning unknown."""

    word: tuple[int, ...] | None
    probability: Fraction | None
    explored: int

    @property
    def found(self) -> bool:
        return self.word is not None

    @property
    def length(self) -> int | None:
        return None if self.word is None else len(self.word)


def oracle_decide(pfa: Pfa, q: Query, max_len: int) -> OracleResult:
    """Search all words up to ``max_len``, shortest first (then by letter order).

    Never claims emptiness: not finding a witness only means unknown. For
    more than one letter, distinct words reaching the same distribution are
    explored once.
    """
    v = pfa.final_vector()
    if pfa.is_unary:
        for k, p in enumerate(iter_unary(pfa)):
            if q.holds(p):
                return OracleResult((0,) * k, p, k + 1)
            if k >= max_len:
                return OracleResult(None, None, k + 1)
    frontier = [((), pfa.initial)]
    seen = {pfa.initial}
    explored = 0
    for length in range(max_len + 1):
        nxt = []
        for word, vec in frontier:
            explored += 1
            p = dot(vec, v)
            if q.holds(p):
                return OracleResult(word, p, explored)
            if length < max_len:
                for a, m in enumerate(pfa.matrices):
                    w = vec_mat(vec, m)
                    if w not in seen:
                        seen.add(w)
                        nxt.append((word + (a,), w))
        frontier = nxt
    return OracleResult(None, None, explored)
