"""Random unary PFAs that are polynomially (or finitely) ambiguous by construction.

States are split into components laid out left to right; each component is a
single state (optionally self-looping) or a simple cycle. Mass only leaves a
component towards later ones, so every SCC is a single cycle and no state can
return to itself along two different runs.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .linalg import RMatrix
from .pfa import Pfa


def _split(rng: random.Random, total: Fraction, parts: int, denom: int) -> list[Fraction]:
    """Random nonnegative rationals with denominator ``denom`` summing to ``total``."""
    units = int(total * denom)
    cuts = sorted(rng.randint(0, units) for _ in range(parts - 1))
    bounds = [0] + cuts + [units]
    return [Fraction(bounds[i + 1] - bounds[i], denom) for i in range(parts)]


def random_cycle_dag_pfa(rng: random.Random, max_states: int = 6, denom: int = 4) -> Pfa:
    n = rng.randint(1, max_states)
    comps: list[list[int]] = []
    i = 0
    while i < n:
        size = rng.choice([1, 1, 2, 3]) if n - i > 1 else 1
        size = min(size, n - i)
        comps.append(list(range(i, i + size)))
        i += size
    rows = [[Fraction(0)] * n for _ in range(n)]
    for ci, comp in enumerate(comps):
        later = [q for c in comps[ci + 1 :] for q in c]
        for pos, p in enumerate(comp):
            if len(comp) > 1:
                inner = comp[(pos + 1) % len(comp)]
            else:
                inner = p
            if not later:
                rows[p][inner] = Fraction(1)
                continue
            # probability of staying inside the component
            stay = Fraction(rng.randint(1 if len(comp) > 1 else 0, denom), denom)
            if len(comp) > 1 and rng.random() < 0.3:
                stay = Fraction(1)
            rows[p][inner] += stay
            targets = rng.sample(later, k=min(len(later), rng.randint(1, 2)))
            for t, share in zip(targets, _split(rng, 1 - stay, len(targets), denom * 2)):
                rows[p][t] += share
    initial = _split(rng, Fraction(1), n, denom)
    final = [rng.randint(0, 1) for _ in range(n)]
    if not any(final):
        final[-1] = 1
    return Pfa(("a",), initial, (RMatrix(rows),), final)


def random_functional_pfa(rng: random.Random, n: int) -> Pfa:
    """A {0,1} unary PFA: each state has exactly one successor."""
    succ = [rng.randrange(n) for _ in range(n)]
    rows = [[1 if j == succ[i] else 0 for j in range(n)] for i in range(n)]
    start = rng.randrange(n)
    final = [rng.randint(0, 1) for _ in range(n)]
    initial = [Fraction(1) if i == start else Fraction(0) for i in range(n)]
    return Pfa(("a",), initial, (RMatrix(rows),), final)
