"""Cutpoint questions for unary polynomially ambiguous PFAs.

Pipeline: trim to useful states, reorder states along the SCC DAG so the
matrix is block upper-triangular, raise it to the lcm ``d`` of the cycle
lengths (now genuinely upper-triangular), and for each residue ``s`` build the
closed form of ``r -> P(a^(r d + s))``. Explicit horizons reduce every
question to a finite scan plus a certified answer beyond the horizon.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .ambiguity import AmbiguityClass, classify
from .closedform import ClosedForm, closed_form
from .graphs import topological_sccs
from .horizon import HorizonBound, Regime, horizon
from .linalg import RMatrix, dot, format_rational, jordan_decompose, mat_pow, mat_vec, vec_mat
from .pfa import Mode, Pfa, PfaError, Query, embed_nfa, trim


class NotPolynomialError(PfaError):
    pass


class BudgetExceeded(RuntimeError):
    """The horizon scan would exceed the configured budget."""


# ---------------------------------------------------------------------------
# triangular reduction


def _cycle_structure(pfa: Pfa) -> tuple[list[list[int]], int]:
    """Topologically ordered SCCs and the lcm of their cycle lengths.

    Raises if some SCC is not a single directed cycle.
    """
    if not pfa.is_unary:
        raise PfaError("unary automaton required")
    adj = embed_nfa(pfa).adjacency()
    comps = topological_sccs(pfa.n, adj)
    d = 1
    for comp in comps:
        if len(comp) == 1:
            continue
        members = set(comp)
        if any(len([q for q in adj[p] if q in members]) != 1 for p in comp):
            raise NotPolynomialError(
                f"strongly connected component {comp} is not a single cycle (exponentially ambiguous)"
            )
        d = math.lcm(d, len(comp))
    return comps, d


def period(pfa: Pfa) -> int:
    """lcm of the cycle lengths among the useful states."""
    return _cycle_structure(trim(pfa)[0])[1]


@dataclass(frozen=True)
class TriangularReduction:
    """``P(a^(r d + s)) = residue_vector(s) . U^r v_prime`` with ``U`` upper-triangular."""

    d: int
    perm: tuple[int, ...]  # perm[i] = original index of new state i
    B: RMatrix  # the reordered one-step matrix
    U: RMatrix
    u_perm: tuple[Fraction, ...]
    v_prime: tuple[Fraction, ...]

    def residue_vector(self, s: int) -> tuple[Fraction, ...]:
        if not 0 <= s < self.d:
            raise ValueError(f"residue {s} outside [0, {self.d})")
        return vec_mat(self.u_perm, mat_pow(self.B, s))

    def residue_vectors(self):
        """All residue vectors in order, stepping one multiplication at a time."""
        vec = self.u_perm
        for _ in range(self.d):
            yield vec
            vec = vec_mat(vec, self.B)

    def value(self, s: int, r: int) -> Fraction:
        return dot(self.residue_vector(s), mat_vec(mat_pow(self.U, r), self.v_prime))


def triangular_reduction(pfa: Pfa) -> TriangularReduction:
    """Reduce a unary PFA whose SCCs are all simple cycles.

    Expects a trimmed automaton (see ``pfa.trim``); non-useful junk may
    violate the cycle condition even when the automaton is polynomially
    ambiguous.
    """
    comps, d = _cycle_structure(pfa)
    order = tuple(q for comp in comps for q in comp)
    a = pfa.matrices[0]
    B = RMatrix([[a[i, j] for j in order] for i in order])
    U = mat_pow(B, d)
    if not U.is_upper_triangular():
        raise AssertionError("reduction failed to produce an upper-triangular matrix")
    return TriangularReduction(
        d=d,
        perm=order,
        B=B,
        U=U,
        u_perm=tuple(pfa.initial[i] for i in order),
        v_prime=tuple(pfa.final_vector()[i] for i in order),
    )


# ---------------------------------------------------------------------------
# decision


class Outcome(enum.Enum):
    EMPTY = "empty"
    WITNESS = "witness"


@dataclass(frozen=True)
class ResidueAudit:
    s: int
    closed_form: ClosedForm
    bound: HorizonBound
    scanned: int


@dataclass(frozen=True)
class Decision:
    outcome: Outcome
    query: Query
    d: int = 1
    s: int | None = None
    r: int | None = None
    probability: Fraction | None = None
    audits: tuple[ResidueAudit, ...] = field(default=(), repr=False)

    @property
    def length(self) -> int | None:
        if self.outcome is not Outcome.WITNESS:
            return None
        return self.r * self.d + self.s

    @property
    def is_witness(self) -> bool:
        return self.outcome is Outcome.WITNESS

    def summary(self) -> str:
        if self.is_witness:
            return f"WITNESS k={self.length} p={format_rational(self.probability)}"
        return "EMPTY"

    def certificate(self) -> str:
        out = [f"query {self.query}", f"period d {self.d}"]
        for a in self.audits:
            out.append(f"-- residue s={a.s}: scanned r=0..{a.scanned - 1}")
            out.append(f"closed form {a.closed_form}")
            out.append(a.bound.certificate())
        return "\n".join(out)


def _beyond_horizon(bound: HorizonBound, cf: ClosedForm, q: Query) -> bool:
    """Does every ``r`` past the horizon satisfy the predicate?"""
    mode = q.mode
    if bound.regime is Regime.CONSTANT:
        return mode.holds(cf.c, q.lam)
    if mode is Mode.REACH:
        return False
    if bound.regime is Regime.NOT_LIMIT:
        side = 1 if cf.c > q.lam else -1
    else:
        side = bound.sign
    if mode in (Mode.EMPTY_GE, Mode.EMPTY_GT):
        return side > 0
    return side < 0


def decide(
    pfa: Pfa,
    query: Query,
    budget: int = 10**6,
    residue: int | None = None,
    progress: Callable[[int, int], None] | None = None,
) -> Decision:
    """Decide whether some ``a^k`` satisfies ``query``.

    ``budget`` caps the number of ``r`` values scanned in total;
    ``BudgetExceeded`` is raised rather than guessing. ``residue`` restricts
    the search to ``k = s (mod d)``.
    """
    if not pfa.is_unary:
        raise PfaError("decide handles unary automata only")
    if classify(pfa).kind is AmbiguityClass.EXPONENTIAL:
        raise NotPolynomialError("automaton is exponentially ambiguous; the procedure does not apply")
    red = triangular_reduction(trim(pfa)[0])
    jd = jordan_decompose(red.U)
    columns = [red.v_prime]  # columns[r] = U^r v'
    scanned_total = 0
    audits = []

    if residue is None:
        residues = enumerate(red.residue_vectors())
    else:
        residues = [(residue, red.residue_vector(residue))]
    for s, u_s in residues:
        cf = closed_form(u_s, red.U, red.v_prime, jd)
        bound = horizon(cf, query.lam)
        H = bound.k_star
        if scanned_total + H + 1 > budget:
            raise BudgetExceeded(
                f"residue {s} needs {H + 1} evaluations; budget {budget} "
                f"({scanned_total} already used); bound too large for desk scale"
            )
        if progress:
            progress(s, H)
        for r in range(H + 1):
            if r == len(columns):
                columns.append(mat_vec(red.U, columns[-1]))
            p = dot(u_s, columns[r])
            if query.holds(p):
                audits.append(ResidueAudit(s, cf, bound, r + 1))
                return Decision(Outcome.WITNESS, query, red.d, s, r, p, tuple(audits))
        scanned_total += H + 1
        audits.append(ResidueAudit(s, cf, bound, H + 1))
        if _beyond_horizon(bound, cf, query):
            r = H + 1
            p = cf.evaluate(r)
            if not query.holds(p):
                raise AssertionError(f"horizon certificate violated at s={s}, r={r}")
            return Decision(Outcome.WITNESS, query, red.d, s, r, p, tuple(audits))
    return Decision(Outcome.EMPTY, query, red.d, audits=tuple(audits))


# ---------------------------------------------------------------------------
# witness checking by repeated squaring


@dataclass(frozen=True)
class WitnessCheck:
    holds: bool
    probability: Fraction
    length: int
    fast_path: bool  # False: matrix not {0,1}, entries may grow with the exponent

    def __bool__(self) -> bool:
        return self.holds


def _compose_power(succ: tuple[int, ...], k: int) -> tuple[int, ...]:
    """The map ``succ`` iterated ``k`` times, by squaring."""
    result = tuple(range(len(succ)))
    base = succ
    while k:
        if k & 1:
            result = tuple(base[i] for i in result)
        k >>= 1
        if k:
            base = tuple(base[i] for i in base)
    return result


def verify_witness(pfa: Pfa, query: Query, s: int, r: int, d: int | None = None) -> WitnessCheck:
    """Check ``P(a^(s + r d)) <mode> lambda`` in time polynomial in the bit lengths.

    For {0,1} matrices each state has a single successor, so powers are
    compositions of a map on states. Other matrices fall back to exact
    squaring and the result is flagged.
    """
    if not pfa.is_unary:
        raise PfaError("verify_witness handles unary automata only")
    if s < 0 or r < 0:
        raise ValueError("s and r must be nonnegative")
    if d is None:
        d = period(pfa)
    k = s + r * d
    a = pfa.matrices[0]
    v = pfa.final_vector()
    if a.is_zero_one():
        succ = tuple(row.index(1) for row in a.rows)
        image = _compose_power(succ, k)
        p = sum((pfa.initial[i] for i in range(pfa.n) if pfa.final[image[i]]), Fraction(0))
        fast = True
    else:
        p = dot(vec_mat(pfa.initial, mat_pow(a, k)), v)
        fast = False
    return WitnessCheck(query.holds(p), p, k, fast)
