"""Hardness gadgets.

* Three commuting two-letter PFAs (letters ``h`` and ``g``) whose behaviour
  on ``h^x g^y`` tracks the sign of ``a x^2 + b y - c``: one for exact
  reachability, one for the nonstrict and one for the strict cutpoint.
* A unary {0,1} PFA accepting a union of lollipop languages.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .ambiguity import AmbiguityClass, classify
from .linalg import ONE, ZERO, RMatrix, dsum_all, kron_all, mat_mul, vec_mat, mat_vec, dot
from .pfa import Pfa

UNIPOTENT = RMatrix([[1, 1], [0, 1]])  # A^k = [[1, k], [0, 1]]
LETTERS = ("h", "g")


def eye(n: int) -> RMatrix:
    return RMatrix.identity(n)


def unit(n: int, i: int, scale=1) -> list[Fraction]:
    out = [ZERO] * n
    out[i] = Fraction(scale)
    return out


def pad_column(m: RMatrix, target) -> list[Fraction]:
    """Amounts that bring every row sum of ``m`` up to ``target``."""
    out = [Fraction(target) - sum(row) for row in m.rows]
    if any(x < 0 for x in out):
        raise ValueError(f"row sum exceeds {target}")
    return out


def stochasticize(m: RMatrix, target) -> RMatrix:
    """Append one absorbing sink absorbing the missing mass, then divide by ``target``."""
    n = m.n_rows
    pad = pad_column(m, target)
    rows = [list(row) + [pad[i]] for i, row in enumerate(m.rows)]
    rows.append([ZERO] * n + [Fraction(target)])
    return RMatrix(rows).scale(Fraction(1, 1) / Fraction(target))


@dataclass(frozen=True)
class QuadInstance:
    """The equation ``a x^2 + b y = c`` over the naturals."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        for name in ("a", "b", "c"):
            val = getattr(self, name)
            if not isinstance(val, int) or val < 1:
                raise ValueError(f"{name} must be a positive integer, got {val!r}")

    @property
    def z(self) -> int:
        a, b, c = self.a, self.b, self.c
        return a * a + 2 * a * b + b * b + c * c + 2 * a * c + 2 * b * c

    def residual(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * y - self.c

    def solves(self, x: int, y: int) -> bool:
        return self.residual(x, y) == 0


class Variant(enum.Enum):
    REACH = "reach"
    NONSTRICT = "nonstrict"
    STRICT = "strict"

    @property
    def size(self) -> int:
        return {"reach": 9, "nonstrict": 37, "strict": 40}[self.value]


@dataclass(frozen=True)
class GadgetBundle:
    pfa: Pfa
    lam: Fraction
    variant: Variant
    instance: QuadInstance
    predicted: Callable[[int, int], Fraction] = field(repr=False)
    sink: int | None = None  # an absorbing rejecting state, never useful

    def relation(self, p: Fraction, x: int, y: int) -> bool:
        """The threshold behaviour the gadget promises on ``h^x g^y``."""
        sol = self.instance.solves(x, y)
        if self.variant is Variant.REACH:
            return (p == self.lam) == sol
        if self.variant is Variant.NONSTRICT:
            return p >= self.lam and ((p == self.lam) == sol)
        return (p < self.lam) == sol


# ---------------------------------------------------------------------------
# reachability, 9 states

PAD_H9 = (0, 2, 2, 3, 3, 3)
PAD_G9 = (3, 3, 3, 3, 2, 3)


def _reach_parts():
    A = UNIPOTENT
    h_raw = dsum_all(kron_all(A, A), eye(2))
    g_raw = dsum_all(eye(4), A)
    psi = RMatrix([[1, 3], [0, 4]]).scale(Fraction(1, 4))
    return h_raw, g_raw, psi


def quad_reach_gadget(q: QuadInstance) -> GadgetBundle:
    h_raw, g_raw, psi = _reach_parts()
    H = dsum_all(stochasticize(h_raw, 4), psi)
    G = dsum_all(stochasticize(g_raw, 4), psi)
    total = q.a + q.b + q.c
    u = [Fraction(x, total) for x in (q.a, 0, 0, 0, q.b, 0, 0, q.c, 0)]
    v = (0, 0, 0, 1, 0, 1, 0, 0, 1)
    lam = Fraction(q.c, total)

    def predicted(x: int, y: int) -> Fraction:
        return (q.c + Fraction(q.residual(x, y), 4 ** (x + y))) / total

    return GadgetBundle(Pfa(LETTERS, u, (H, G), v), lam, Variant.REACH, q, predicted, sink=6)


# ---------------------------------------------------------------------------
# nonstrict emptiness, 37 states


def _nonstrict_parts():
    A = UNIPOTENT
    I2 = eye(2)
    h_plus = dsum_all(kron_all(A, A, A, A), kron_all(A, A, I2), kron_all(I2, I2), eye(1))
    g_plus = dsum_all(eye(16), kron_all(I2, I2, A), kron_all(A, A), eye(1))
    h_minus = dsum_all(kron_all(A, A), I2)
    g_minus = dsum_all(eye(4), A)
    return h_plus, g_plus, h_minus, g_minus


def _nonstrict_vectors(q: QuadInstance):
    a, b, c = q.a, q.b, q.c
    u_plus = unit(16, 0, a * a) + unit(8, 0, 2 * a * b) + unit(4, 0, b * b) + [Fraction(c * c)] + [ZERO]
    v_plus = unit(16, 15) + unit(8, 7) + unit(4, 3) + [ONE] + [ZERO]
    u_minus = unit(4, 0, 2 * a * c) + unit(2, 0, 2 * b * c) + [ZERO]
    v_minus = unit(4, 3) + unit(2, 1) + [ZERO]
    return u_plus, v_plus, u_minus, v_minus


def _nonstrict_pfa(q: QuadInstance) -> Pfa:
    h_plus, g_plus, h_minus, g_minus = _nonstrict_parts()
    H = dsum_all(stochasticize(h_plus, 16), stochasticize(h_minus, 16))
    G = dsum_all(stochasticize(g_plus, 16), stochasticize(g_minus, 16))
    u_plus, v_plus, u_minus, v_minus = _nonstrict_vectors(q)
    z = q.z
    u = [x / z for x in u_plus + u_minus]
    v = [int(x) for x in v_plus] + [1 - int(x) for x in v_minus]
    return Pfa(LETTERS, u, (H, G), v)


def quad_nonstrict_gadget(q: QuadInstance) -> GadgetBundle:
    z = q.z
    lam = Fraction(2 * q.a * q.c + 2 * q.b * q.c, z)

    def predicted(x: int, y: int) -> Fraction:
        return (2 * q.a * q.c + 2 * q.b * q.c + Fraction(q.residual(x, y) ** 2, 16 ** (x + y))) / z

    # the sink of the first block is absorbing and rejecting
    return GadgetBundle(_nonstrict_pfa(q), lam, Variant.NONSTRICT, q, predicted, sink=29)


# ---------------------------------------------------------------------------
# strict emptiness, 40 states
#
# state 0 is an accepting start state; states 1..37 embed the nonstrict
# gadget; 38 is a rejecting wait state that leaks into the accepting trap 39.
# The first letter sends half the mass into the embedded gadget (as if it had
# already read that letter) and splits the other half between the wait state
# and the trap. Every row of state 0 is built from the same per-letter image,
# so the two letter matrices still commute.


def quad_strict_gadget(q: QuadInstance) -> GadgetBundle:
    inner = _nonstrict_pfa(q)
    m = inner.n
    n = m + 3
    wait, trap = m + 1, m + 2
    base = Fraction(1, 16 * q.z)
    first_leak = base * base
    half = Fraction(1, 2)
    mats = []
    for M in inner.matrices:
        rows = [[ZERO] * n for _ in range(n)]
        image = vec_mat(inner.initial, M)
        for j in range(m):
            rows[0][1 + j] = half * image[j]
        rows[0][wait] = half * first_leak
        rows[0][trap] = half * (1 - first_leak)
        for i in range(m):
            for j in range(m):
                rows[1 + i][1 + j] = M[i, j]
        rows[wait][wait] = base
        rows[wait][trap] = 1 - base
        rows[trap][trap] = ONE
        mats.append(RMatrix(rows))
    u = unit(n, 0)
    v = [1] + list(inner.final) + [0, 1]
    inner_bundle = quad_nonstrict_gadget(q)
    lam = (inner_bundle.lam + 1) / 2

    def predicted(x: int, y: int) -> Fraction:
        if x + y == 0:
            return ONE
        return inner_bundle.predicted(x, y) / 2 + (1 - base ** (x + y + 1)) / 2

    return GadgetBundle(Pfa(LETTERS, u, tuple(mats), v), lam, Variant.STRICT, q, predicted, sink=1 + 29)


def quad_gadget(q: QuadInstance, variant: Variant | str) -> GadgetBundle:
    variant = Variant(variant)
    return {
        Variant.REACH: quad_reach_gadget,
        Variant.NONSTRICT: quad_nonstrict_gadget,
        Variant.STRICT: quad_strict_gadget,
    }[variant](q)


# ---------------------------------------------------------------------------
# union of lollipops


@dataclass(frozen=True)
class RegexUnionSpec:
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple((int(z), int(r)) for z, r in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        if not pairs:
            raise ValueError("at least one (z, r) pair required")
        for z, r in pairs:
            if z < 0 or r < 1:
                raise ValueError(f"bad pair ({z}, {r}): need z >= 0 and r >= 1")

    @classmethod
    def parse(cls, text: str) -> "RegexUnionSpec":
        """``"z1,r1;z2,r2"``"""
        pairs = []
        for chunk in text.split(";"):
            chunk = chunk.strip()
            if chunk:
                z, r = chunk.split(",")
                pairs.append((int(z), int(r)))
        return cls(tuple(pairs))

    @property
    def n_states(self) -> int:
        return sum(z + r + 1 for z, r in self.pairs)

    def accepts(self, k: int) -> list[bool]:
        """Per component: does ``a^k`` end in that component's final state."""
        return [k >= z + 1 and (k - z - 1) % r == 0 for z, r in self.pairs]

    def acceptance(self, k: int) -> Fraction:
        hits = sum(self.accepts(k))
        return Fraction(hits, len(self.pairs))


def regex_union_gadget(spec: RegexUnionSpec | Sequence[tuple[int, int]]) -> Pfa:
    """Disjoint lollipops: ``n_0 -> ... -> n_(z+r) -> n_(z+1)``, final ``n_(z+1)``,
    start distribution uniform over the ``n_0`` of each component."""
    if not isinstance(spec, RegexUnionSpec):
        spec = RegexUnionSpec(tuple(spec))
    n = spec.n_states
    rows = [[0] * n for _ in range(n)]
    initial = [ZERO] * n
    final = [0] * n
    share = Fraction(1, len(spec.pairs))
    base = 0
    for z, r in spec.pairs:
        last = z + r
        for i in range(last):
            rows[base + i][base + i + 1] = 1
        rows[base + last][base + z + 1] = 1
        initial[base] += share
        final[base + z + 1] = 1
        base += last + 1
    return Pfa(("a",), initial, (RMatrix(rows),), final)


# ---------------------------------------------------------------------------
# verification


class GadgetMismatch(AssertionError):
    pass


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class BundleReport:
    variant: Variant
    instance: QuadInstance
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            out.append(f"{'PASS' if c.passed else 'FAIL'} {c.name}" + (f": {c.detail}" if c.detail else ""))
        return out


def _is_upper(m: RMatrix) -> bool:
    return m.is_upper_triangular()


def verify_bundle(g: GadgetBundle, max_xy: int = 8, strict: bool = False) -> BundleReport:
    """Check the bundle's promises on every ``h^x g^y`` with ``x, y <= max_xy``.

    With ``strict`` the first mismatch raises ``GadgetMismatch`` naming ``(x, y)``.
    """
    report = BundleReport(g.variant, g.instance)

    def record(name, ok, detail=""):
        report.checks.append(CheckResult(name, ok, detail))
        if strict and not ok:
            raise GadgetMismatch(f"{name}: {detail}")

    H, G = g.pfa.matrices
    record("state count", g.pfa.n == g.variant.size, f"{g.pfa.n} states")
    record("commuting", mat_mul(H, G) == mat_mul(G, H))
    record("row-stochastic", H.is_row_stochastic() and G.is_row_stochastic())
    record("upper-triangular", _is_upper(H) and _is_upper(G))
    kind = classify(g.pfa).kind
    record("polynomially ambiguous", kind is AmbiguityClass.POLYNOMIAL, kind.value)

    # rows[x] = u^T H^x, cols[y] = G^y v
    rows = [g.pfa.initial]
    for _ in range(max_xy):
        rows.append(vec_mat(rows[-1], H))
    cols = [g.pfa.final_vector()]
    for _ in range(max_xy):
        cols.append(mat_vec(G, cols[-1]))
    bad_formula = []
    bad_relation = []
    for x in range(max_xy + 1):
        for y in range(max_xy + 1):
            p = dot(rows[x], cols[y])
            if p != g.predicted(x, y):
                bad_formula.append((x, y))
                if strict:
                    raise GadgetMismatch(f"acceptance of h^{x} g^{y} is {p}, formula gives {g.predicted(x, y)}")
            if not g.relation(p, x, y):
                bad_relation.append((x, y))
                if strict:
                    raise GadgetMismatch(f"threshold relation fails at (x, y) = ({x}, {y}): p = {p}")
    record("closed-form identity", not bad_formula, f"mismatch at {bad_formula[:5]}" if bad_formula else "")
    record("threshold relation", not bad_relation, f"fails at {bad_relation[:5]}" if bad_relation else "")
    return report
