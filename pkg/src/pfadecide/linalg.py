"""Exact rational matrices.

Scalars are :class:`fractions.Fraction` throughout; nothing in here ever
touches a float. Matrices are small and dense, so a tuple-of-tuples grid
with a zero-skipping product is plenty fast for the sizes we care about
(a few dozen states).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")

ZERO = Fraction(0)
ONE = Fraction(1)


def parse_rational(token: str) -> Fraction:
    """Parse ``p`` or ``p/q`` exactly. Decimal and float notation are rejected."""
    token = token.strip()
    if not _RATIONAL_RE.match(token):
        raise ValueError(f"malformed rational {token!r}")
    value = Fraction(token)  # raises ZeroDivisionError on q == 0
    return value


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def as_vector(values: Iterable) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in values)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} vs {len(v)}")
    total = ZERO
    for a, b in zip(u, v):
        if a and b:
            total += a * b
    return total


class DimensionError(ValueError):
    pass


@dataclass(frozen=True, eq=True, init=False)
class RMatrix:
    """Immutable dense matrix over the rationals, stored row-major."""

    rows: tuple[tuple[Fraction, ...], ...]

    def __init__(self, rows: Iterable[Iterable]):
        grid = tuple(tuple(Fraction(x) for x in row) for row in rows)
        if grid:
            width = len(grid[0])
            if any(len(row) != width for row in grid):
                raise DimensionError("ragged rows")
        object.__setattr__(self, "rows", grid)

    # -- construction -------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "RMatrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n: int, m: int | None = None) -> "RMatrix":
        m = n if m is None else m
        return cls([[ZERO] * m for _ in range(n)])

    @classmethod
    def diag(cls, values: Iterable) -> "RMatrix":
        vals = list(values)
        n = len(vals)
        return cls([[vals[i] if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Fraction]]) -> "RMatrix":
        if not columns:
            return cls([])
        n = len(columns[0])
        return cls([[col[i] for col in columns] for i in range(n)])

    # -- shape and access ---------------------------------------------------

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def shape(self) -> tuple[int, int]:
        return self.n_rows, self.n_cols

    @property
    def is_square(self) -> bool:
        return self.n_rows == self.n_cols

    def __getitem__(self, idx: tuple[int, int]) -> Fraction:
        i, j = idx
        return self.rows[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.rows[i]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.rows)

    def transpose(self) -> "RMatrix":
        return RMatrix(zip(*self.rows)) if self.rows else self

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rational(x) for x in row) for row in self.rows)
        return f"RMatrix([{body}])"

    # -- predicates -----------------------------------------------------------

    def is_row_stochastic(self) -> bool:
        return all(all(x >= 0 for x in row) and sum(row) == 1 for row in self.rows)

    def is_upper_triangular(self) -> bool:
        return all(self.rows[i][j] == 0 for i in range(self.n_rows) for j in range(min(i, self.n_cols)))

    def is_zero_one(self) -> bool:
        return all(x == 0 or x == 1 for row in self.rows for x in row)

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other: "RMatrix") -> "RMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return RMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "RMatrix") -> "RMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot subtract {self.shape} and {other.shape}")
        return RMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> "RMatrix":
        return RMatrix([[-a for a in r] for r in self.rows])

    def scale(self, k) -> "RMatrix":
        k = Fraction(k)
        return RMatrix([[k * a for a in r] for r in self.rows])

    def __matmul__(self, other: "RMatrix") -> "RMatrix":
        return mat_mul(self, other)

    def __pow__(self, k: int) -> "RMatrix":
        return mat_pow(self, k)

    def vec_mul(self, u: Sequence[Fraction]) -> tuple[Fraction, ...]:
        """Row vector times matrix, ``u^T M``."""
        return vec_mat(u, self)

    def mul_vec(self, v: Sequence[Fraction]) -> tuple[Fraction, ...]:
        """Matrix times column vector, ``M v``."""
        return mat_vec(self, v)

    def inverse(self) -> "RMatrix":
        return inverse(self)


# ---------------------------------------------------------------------------
# products


def mat_mul(a: RMatrix, b: RMatrix) -> RMatrix:
    if a.n_cols != b.n_rows:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    m = b.n_cols
    b_rows = b.rows
    out = []
    for arow in a.rows:
        acc = [ZERO] * m
        for k, x in enumerate(arow):
            if not x:
                continue
            for j, y in enumerate(b_rows[k]):
                if y:
                    acc[j] += x * y
        out.append(acc)
    if not out:
        return RMatrix([])
    return RMatrix(out)


def vec_mat(u: Sequence[Fraction], m: RMatrix) -> tuple[Fraction, ...]:
    if len(u) != m.n_rows:
        raise DimensionError(f"vector of length {len(u)} times {m.shape} matrix")
    acc = [ZERO] * m.n_cols
    for x, row in zip(u, m.rows):
        if not x:
            continue
        for j, y in enumerate(row):
            if y:
                acc[j] += x * y
    return tuple(acc)


def mat_vec(m: RMatrix, v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    if len(v) != m.n_cols:
        raise DimensionError(f"{m.shape} matrix times vector of length {len(v)}")
    return tuple(dot(row, v) for row in m.rows)


def mat_pow(a: RMatrix, k: int) -> RMatrix:
    """``a**k`` by repeated squaring; ``k`` may be an arbitrarily large int."""
    if not a.is_square:
        raise DimensionError(f"power of non-square {a.shape} matrix")
    k = int(k)
    if k < 0:
        raise ValueError("negative exponent")
    result = None
    base = a
    while k:
        if k & 1:
            result = base if result is None else mat_mul(result, base)
        k >>= 1
        if k:
            base = mat_mul(base, base)
    return RMatrix.identity(a.n_rows) if result is None else result


def kron(a: RMatrix, b: RMatrix) -> RMatrix:
    """Kronecker product: block (i, j) is ``a[i, j] * b``."""
    p, q = b.shape
    out = []
    for arow in a.rows:
        for bi in range(p):
            brow = b.rows[bi]
            out.append([x * y for x in arow for y in brow])
    return RMatrix(out) if out else RMatrix([])


def dsum(a: RMatrix, b: RMatrix) -> RMatrix:
    """Direct sum, ``a`` in the top-left block and ``b`` in the bottom-right."""
    n, m = a.shape
    p, q = b.shape
    out = [list(row) + [ZERO] * q for row in a.rows]
    out += [[ZERO] * m + list(row) for row in b.rows]
    return RMatrix(out)


def kron_all(*mats: RMatrix) -> RMatrix:
    out = mats[0]
    for m in mats[1:]:
        out = kron(out, m)
    return out


def dsum_all(*mats: RMatrix) -> RMatrix:
    out = mats[0]
    for m in mats[1:]:
        out = dsum(out, m)
    return out


def permutation_matrix(order: Sequence[int]) -> RMatrix:
    """Matrix ``P`` with ``(P A P^-1)[i, j] == A[order[i], order[j]]``."""
    n = len(order)
    return RMatrix([[ONE if j == order[i] else ZERO for j in range(n)] for i in range(n)])


# ---------------------------------------------------------------------------
# elimination


def rref(m: RMatrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns.

    Pivot choice is the first nonzero entry at or below the current row,
    so the result is fully determined by the input.
    """
    rows = [list(r) for r in m.rows]
    n_rows, n_cols = m.shape
    pivots: list[int] = []
    r = 0
    for col in range(n_cols):
        if r == n_rows:
            break
        pivot = next((i for i in range(r, n_rows) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(n_rows):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    return rows, pivots


def rank(m: RMatrix) -> int:
    return len(rref(m)[1])


def kernel(m: RMatrix) -> list[tuple[Fraction, ...]]:
    """Basis of the right null space, one vector per free column (ascending)."""
    rows, pivots = rref(m)
    n = m.n_cols
    pivot_set = set(pivots)
    basis = []
    for free in range(n):
        if free in pivot_set:
            continue
        vec = [ZERO] * n
        vec[free] = ONE
        for r, pc in enumerate(pivots):
            vec[pc] = -rows[r][free]
        basis.append(tuple(vec))
    return basis


class SingularMatrixError(ArithmeticError):
    pass


def inverse(m: RMatrix) -> RMatrix:
    if not m.is_square:
        raise DimensionError(f"inverse of non-square {m.shape} matrix")
    n = m.n_rows
    aug = RMatrix([list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(m.rows)])
    rows, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrixError("matrix is singular")
    return RMatrix([row[n:] for row in rows])


class _Span:
    """Incrementally maintained echelon basis used for independence tests."""

    def __init__(self, dim: int):
        self.dim = dim
        self._rows: dict[int, list[Fraction]] = {}

    def _reduce(self, v: Sequence[Fraction]) -> list[Fraction]:
        w = list(v)
        for col in sorted(self._rows):
            if w[col]:
                f = w[col]
                w = [x - f * y for x, y in zip(w, self._rows[col])]
        return w

    def contains(self, v: Sequence[Fraction]) -> bool:
        return not any(self._reduce(v))

    def add(self, v: Sequence[Fraction]) -> bool:
        w = self._reduce(v)
        lead = next((i for i, x in enumerate(w) if x), None)
        if lead is None:
            return False
        inv = 1 / w[lead]
        w = [x * inv for x in w]
        for col, row in self._rows.items():
            if row[lead]:
                f = row[lead]
                self._rows[col] = [x - f * y for x, y in zip(row, w)]
        self._rows[lead] = w
        return True


# ---------------------------------------------------------------------------
# Jordan form


@dataclass(frozen=True)
class JordanDecomposition:
    """``A == S_inv @ J @ S`` with the columns of ``S_inv`` the Jordan chains.

    ``blocks`` lists ``(eigenvalue, size)`` in the order the blocks occur
    along the diagonal of ``J``: eigenvalues strictly descending, and for
    a repeated eigenvalue the larger blocks first.
    """

    S: RMatrix
    S_inv: RMatrix
    blocks: tuple[tuple[Fraction, int], ...]

    @property
    def J(self) -> RMatrix:
        return jordan_matrix(self.blocks)

    def offsets(self) -> list[int]:
        out, pos = [], 0
        for _, size in self.blocks:
            out.append(pos)
            pos += size
        return out


def jordan_block(lam, size: int) -> RMatrix:
    lam = Fraction(lam)
    return RMatrix([[lam if i == j else (ONE if j == i + 1 else ZERO) for j in range(size)] for i in range(size)])


def jordan_matrix(blocks: Iterable[tuple[Fraction, int]]) -> RMatrix:
    mats = [jordan_block(lam, size) for lam, size in blocks]
    if not mats:
        return RMatrix([])
    return dsum_all(*mats)


class NotTriangularError(ValueError):
    pass


def jordan_decompose(a: RMatrix) -> JordanDecomposition:
    """Jordan decomposition of an upper-triangular rational matrix.

    Upper-triangularity guarantees every eigenvalue is a rational diagonal
    entry. Chains are grown top-down from the kernels of ``(A - lam I)^j``.
    """
    if not a.is_square:
        raise DimensionError(f"Jordan form of non-square {a.shape} matrix")
    if not a.is_upper_triangular():
        raise NotTriangularError("jordan_decompose needs an upper-triangular matrix")
    n = a.n_rows
    diag = [a[i, i] for i in range(n)]
    columns: list[tuple[Fraction, ...]] = []
    blocks: list[tuple[Fraction, int]] = []

    for lam in sorted(set(diag), reverse=True):
        mult = diag.count(lam)
        nil = a - RMatrix.identity(n).scale(lam)
        # kernels of nil^j until the generalised eigenspace is exhausted
        kernels: list[list[tuple[Fraction, ...]]] = [[]]
        power = RMatrix.identity(n)
        while len(kernels[-1]) < mult:
            power = mat_mul(power, nil)
            kernels.append(kernel(power))
        index = len(kernels) - 1

        chains: list[tuple[tuple[Fraction, ...], int]] = []  # (top vector, length)
        for level in range(index, 0, -1):
            span = _Span(n)
            for vec in kernels[level - 1]:
                span.add(vec)
            for top, length in chains:
                vec = top
                for _ in range(length - level):
                    vec = mat_vec(nil, vec)
                span.add(vec)
            for vec in kernels[level]:
                if span.add(vec):
                    chains.append((vec, level))

        chains.sort(key=lambda c: -c[1])  # stable: keeps discovery order on ties
        for top, length in chains:
            chain = [top]
            for _ in range(length - 1):
                chain.append(mat_vec(nil, chain[-1]))
            columns.extend(reversed(chain))
            blocks.append((lam, length))

    s_inv = RMatrix.from_columns(columns) if columns else RMatrix([])
    s = inverse(s_inv) if columns else RMatrix([])
    return JordanDecomposition(S=s, S_inv=s_inv, blocks=tuple(blocks))
