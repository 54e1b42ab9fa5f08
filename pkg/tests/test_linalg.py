from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from naive import matmul, power
from pfadecide.linalg import (
    DimensionError,
    NotTriangularError,
    RMatrix,
    SingularMatrixError,
    dsum,
    inverse,
    jordan_block,
    jordan_decompose,
    kernel,
    kron,
    mat_mul,
    mat_pow,
    parse_rational,
    format_rational,
    permutation_matrix,
)

A = RMatrix([[1, 1], [0, 1]])

small = st.fractions(min_value=-3, max_value=3, max_denominator=5)


def square(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n).map(RMatrix)


@st.composite
def stochastic(draw, n):
    rows = []
    for _ in range(n):
        w = draw(st.lists(st.integers(0, 4), min_size=n, max_size=n).filter(any))
        rows.append([F(x, sum(w)) for x in w])
    return RMatrix(rows)


@st.composite
def upper_stochastic(draw, n):
    rows = []
    for i in range(n):
        w = [0] * i + draw(st.lists(st.integers(0, 4), min_size=n - i, max_size=n - i).filter(any))
        rows.append([F(x, sum(w)) for x in w])
    return RMatrix(rows)


def test_rationals_parse_exactly():
    assert parse_rational("3/6") == F(1, 2)
    assert parse_rational("-4") == -4
    assert format_rational(F(6, 4)) == "3/2"
    for bad in ("0.5", "1e3", "1/0", "", "a/b"):
        with pytest.raises((ValueError, ZeroDivisionError)):
            parse_rational(bad)


def test_identity_product_and_unipotent():
    m = RMatrix([[1, 2, 3], [F(1, 2), 0, 7], [0, 0, 1]])
    assert mat_mul(RMatrix.identity(3), m) == m
    assert mat_mul(A, A) == RMatrix([[1, 2], [0, 1]])


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        mat_mul(RMatrix([[1, 2]]), RMatrix([[1, 2]]))


def test_power_examples():
    assert mat_pow(A, 3) == RMatrix([[1, 3], [0, 1]])
    assert mat_pow(A, 0) == RMatrix.identity(2)
    assert mat_pow(A, 2**70) == RMatrix([[1, 2**70], [0, 1]])
    p = RMatrix([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    for k in (0, 1, 5, 10**20 + 1):
        q = mat_pow(p, k)
        assert q.is_zero_one() and q.is_row_stochastic()


def test_kron_examples():
    assert kron(RMatrix.identity(2), RMatrix.identity(2)) == RMatrix.identity(4)
    for k in range(8):
        assert mat_pow(kron(A, A), k)[0, 3] == k * k


@settings(max_examples=40, deadline=None)
@given(square(2), square(2), square(2), square(2))
def test_mixed_product(a, b, c, d):
    assert mat_mul(kron(a, b), kron(c, d)) == kron(mat_mul(a, c), mat_mul(b, d))
    assert mat_mul(dsum(a, b), dsum(c, d)) == dsum(mat_mul(a, c), mat_mul(b, d))


@settings(max_examples=25, deadline=None)
@given(square(3), square(2), square(2))
def test_associativity(a, b, c):
    assert kron(kron(a, b), c) == kron(a, kron(b, c))
    assert dsum(dsum(a, b), c) == dsum(a, dsum(b, c))


@settings(max_examples=30, deadline=None)
@given(stochastic(2), stochastic(3))
def test_stochastic_closure(a, b):
    assert kron(a, b).is_row_stochastic()
    assert dsum(a, b).is_row_stochastic()
    assert mat_mul(b, b).is_row_stochastic()


@settings(max_examples=30, deadline=None)
@given(upper_stochastic(2), upper_stochastic(3))
def test_upper_triangular_closure(a, b):
    assert kron(a, b).is_upper_triangular()
    assert dsum(a, b).is_upper_triangular()


@settings(max_examples=30, deadline=None)
@given(square(3), st.integers(0, 20), st.integers(0, 20))
def test_power_splits(a, m, n):
    assert mat_pow(a, m + n) == mat_mul(mat_pow(a, m), mat_pow(a, n))


@settings(max_examples=20, deadline=None)
@given(square(3), st.integers(0, 12))
def test_power_matches_naive(a, k):
    assert [list(r) for r in mat_pow(a, k).rows] == power([list(r) for r in a.rows], k)


def test_product_matches_naive():
    a = RMatrix([[F(1, 3), 2, 0], [1, F(-1, 2), 4]])
    b = RMatrix([[1, 0], [F(2, 7), 1], [3, F(1, 9)]])
    assert [list(r) for r in mat_mul(a, b).rows] == matmul([list(r) for r in a.rows], [list(r) for r in b.rows])


def test_inverse_and_kernel():
    m = RMatrix([[2, 1], [1, 1]])
    assert mat_mul(m, inverse(m)) == RMatrix.identity(2)
    with pytest.raises(SingularMatrixError):
        inverse(RMatrix([[1, 2], [2, 4]]))
    ker = kernel(RMatrix([[1, 2], [2, 4]]))
    assert len(ker) == 1 and ker[0][0] + 2 * ker[0][1] == 0


def test_permutation_conjugation():
    a = RMatrix([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    order = (2, 0, 1)
    p = permutation_matrix(order)
    b = mat_mul(mat_mul(p, a), inverse(p))
    assert all(b[i, j] == a[order[i], order[j]] for i in range(3) for j in range(3))


def _check_jordan(a):
    jd = jordan_decompose(a)
    n = a.n_rows
    assert mat_mul(jd.S, jd.S_inv) == RMatrix.identity(n)
    assert mat_mul(mat_mul(jd.S_inv, jd.J), jd.S) == a
    lams = [lam for lam, _ in jd.blocks]
    assert lams == sorted(lams, reverse=True)
    diag = {a[i, i] for i in range(n)}
    assert set(lams) <= diag
    return jd


def test_jordan_examples():
    jd = _check_jordan(RMatrix.diag([1, F(1, 2)]))
    assert jd.blocks == ((1, 1), (F(1, 2), 1)) and jd.S == RMatrix.identity(2)
    jd = _check_jordan(RMatrix([[F(1, 2), F(1, 2)], [0, 1]]))
    assert jd.blocks == ((1, 1), (F(1, 2), 1))
    jd = _check_jordan(jordan_block(F(1, 3), 2))
    assert jd.blocks == ((F(1, 3), 2),) and jd.S == RMatrix.identity(2)


def test_jordan_rejects_lower_triangular():
    with pytest.raises(NotTriangularError):
        jordan_decompose(RMatrix([[1, 0], [1, 1]]))


def test_jordan_mixed_block_sizes():
    a = RMatrix([[F(1, 2), 1, 0, 0], [0, F(1, 2), 1, 0], [0, 0, F(1, 2), 0], [0, 0, 0, F(1, 2)]])
    jd = _check_jordan(a)
    assert jd.blocks == ((F(1, 2), 3), (F(1, 2), 1))


@settings(max_examples=40, deadline=None)
@given(upper_stochastic(4))
def test_jordan_stochastic_upper(a):
    jd = _check_jordan(a)
    # eigenvalue 1 never carries a nontrivial block for a stochastic matrix
    assert all(size == 1 for lam, size in jd.blocks if lam == 1)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.sampled_from([0, F(1, 2), F(1, 3), 1]), min_size=1, max_size=4), st.data())
def test_jordan_arbitrary_upper(diag, data):
    n = len(diag)
    rows = [[diag[i] if i == j else (data.draw(st.sampled_from([0, 1, F(1, 2)])) if j > i else 0)
             for j in range(n)] for i in range(n)]
    _check_jordan(RMatrix(rows))
