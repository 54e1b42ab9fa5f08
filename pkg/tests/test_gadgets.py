import itertools
from dataclasses import replace
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from naive import pfa_accept
from pfadecide.ambiguity import AmbiguityClass, classify
from pfadecide.gadgets import (
    PAD_G9,
    PAD_H9,
    UNIPOTENT,
    GadgetMismatch,
    QuadInstance,
    RegexUnionSpec,
    Variant,
    _nonstrict_parts,
    _reach_parts,
    pad_column,
    quad_gadget,
    quad_nonstrict_gadget,
    quad_reach_gadget,
    quad_strict_gadget,
    regex_union_gadget,
    verify_bundle,
)
from pfadecide.linalg import RMatrix, dsum, kron, mat_mul, mat_pow
from pfadecide.oracle import sweep_unary
from pfadecide.pfa import accept_prob


def test_instance_validation():
    q = QuadInstance(1, 2, 3)
    assert q.z == (1 + 2 + 3) ** 2
    for bad in [(0, 1, 1), (1, 0, 1), (1, 1, 0)]:
        with pytest.raises(ValueError):
            QuadInstance(*bad)


def test_reach_padding_matches_listed_columns():
    h_raw, g_raw, _ = _reach_parts()
    assert pad_column(h_raw, 4) == list(PAD_H9)
    assert pad_column(g_raw, 4) == list(PAD_G9)


def test_nonstrict_block_sizes():
    h_plus, g_plus, h_minus, g_minus = _nonstrict_parts()
    assert h_plus.shape == g_plus.shape == (29, 29)
    assert h_minus.shape == g_minus.shape == (6, 6)
    assert max(sum(r) for r in h_plus.rows) == 16


def test_reach_examples():
    g = quad_reach_gadget(QuadInstance(1, 1, 1))
    assert g.lam == F(1, 3)
    assert accept_prob(g.pfa, "h") == F(1, 3)
    assert accept_prob(g.pfa, "") == 0
    assert pfa_accept(g.pfa, [0, 1, 1]) == F(11, 32)
    g = quad_reach_gadget(QuadInstance(1, 2, 5))
    assert accept_prob(g.pfa, "h g^2") == g.lam == F(5, 8)


def test_nonstrict_examples():
    g = quad_nonstrict_gadget(QuadInstance(1, 1, 1))
    assert g.lam == F(4, 9)
    assert pfa_accept(g.pfa, [0]) == F(4, 9)
    assert pfa_accept(g.pfa, []) == F(5, 9)


def test_strict_examples():
    g = quad_strict_gadget(QuadInstance(1, 1, 1))
    assert g.lam == F(13, 18)
    # h alone solves x^2 + y = 1
    p = pfa_accept(g.pfa, [0])
    assert p == F(1, 2) * F(4, 9) + F(1, 2) * (1 - F(1, 144**2)) and p < g.lam
    assert pfa_accept(g.pfa, []) == 1
    assert pfa_accept(g.pfa, [0, 0]) > g.lam


def test_mixed_product_structure():
    A = UNIPOTENT
    h_raw, g_raw, _ = _reach_parts()
    for x in range(5):
        for y in range(5):
            lhs = mat_mul(mat_pow(h_raw, x), mat_pow(g_raw, y))
            rhs = dsum(kron(mat_pow(A, x), mat_pow(A, x)), mat_pow(A, y))
            assert lhs == rhs


@pytest.mark.parametrize("variant", list(Variant))
@pytest.mark.parametrize("abc", [(1, 1, 1), (1, 2, 5), (2, 2, 1), (3, 5, 7)])
def test_bundles_verify(variant, abc):
    g = quad_gadget(QuadInstance(*abc), variant)
    rep = verify_bundle(g, 5, strict=True)
    assert rep.passed
    assert g.pfa.n == variant.size


def test_verify_bundle_names_failure():
    g = quad_reach_gadget(QuadInstance(1, 1, 1))
    broken = replace(g, predicted=lambda x, y: g.predicted(x, y) if (x, y) != (2, 3) else F(0))
    rep = verify_bundle(broken, 4)
    assert not rep.passed and any("(2, 3)" in line for line in rep.lines())
    with pytest.raises(GadgetMismatch, match="h\\^2 g\\^3"):
        verify_bundle(broken, 4, strict=True)


def _counts(word):
    return word.count(0), word.count(1)


@pytest.mark.parametrize("abc", [(1, 1, 1), (1, 2, 5), (2, 2, 1), (2, 1, 6)])
def test_strict_separation_on_all_words(abc):
    """``P(w) < lambda`` exactly when the letter counts of ``w`` solve the equation."""
    q = QuadInstance(*abc)
    g = quad_strict_gadget(q)
    for n in range(7):
        for word in itertools.product((0, 1), repeat=n):
            x, y = _counts(word)
            p = accept_prob(g.pfa, word)
            assert p == g.predicted(x, y)
            assert (p < g.lam) == q.solves(x, y), (word, p)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 9), st.integers(1, 9), st.integers(1, 30))
def test_nonstrict_never_below_cutpoint(a, b, c):
    g = quad_nonstrict_gadget(QuadInstance(a, b, c))
    for x in range(4):
        for y in range(4):
            p = accept_prob(g.pfa, [0] * x + [1] * y)
            assert p >= g.lam and (p == g.lam) == g.instance.solves(x, y)


def test_all_variants_commute_and_are_upper_triangular():
    for variant in Variant:
        H, G = quad_gadget(QuadInstance(2, 3, 4), variant).pfa.matrices
        assert mat_mul(H, G) == mat_mul(G, H)
        assert H.is_upper_triangular() and G.is_upper_triangular()


# ---------------------------------------------------------------------------
# lollipop unions


def test_regex_pairs_parsing():
    spec = RegexUnionSpec.parse("1,2; 2,3")
    assert spec.pairs == ((1, 2), (2, 3)) and spec.n_states == 4 + 6
    for bad in ([], [(0, 0)], [(-1, 2)]):
        with pytest.raises(ValueError):
            RegexUnionSpec(tuple(bad))


def test_single_self_loop_component():
    p = regex_union_gadget([(0, 1)])
    values = sweep_unary(p, 16).values
    assert values[0] == 0 and all(v > 0 for v in values[1:])


def test_two_progressions():
    spec = RegexUnionSpec(((1, 2), (2, 3)))
    p = regex_union_gadget(spec)
    values = sweep_unary(p, 40).values
    assert values == [spec.acceptance(k) for k in range(41)]
    zeros = [k for k, v in enumerate(values) if v == 0]
    assert zeros[:5] == [0, 1, 5, 7, 11]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 5), st.integers(1, 6)), min_size=1, max_size=4))
def test_regex_union_structure(pairs):
    spec = RegexUnionSpec(tuple(pairs))
    p = regex_union_gadget(spec)
    m = p.matrices[0]
    assert m.is_zero_one() and m.is_row_stochastic()
    assert classify(p).kind is AmbiguityClass.FINITE
    assert sweep_unary(p, 30).values == [spec.acceptance(k) for k in range(31)]
