import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from naive import pfa_accept
from pfadecide.fileformat import PfaFormatError, dumps, loads, read_pfa, write_pfa
from pfadecide.gadgets import QuadInstance, quad_nonstrict_gadget, quad_reach_gadget, quad_strict_gadget
from pfadecide.linalg import RMatrix, dot, mat_pow, vec_mat
from pfadecide.pfa import Mode, Pfa, PfaError, Query, accept_prob, embed_nfa, parse_word, trim, useful_states
from pfadecide.random_instances import random_cycle_dag_pfa, random_functional_pfa

H = F(1, 2)
HALVING = Pfa(("a",), (1, 0), (RMatrix([[H, H], [0, 1]]),), (0, 1))


def test_empty_word_is_dot_product():
    p = Pfa(("a", "b"), (F(1, 3), F(2, 3)), (RMatrix.identity(2), RMatrix.identity(2)), (0, 1))
    assert accept_prob(p, "") == F(2, 3)
    assert accept_prob(p, ()) == F(2, 3)


def test_gadget_values():
    g = quad_reach_gadget(QuadInstance(1, 1, 1)).pfa
    assert accept_prob(g, "h^1 g^0") == F(1, 3)
    assert accept_prob(g, "h^1 g^2") == F(11, 32)
    assert accept_prob(g, "hgg") == F(11, 32)
    assert accept_prob(g, ["h", "g", "g"]) == F(11, 32)


def test_unknown_letter():
    with pytest.raises(PfaError):
        accept_prob(HALVING, "b")


def test_validation_names_row():
    with pytest.raises(PfaError, match="row 2"):
        Pfa(("a",), (1, 0), (RMatrix([[1, 0], [F(1, 2), F(2, 5)]]),), (0, 1))
    with pytest.raises(PfaError):
        Pfa(("a",), (F(1, 2), F(1, 3)), (RMatrix.identity(2),), (0, 1))
    with pytest.raises(PfaError):
        Pfa(("a",), (1, 0), (RMatrix.identity(2),), (0, 2))


def test_parse_word_forms():
    assert parse_word("h^3 g^2", ["h", "g"]) == ((0, 3), (1, 2))
    assert parse_word("hhg", ["h", "g"]) == ((0, 2), (1, 1))
    assert parse_word("ε", ["h", "g"]) == ()
    assert parse_word("a^" + str(10**30), ["a"]) == ((0, 10**30),)


def test_huge_unary_word():
    assert accept_prob(HALVING, "a^200") == 1 - F(1, 2**200)
    assert accept_prob(HALVING, 200) == 1 - F(1, 2**200)


def test_query_bounds():
    with pytest.raises(PfaError):
        Query(F(3, 2))
    assert Query(F(1, 2), "empty-gt").holds(F(3, 4))
    assert str(Query(F(1, 2), Mode.EMPTY_GE)) == "P(w) >= 1/2"


def test_embed_support():
    nfa = embed_nfa(Pfa(("a",), (1, 0), (RMatrix.identity(2),), (0, 1)))
    assert nfa.edges[0] == ((0,), (1,))
    nfa = embed_nfa(HALVING)
    assert nfa.edges[0] == ((0, 1), (1,))
    assert nfa.initials == {0} and nfa.finals == {1}


def test_gadget_support_upper_triangular():
    nfa = embed_nfa(quad_reach_gadget(QuadInstance(1, 1, 1)).pfa)
    assert all(q >= p for letter in nfa.edges for p, succ in enumerate(letter) for q in succ)


def test_useful_states():
    full = Pfa(("a",), (F(1, 2), F(1, 2)), (RMatrix([[H, H], [H, H]]),), (1, 1))
    assert useful_states(embed_nfa(full)) == {0, 1}
    sink = Pfa(("a",), (1, 0), (RMatrix([[H, H], [0, 1]]),), (1, 0))
    assert useful_states(embed_nfa(sink)) == {0}


def test_strict_gadget_sink_not_useful():
    g = quad_strict_gadget(QuadInstance(1, 1, 1))
    useful = useful_states(embed_nfa(g.pfa))
    assert g.sink not in useful
    assert g.pfa.matrix("h")[g.sink, g.sink] == 1 and g.pfa.final[g.sink] == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32))
def test_trim_preserves_probabilities(seed):
    p = random_cycle_dag_pfa(random.Random(seed))
    t, _ = trim(p)
    assert t.n <= p.n + 1
    for k in range(12):
        assert accept_prob(t, k) == accept_prob(p, k)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.integers(0, 64))
def test_unary_grouping_agrees(seed, k):
    p = random_cycle_dag_pfa(random.Random(seed))
    direct = dot(vec_mat(p.initial, mat_pow(p.matrices[0], k)), p.final_vector())
    assert accept_prob(p, k) == direct
    assert 0 <= direct <= 1


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.integers(1, 5), st.lists(st.sampled_from("hg"), max_size=6), st.randoms())
def test_commuting_gadgets_ignore_letter_order(a, b, c, word, rnd):
    for make in (quad_reach_gadget, quad_nonstrict_gadget):
        g = make(QuadInstance(a, b, c)).pfa
        shuffled = list(word)
        rnd.shuffle(shuffled)
        assert accept_prob(g, word) == accept_prob(g, shuffled)


def test_accept_matches_naive():
    g = quad_nonstrict_gadget(QuadInstance(2, 1, 3)).pfa
    for word in ([], [0], [1, 0, 1], [0, 0, 1, 1, 1]):
        assert accept_prob(g, word) == pfa_accept(g, word)


def test_zero_one_embedding_is_functional():
    p = random_functional_pfa(random.Random(3), 7)
    assert all(len(s) == 1 for s in embed_nfa(p).edges[0])


# ---------------------------------------------------------------------------
# file format

EXAMPLE = """pfa v1
# halving chain
states 2
alphabet a
initial 1 0
final   0 1
matrix a
3/6 1/2   # reduced on read
0   1
"""


def test_read_canonicalizes():
    p = loads(EXAMPLE)
    assert p.matrices[0][0, 0] == F(1, 2)
    assert "1/2 1/2" in dumps(p)


@pytest.mark.parametrize("make", [quad_reach_gadget, quad_nonstrict_gadget, quad_strict_gadget])
def test_round_trip_gadgets(make, tmp_path):
    g = make(QuadInstance(2, 3, 5)).pfa
    path = tmp_path / "g.pfa"
    write_pfa(g, path)
    assert read_pfa(path) == g


def test_row_sum_error_names_row():
    bad = EXAMPLE.replace("0   1", "0   9/10")
    with pytest.raises(PfaFormatError) as info:
        loads(bad)
    assert "row 2" in str(info.value) and "9/10" in str(info.value)
    assert info.value.line == 9


@pytest.mark.parametrize(
    "mutation, needle",
    [
        (("3/6 1/2", "0.5 1/2"), "line 8"),
        (("3/6 1/2", "1/2"), "expected 2"),
        (("pfa v1", "pfa v2"), "header"),
        (("initial 1 0", "initial 1 0 0"), "expected 2"),
        (("final   0 1", "final   0 2"), "0 or 1"),
    ],
)
def test_malformed_inputs(mutation, needle):
    with pytest.raises(PfaFormatError, match=needle):
        loads(EXAMPLE.replace(*mutation))
