import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pfadecide.gadgets import QuadInstance, quad_reach_gadget
from pfadecide.linalg import RMatrix
from pfadecide.oracle import oracle_decide, sweep_grid, sweep_unary
from pfadecide.pfa import Pfa, PfaError, Query, accept_prob
from pfadecide.random_instances import random_cycle_dag_pfa

H = F(1, 2)
HALVING = Pfa(("a",), (1, 0), (RMatrix([[H, H], [0, 1]]),), (0, 1))


def test_identity_is_constant():
    p = Pfa(("a",), (F(1, 3), F(2, 3)), (RMatrix.identity(2),), (1, 0))
    assert set(sweep_unary(p, 10).values) == {F(1, 3)}


def test_halving_sweep():
    res = sweep_unary(HALVING, 3)
    assert res.values == [0, H, F(3, 4), F(7, 8)]
    assert res.minimum == 0 and res.maximum == F(7, 8)
    assert res.to_csv() == "0,0\n1,1/2\n2,3/4\n3,7/8\n"


def test_cycle_sweep():
    rows = [[0, 1, 0], [0, 0, 1], [1, 0, 0]]
    p = Pfa(("a",), (1, 0, 0), (RMatrix(rows),), (1, 0, 0))
    assert sweep_unary(p, 6).values == [1, 0, 0, 1, 0, 0, 1]


def test_oracle_examples():
    r = oracle_decide(HALVING, Query(F(3, 4)), 8)
    assert r.found and r.length == 2 and r.probability == F(3, 4)
    assert not oracle_decide(HALVING, Query(F(1, 3)), 64).found
    r = oracle_decide(quad_reach_gadget(QuadInstance(1, 1, 1)).pfa, Query(0, "empty-ge"), 5)
    assert r.found and r.word == ()


def test_oracle_binary_search_finds_shortest():
    g = quad_reach_gadget(QuadInstance(1, 2, 5)).pfa
    r = oracle_decide(g, Query(F(5, 8)), 4)
    assert r.found and r.length == 3 and sorted(r.word) == [0, 1, 1]


def test_grid_refuses_non_commuting():
    a = RMatrix([[H, H], [0, 1]])
    b = RMatrix([[0, 1], [1, 0]])
    with pytest.raises(PfaError):
        sweep_grid(Pfa(("h", "g"), (1, 0), (a, b), (0, 1)), 2, 2)


def test_grid_matches_words():
    g = quad_reach_gadget(QuadInstance(2, 1, 3)).pfa
    for (x, y), p in sweep_grid(g, 4, 4).entries:
        assert p == accept_prob(g, f"h^{x} g^{y}")


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32))
def test_sweep_agrees_with_accept(seed):
    p = random_cycle_dag_pfa(random.Random(seed))
    for k, v in sweep_unary(p, 40).entries:
        assert v == accept_prob(p, k)
