import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spreadlab import BoundExceeded, Permutation, PermGroup, build_named, catalog
from spreadlab.group import TABLE_ORDER_LIMIT


def closure(gens):
    """Element images reachable from the identity by right multiplication."""
    ident = tuple(range(gens[0].degree))
    seen, queue = {ident}, [ident]
    for a in queue:
        for g in gens:
            b = tuple(g.images[i] for i in a)
            if b not in seen:
                seen.add(b)
                queue.append(b)
    return seen


@st.composite
def generator_sets(draw):
    n = draw(st.integers(2, 7))
    k = draw(st.integers(1, 3))
    return [Permutation.from_array(draw(st.permutations(list(range(n))))) for _ in range(k)]


@given(generator_sets())
@settings(max_examples=40)
def test_chain_order_matches_closure(gens):
    G = PermGroup(gens)
    assert G.order == len(closure(gens))


@given(generator_sets(), st.randoms(use_true_random=False))
@settings(max_examples=30)
def test_membership(gens, rnd):
    G = PermGroup(gens)
    for _ in range(5):
        assert G.contains(G.random_element(rnd))
    elements = closure(gens)
    n = gens[0].degree
    x = Permutation.from_array(rnd.sample(range(n), n))
    assert G.contains(x) == (x.images in elements)


def test_catalog_orders_are_checked():
    expected = {"Cyclic(12)": 12, "Alt(5)": 60, "PSL(2,7)": 168, "M10": 720, "PGammaL(2,8)": 1512,
                "PSU(3,3)": 6048, "Wr(Alt(5),2)": 7200, "Sz(8)": 29120, "Sz(8):3": 87360,
                "Gk(Alt(6),(1,2),2)": 518400}
    for expr, order in expected.items():
        assert build_named(expr).order == order


def test_element_table_round_trip():
    G = build_named("Sym(4)").group
    T = G.table
    assert len(T) == 24
    for i in range(len(T)):
        assert T.index(T.perm(i)) == i
    rng = random.Random(1)
    for _ in range(50):
        a, b = rng.randrange(24), rng.randrange(24)
        assert T.perm(T.mul(a, b)) == T.perm(a) * T.perm(b)
    orders = T.orders
    assert sorted(np.bincount(orders)[1:].tolist()) == [1, 6, 8, 9]


def test_element_table_limit():
    G = build_named("Sym(12)").group
    assert G.order > TABLE_ORDER_LIMIT
    with pytest.raises(BoundExceeded):
        G.element_arrays()


def test_generator_validation():
    with pytest.raises(ValueError):
        PermGroup([Permutation.identity(3), Permutation.identity(4)])
    with pytest.raises(ValueError):
        PermGroup([])
    assert PermGroup([], degree=3).order == 1


def test_catalog_sorted():
    orders = [s.order for s in catalog()]
    assert orders == sorted(orders)
    assert len(orders) == 30
