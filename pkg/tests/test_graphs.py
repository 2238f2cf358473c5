import json

import jsonschema
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import SmallGroup
from spreadlab import build_named, catalog
from spreadlab.genlib import spread_at_least
from spreadlab.graphs import (DichotomyViolation, conjugate_generation_check, dichotomy_check,
                              generating_graph, graph_json_dumps, parse_dimacs, prg_redundant_connected,
                              product_replacement_graph)
from spreadlab.report import load_schema

SMALL = ["Sym(3)", "ElemAbelian(2,2)", "Dihedral(4)", "Alt(4)", "Cyclic(6)", "Sym(4)", "Alt(5)",
         "Frobenius(7,3)"]


@pytest.mark.parametrize("expr", SMALL)
def test_adjacency_matches_brute_force(expr):
    G = build_named(expr).group
    graph = generating_graph(G)
    S = SmallGroup(G.generators)
    gen = S.generation_matrix()
    pos = {S.index[G.table.perm(int(v)).images]: i for i, v in enumerate(graph.vertices)}
    assert graph.n == G.order - 1
    for a, i in pos.items():
        for b, j in pos.items():
            if i != j:
                assert graph.adjacent(i, j) == bool(gen[a, b])
        assert not graph.adjacent(i, i)


@pytest.mark.parametrize("expr", SMALL)
def test_graph_is_simple_and_symmetric(expr):
    graph = generating_graph(build_named(expr).group)
    dense = np.array([graph.row(i) for i in range(graph.n)], dtype=bool)
    assert np.array_equal(dense, dense.T)
    assert not dense.diagonal().any()
    assert graph.edge_count() == int(dense.sum()) // 2 == len(list(graph.edges()))
    assert graph.degrees().tolist() == dense.sum(axis=1).tolist()


def test_isolated_iff_spread_zero():
    for spec in catalog(max_order=2000):
        G = spec.group
        if G.order < 2:
            continue
        iso = bool(generating_graph(G).isolated())
        assert iso == (not spread_at_least(G, 1)[0]), spec.expression


def test_dichotomy_branches():
    assert dichotomy_check(build_named("Sym(4)").group).branch == "isolated"
    assert dichotomy_check(build_named("Dihedral(4)").group).branch == "isolated"
    res = dichotomy_check(build_named("Alt(5)").group)
    assert res.branch == "diameter-at-most-2" and res.evidence["diameter"] <= 2


def test_dichotomy_violation_carries_pair():
    exc = DichotomyViolation(("(1,2)", "(3,4)"), 3)
    assert exc.pair == ("(1,2)", "(3,4)") and "distance 3" in str(exc)


def test_cyclic_two_has_no_isolated_vertex():
    # the generator of C2 generates alone, so it is not isolated despite having no neighbours
    graph = generating_graph(build_named("Cyclic(2)").group)
    assert graph.n == 1 and graph.edge_count() == 0
    assert graph.isolated() == []
    assert dichotomy_check(build_named("Cyclic(2)").group).branch == "diameter-at-most-2"


@pytest.mark.parametrize("expr", ["Sym(3)", "Alt(4)", "Sym(4)"])
def test_dimacs_round_trip(expr):
    graph = generating_graph(build_named(expr).group)
    text = graph.to_dimacs(expr)
    labels, edges = parse_dimacs(text)
    assert labels == [graph.label(i) for i in range(graph.n)]
    assert edges == list(graph.edges())
    header = [ln for ln in text.splitlines() if ln.startswith("p ")]
    assert header == [f"p edge {graph.n} {graph.edge_count()}"]
    assert all(1 <= int(t) <= graph.n for ln in text.splitlines() if ln.startswith("e ") for t in ln.split()[1:])


def test_dimacs_needs_problem_line():
    with pytest.raises(ValueError):
        parse_dimacs("c nothing here\ne 1 2\n")


@pytest.mark.parametrize("expr", ["Sym(3)", "Sym(4)", "Alt(5)"])
def test_json_export_validates(expr):
    graph = generating_graph(build_named(expr).group)
    body = json.loads(graph_json_dumps(graph, expr))
    jsonschema.validate(body, load_schema("generating-graph"))
    assert body["group"] == expr
    assert len(body["vertices"]) == graph.n
    assert all(i < j for i, j in body["edges"])
    if body["isolated"]:
        assert body["diameter"] is None


def test_prg_small_groups():
    for expr in ("ElemAbelian(2,2)", "Sym(3)", "Alt(4)"):
        assert prg_redundant_connected(build_named(expr).group, 3)
    with pytest.raises(ValueError):
        prg_redundant_connected(build_named("Sym(3)").group, 2)


def test_prg_tuples_all_generate():
    G = build_named("Sym(3)").group
    prg = product_replacement_graph(G, 2)
    S = SmallGroup(G.generators)
    brute = sum(1 for a in range(6) for b in range(6) if S.closure_size([a, b]) == 6)
    assert len(prg.tuples) == brute
    # pairs are never redundant in a non-cyclic group
    assert not prg.redundant.any()


@pytest.mark.parametrize("expr", ["Alt(4)", "Alt(5)", "Frobenius(7,3)", "Sym(5)", "ElemAbelian(3,2)",
                                  "Dihedral(5)"])
def test_conjugate_generation(expr):
    res = conjugate_generation_check(build_named(expr).group)
    assert res.holds
    if expr == "ElemAbelian(3,2)":
        assert res.conjugate_pair is None and res.elementary_abelian_pp
    else:
        assert res.conjugate_pair is not None


def test_conjugate_pair_generates():
    from spreadlab import parse_perm
    from spreadlab.genlib import generates

    G = build_named("Alt(5)").group
    res = conjugate_generation_check(G)
    _, x, y = res.conjugate_pair
    assert generates(G, parse_perm(x, 5), parse_perm(y, 5))


@given(st.sampled_from(SMALL), st.data())
@settings(max_examples=30)
def test_bfs_distances_are_consistent(expr, data):
    graph = generating_graph(build_named(expr).group)
    s = data.draw(st.integers(0, graph.n - 1))
    dist = graph.bfs(s)
    assert dist[s] == 0
    for i, j in graph.edges():
        if dist[i] >= 0 and dist[j] >= 0:
            assert abs(int(dist[i]) - int(dist[j])) <= 1
        else:
            assert dist[i] < 0 and dist[j] < 0
