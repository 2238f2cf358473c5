import random
from fractions import Fraction

import numpy as np
import pytest

from oracles import SmallGroup
from spreadlab import build_named, class_by_label, conjugacy_classes, parse_perm
from spreadlab.genlib import exact_P_table
from spreadlab.overgroups import (certify_uspread, conjugate_subgroups, fpr, fpr_cosets, fpr_intersection,
                                  fpr_table, is_maximal, maximal_overgroups, prob_bound)


def brute_maximal_overgroups(G, x):
    """Maximal subgroups containing x, from all 2-generated subgroups (enough for these groups)."""
    S = SmallGroup(G.generators)
    xi = S.index[x.images]
    subs = set()
    for a in range(S.order):
        for b in range(a, S.order):
            members = _closure(S, [a, b])
            if len(members) < S.order:
                subs.add(members)
    maxes = [H for H in subs if not any(H < K for K in subs)]
    return sorted(len(H) for H in maxes if xi in H)


def _closure(S, gens):
    seen = {S.identity}
    frontier = [S.identity]
    while frontier:
        new = []
        for a in frontier:
            for g in gens:
                b = int(S.table[a, g])
                if b not in seen:
                    seen.add(b)
                    new.append(b)
        frontier = new
    return frozenset(seen)


@pytest.mark.parametrize("expr", ["Sym(3)", "Alt(4)", "Sym(4)", "Dihedral(5)", "Alt(5)"])
def test_maximal_overgroups_match_brute_force(expr):
    G = build_named(expr).group
    for c in conjugacy_classes(G):
        ovs = maximal_overgroups(G, c.representative)
        assert ovs.orders() == brute_maximal_overgroups(G, c.representative), c.label
        for H in ovs.members:
            assert H.contains(c.representative)
            assert is_maximal(G, H)


def test_overgroups_of_a_three_cycle():
    G = build_named("Alt(5)").group
    ovs = maximal_overgroups(G, parse_perm("(1,2,3)", 5))
    # two point stabilizers and one copy of Sym(3)
    assert ovs.orders() == [6, 12, 12]
    assert sorted(len(c) for c in ovs.classes) == [1, 2]


def test_generator_has_no_overgroups():
    G = build_named("Cyclic(12)").group
    assert len(maximal_overgroups(G, G.generators[0])) == 0


def test_conjugate_subgroups_count():
    G = build_named("Sym(5)").group
    ovs = maximal_overgroups(G, parse_perm("(1,2,3,4)", 5))
    for H in ovs.members:
        conj = conjugate_subgroups(G, H)
        assert G.order % len(conj) == 0
        # a maximal subgroup is self-normalizing unless normal
        assert len(conj) in (1, G.order // H.order)


@pytest.mark.parametrize("expr", ["Sym(4)", "Alt(5)", "PSL(2,7)", "Sym(6)"])
def test_fpr_two_ways(expr):
    G = build_named(expr).group
    subs = []
    for c in conjugacy_classes(G):
        subs.extend(maximal_overgroups(G, c.representative).members)
    for H in subs:
        for C in conjugacy_classes(G):
            assert fpr_intersection(G, C, H) == fpr_cosets(G, C, H)


def test_fpr_of_point_stabilizer_is_fixed_point_proportion():
    G = build_named("Sym(5)").group
    H = maximal_overgroups(G, parse_perm("(1,2,3,4)", 5))
    stab = [h for h in H.members if h.order == 24][0]
    for C in conjugacy_classes(G):
        fixed = 5 - len(C.representative.support())
        assert fpr(G, C, stab) == Fraction(fixed, 5)


def test_fpr_table_shape():
    G = build_named("Alt(5)").group
    ovs = maximal_overgroups(G, parse_perm("(1,2,3,4,5)", 5))
    t = fpr_table(G, ovs.members)
    assert t.degrees == [G.order // h.order for h in ovs.members]
    assert len(t.values) == len(ovs.members)
    assert all(row[0] == 1 for row in t.values)


@pytest.mark.parametrize("expr", ["Sym(4)", "Alt(5)", "Sym(5)", "PSL(2,7)", "Alt(6)", "M10"])
def test_probability_sandwich(expr):
    G = build_named(expr).group
    for c in conjugacy_classes(G):
        if c.order == 1:
            continue
        exact = exact_P_table(G, c.representative)
        bound = prob_bound(G, c.representative)
        for lab, v in exact.items():
            assert v <= bound[lab], (c.label, lab)


def test_certificates():
    G = build_named("Alt(5)").group
    C = class_by_label(G, "5A")
    cert = certify_uspread(G, C, 2, mode="exact-P")
    assert cert.certified and cert.margin > 0
    cert = certify_uspread(G, C, 3, mode="exact-P")
    assert not cert.certified
    fb = certify_uspread(G, C, 2, mode="fpr-bound")
    assert fb.max_value >= cert.max_value
    with pytest.raises(ValueError):
        certify_uspread(G, C, 2, mode="nope")
    with pytest.raises(ValueError):
        certify_uspread(G, C, 0)


def test_sampled_fpr_pairs_agree():
    rng = random.Random(7)
    G = build_named("PGL(2,7)").group
    classes = conjugacy_classes(G)
    subs = [H for c in classes for H in maximal_overgroups(G, c.representative).members]
    for _ in range(200):
        H = subs[rng.randrange(len(subs))]
        C = classes[rng.randrange(len(classes))]
        assert fpr_intersection(G, C, H) == fpr_cosets(G, C, H)
