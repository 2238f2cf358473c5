import numpy as np
import pytest

from oracles import SmallGroup
from spreadlab import build_named, class_by_label, conjugacy_classes
from spreadlab.classes import (centralizer_order, class_of, every_proper_quotient_cyclic, is_cyclic,
                               minimal_normal_subgroups, normal_subgroup_list)

SMALL = ["ElemAbelian(2,2)", "Sym(3)", "Dihedral(4)", "Alt(4)", "Cyclic(12)", "Frobenius(7,3)", "Sym(4)",
         "Alt(5)", "Sym(5)", "PSL(2,7)", "Alt(6)"]


@pytest.mark.parametrize("expr", SMALL)
def test_classes_match_brute_force(expr):
    G = build_named(expr).group
    oracle = SmallGroup(G.generators)
    ours = sorted(sorted(tuple(G.table.perm(int(i)).images) for i in c.members) for c in conjugacy_classes(G))
    theirs = sorted(sorted(oracle.elements[i] for i in cls) for cls in oracle.classes())
    assert ours == theirs


@pytest.mark.parametrize("expr", SMALL)
def test_class_invariants(expr):
    G = build_named(expr).group
    classes = conjugacy_classes(G)
    assert classes[0].order == 1 and classes[0].size == 1
    assert sum(c.size for c in classes) == G.order
    for c in classes:
        assert G.order % c.size == 0
        assert centralizer_order(G, c.representative) == c.centralizer_order
        assert class_of(G, c.representative).label == c.label
        assert c.representative.order() == c.order
        assert c.label.startswith(str(c.order))
    labels = [c.label for c in classes]
    assert len(set(labels)) == len(labels)


def test_labels_sorted_by_size_within_order():
    G = build_named("Alt(5)").group
    assert [(c.label, c.size) for c in conjugacy_classes(G)] == [
        ("1A", 1), ("2A", 15), ("3A", 20), ("5A", 12), ("5B", 12)]
    assert class_by_label(G, "2A").cycle_type == (2, 2)
    with pytest.raises(KeyError):
        class_by_label(G, "7A")


def test_class_counts():
    # known class numbers
    assert len(conjugacy_classes(build_named("Sym(6)").group)) == 11
    assert len(conjugacy_classes(build_named("PSL(2,7)").group)) == 6
    assert len(conjugacy_classes(build_named("M10").group)) == 8
    assert len(conjugacy_classes(build_named("PSU(3,3)").group)) == 14


@pytest.mark.parametrize("expr,count", [
    ("Alt(5)", 2), ("Sym(4)", 4), ("Dihedral(4)", 6), ("Cyclic(12)", 6), ("ElemAbelian(2,2)", 5),
    ("Frobenius(7,3)", 3), ("Sym(6)", 3), ("Wr(Alt(5),2)", 3),
])
def test_normal_subgroup_counts(expr, count):
    subs = normal_subgroup_list(build_named(expr).group)
    assert len(subs) == count
    assert all(s.is_normal() for s in subs)


def test_minimal_normal():
    assert [m.order for m in minimal_normal_subgroups(build_named("Sym(4)").group)] == [4]
    assert sorted(m.order for m in minimal_normal_subgroups(build_named("Cyclic(6)").group)) == [2, 3]


@pytest.mark.parametrize("expr,expected", [
    ("Alt(5)", True), ("Sym(5)", True), ("Sym(4)", False), ("ElemAbelian(2,2)", True),
    ("Dihedral(4)", False), ("Frobenius(7,3)", True), ("Wr(Alt(5),2)", True), ("Cyclic(12)", True),
    ("M10", True), ("Dihedral(5)", True),
])
def test_every_proper_quotient_cyclic(expr, expected):
    assert every_proper_quotient_cyclic(build_named(expr).group) is expected


def test_is_cyclic():
    assert is_cyclic(build_named("Cyclic(12)").group)
    assert not is_cyclic(build_named("ElemAbelian(2,2)").group)
    assert is_cyclic(build_named("Direct(Cyclic(2),Cyclic(3))").group)


def test_members_are_sorted_indices():
    for c in conjugacy_classes(build_named("Sym(4)").group):
        assert np.all(np.diff(c.members) > 0)
        assert c.rep_index in c
