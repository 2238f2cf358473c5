import pytest

from spreadlab import SpecError, build_named, catalog, parse_spec
from spreadlab.classes import minimal_normal_subgroups
from spreadlab.constructions import canonical_expression
from spreadlab.twisted import twisted_wreath


def test_grammar_tree():
    assert parse_spec(" Gk( Alt(6), (1,2), 2 )") == ("Gk", [("Alt", [6], None), "(1,2)", 2], None)
    assert parse_spec("PSU(3,3):2") == ("PSU", [3, 3], 2)
    assert parse_spec("M10") == ("M10", [], None)
    assert parse_spec("Direct(Cyclic(2),Sym(3))") == ("Direct", [("Cyclic", [2], None), ("Sym", [3], None)], None)


def test_whitespace_insensitive():
    assert canonical_expression(" Wr( Alt(5) , 2 ) ") == "Wr(Alt(5),2)"
    assert build_named(" Sym( 4 )") is build_named("Sym(4)")


@pytest.mark.parametrize("expr,order,degree", [
    ("Cyclic(7)", 7, 7), ("ElemAbelian(3,2)", 9, 6), ("Sym(6)", 720, 6), ("Alt(7)", 2520, 7),
    ("Dihedral(6)", 12, 6), ("Frobenius(7,3)", 21, 7), ("PSL(2,7)", 168, 8), ("PSL(2,9)", 360, 10),
    ("PGL(2,7)", 336, 8), ("PGammaL(2,8)", 1512, 9), ("PGammaL(2,9)", 1440, 10), ("PSU(3,3)", 6048, 28),
    ("PSU(3,3):2", 12096, 28), ("Sz(8)", 29120, 65), ("Sz(8):3", 87360, 65), ("M10", 720, 10),
    ("Wr(Alt(5),2)", 7200, 10), ("Direct(Cyclic(2),Sym(3))", 12, 5), ("Gk(Alt(6),(1,2),2)", 518400, 12),
])
def test_orders_and_degrees(expr, order, degree):
    spec = build_named(expr)
    assert (spec.order, spec.degree) == (order, degree)


@pytest.mark.parametrize("expr", [
    "Foo(3)", "Sym(", "Sym(3))", "Sym(3,4)", "Sz(4)", "Sz(32):3", "PSL(3,4)", "PSL(2,6)", "Sym(3):2",
    "Wr(3,2)", "Gk(Alt(5),(1,6),1)", "Gk(Alt(4),(),2)", "Gk(Alt(5),(1,2,3),0)", "M10(1)",
])
def test_rejected_expressions(expr):
    with pytest.raises(SpecError):
        build_named(expr)


def test_designated_socles_are_minimal_normal():
    for spec in catalog(max_order=10_000):
        if spec.socle is None:
            continue
        G, N = spec.group, spec.socle
        assert all(s.conj(g) in N for g in G.generators for s in N.generators), spec.expression
        assert spec.coset in G and spec.coset not in N
        minimal = {m.order for m in minimal_normal_subgroups(G)}
        assert N.order in minimal, spec.expression


def test_twisted_group_layout():
    T = build_named("Alt(6)")
    y = T.group.generators[0].__class__.from_cycles("(1,2)", 6)
    tw = twisted_wreath(T, y, 2)
    assert tw.group.order == 360 ** 2 * 4
    assert tw.N.order == 360 ** 2
    # x maps block 0 to block 1 through y, and x^2 acts on each block as y
    assert tw.x.images[0] == 6 + y.images[0]
    x2 = tw.x ** 2
    assert x2 == tw.block_element([y, y])


def test_k1_is_the_overgroup():
    T = build_named("Alt(5)")
    tw = twisted_wreath(T, T.group.identity(), 1)
    assert tw.group.order == 60
    tw = twisted_wreath(T, T.group.identity().from_cycles("(1,2)", 5), 1)
    assert tw.group.order == 120


def test_wreath_by_identity_twist():
    T = build_named("Alt(5)")
    tw = twisted_wreath(T, T.group.identity(), 2)
    assert tw.group.order == build_named("Wr(Alt(5),2)").order


def test_smallest_suzuki_group():
    # Sz(2) is the Frobenius group of order 20 on 5 points
    spec = build_named("Sz(2)")
    assert (spec.order, spec.degree) == (20, 5)


def test_dihedral_socle_only_when_minimal():
    assert build_named("Dihedral(5)").socle.order == 5
    assert build_named("Dihedral(4)").socle is None


def test_huge_parameters_are_refused_quickly():
    from spreadlab.group import BoundExceeded

    for expr in ["Alt(1000000)", "Wr(Alt(5),100000)", "PSL(2,1048576)"]:
        with pytest.raises(BoundExceeded):
            build_named(expr)
