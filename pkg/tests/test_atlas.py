import pytest

from spreadlab import build_named, class_by_label
from spreadlab.atlas import align_label, coset_index
from spreadlab.genlib import witness_check


def test_inner_names_follow_socle_ordering():
    spec = build_named("Sym(6)")
    # both 3-classes of Alt(6) have size 40, so the inner letters tie
    al = align_label(spec, "3A")
    assert not al.outer and al.ambiguous
    assert sorted(al.candidates) == ["3A", "3B"]
    assert align_label(spec, "4A").candidates


def test_simple_group_names():
    spec = build_named("Alt(5)")
    al = align_label(spec, "5B")
    assert al.ambiguous and sorted(al.candidates) == ["5A", "5B"]
    assert align_label(spec, "2A").candidates == ["2A"]
    assert align_label(spec, "7A").candidates == []


def test_unitary_outer_name_is_ambiguous():
    spec = build_named("PSU(3,3):2")
    al = align_label(spec, "12C")
    assert al.outer and al.ambiguous
    assert sorted(al.candidates) == ["12A", "12C"]
    for lab in al.candidates:
        assert coset_index(spec, class_by_label(spec.group, lab).representative) == 1


def test_outer_names_with_companions():
    spec = build_named("PGammaL(2,8)")
    al = align_label(spec, "9D")
    assert al.outer and al.candidates == ["9C"] and al.companions == ["9B"]
    spec = build_named("Sz(8):3")
    al = align_label(spec, "15A")
    assert al.candidates == ["15B"] and al.companions == ["15A"]


def test_ambiguous_candidates_all_witness():
    spec = build_named("PSU(3,3):2")
    for lab in align_label(spec, "12C").candidates:
        assert witness_check(spec.group, class_by_label(spec.group, lab), 3).holds
    # the inner order-12 class does not witness 3
    assert witness_check(spec.group, class_by_label(spec.group, "12B"), 3).holds is False


@pytest.mark.parametrize("bad", ["A12", "12", "12c3", ""])
def test_bad_names(bad):
    with pytest.raises(ValueError):
        align_label(build_named("Alt(5)"), bad)


def test_coset_index_needs_a_socle():
    with pytest.raises(ValueError):
        coset_index(build_named("Alt(5)"), build_named("Alt(5)").group.identity())
