from itertools import combinations

from hypothesis import given, settings, strategies as st

from spreadlab.hitting import HittingSet, bits, popcount


def brute_minimum(rows, n):
    for size in range(n + 1):
        for combo in combinations(range(n), size):
            mask = sum(1 << x for x in combo)
            if all(r & mask for r in rows):
                return size
    return None


@st.composite
def families(draw):
    n = draw(st.integers(1, 10))
    rows = draw(st.lists(st.integers(1, (1 << n) - 1), min_size=1, max_size=14))
    return rows, n


@given(families())
@settings(max_examples=150)
def test_minimum_matches_brute_force(fam):
    rows, n = fam
    inst = HittingSet.build(rows, n)
    res = inst.minimize()
    assert res.exact
    assert res.size == brute_minimum(rows, n)
    chosen = sum(1 << x for x in res.solution)
    assert all(r & chosen for r in rows)
    assert len(res.solution) == res.size


@given(families())
def test_decide_is_monotone_and_bounded(fam):
    rows, n = fam
    inst = HittingSet.build(rows, n)
    m = inst.minimize().size
    assert inst.packing_bound(inst.full) <= m <= len(inst.greedy())
    assert inst.is_cover(inst.greedy())
    for k in range(0, n + 1):
        sol = inst.decide(k)
        assert (sol is not None) == (k >= m)
        if sol is not None:
            assert len(sol) <= k and inst.is_cover(sol)


@given(families())
def test_superset_reduction_keeps_optimum(fam):
    rows, n = fam
    a = HittingSet.build(rows, n, remove_supersets=True).minimize().size
    b = HittingSet.build(rows, n, remove_supersets=False).minimize().size
    assert a == b


def test_empty_row_means_no_hitting_set():
    inst = HittingSet.build([0b11, 0], 2)
    assert inst.has_empty_row()
    res = inst.minimize()
    assert res.size is None and res.exact
    assert inst.decide(5) is None


def test_no_rows():
    inst = HittingSet.build([], 3)
    assert inst.minimize().size == 0
    assert inst.decide(0) == []


def test_bit_helpers():
    assert bits(0b101001) == [0, 3, 5]
    assert popcount(0b101001) == 3
    assert bits(0) == []


def test_timeout_gives_bracket():
    # many disjoint-ish rows over a wide candidate set; a zero budget cannot finish
    n = 40
    rows = [((1 << (i % n)) | (1 << ((3 * i + 7) % n)) | (1 << ((5 * i + 1) % n))) for i in range(120)]
    inst = HittingSet.build(rows, n)
    res = inst.minimize(timeout=0.0)
    if not res.exact:
        assert res.timed_out and res.lower <= res.upper
    full = HittingSet.build(rows, n).minimize()
    assert full.exact
    if not res.exact:
        assert res.lower <= full.size <= res.upper
