import random

import pytest

from spreadlab import conjugacy_classes
from spreadlab import matrices as M
from spreadlab.fields import field
from spreadlab.shintani import (ShintaniContext, borel_normalizer, centralizer_bound_check, class_count_check,
                                coset_classes, lang_steinberg, order_law, parabolic_count_check,
                                parabolic_counts, shintani_map, torus_normalizer, whole_extended)

INSTANCES = [(2, 2), (2, 3), (3, 2), (4, 2)]


def sl2_class_count(q):
    return q + 1 if q % 2 == 0 else q + 4


@pytest.fixture(scope="module", params=INSTANCES, ids=lambda t: f"{t[0]}^{t[1]}")
def ctx(request):
    return ShintaniContext(*request.param)


def test_sigma_structure(ctx):
    assert all(ctx.sigma_checks().values())


def test_class_counts(ctx):
    coset, fixed = class_count_check(ctx)
    assert coset == fixed == sl2_class_count(ctx.q0)
    assert sum(c.size for c in coset_classes(ctx)) == ctx.sl.order


def test_order_law(ctx):
    assert order_law(ctx)


def test_map_is_a_bijection(ctx):
    smap = shintani_map(ctx, seed=3)
    labels = [c.label for c in conjugacy_classes(ctx.fixed)]
    assert smap.complete and smap.is_bijection(labels)
    for e in smap.entries:
        # |g sigma| = e |F(g sigma)| and the image does not depend on the witness or class member
        assert e.coset_order == ctx.e * e.image_order
        assert e.independent and e.second_label == e.image_label
        assert e.centralizer_match


def test_witness_equation(ctx):
    rng = random.Random(11)
    for c in coset_classes(ctx):
        res = lang_steinberg(ctx, c.g, rng=rng)
        assert res.found
        K = field(res.field_q)
        assert M.det(K, res.a) == 1
        # the image has the expected order in SL2(q0)
        assert ctx.matrix_perm0(res.image).order() * ctx.e == c.order


def test_parabolic_counts(ctx):
    assert parabolic_count_check(ctx)
    for coset_side, fixed_side in parabolic_counts(ctx):
        assert coset_side == fixed_side


def test_centralizer_bound(ctx):
    for H in (whole_extended(ctx), borel_normalizer(ctx), torus_normalizer(ctx)):
        assert centralizer_bound_check(ctx, H)


def test_parabolic_counts_for_nine():
    ctx = ShintaniContext(3, 2)
    assert sorted(parabolic_counts(ctx)) == sorted([(4, 4), (4, 4), (1, 1), (1, 1), (0, 0), (1, 1), (1, 1)])


def test_short_tower_reports_failures():
    ctx = ShintaniContext(3, 2)
    smap = shintani_map(ctx, tower=1)
    assert not smap.complete
    assert smap.failures


def test_rejects_bad_parameters():
    with pytest.raises(ValueError):
        ShintaniContext(3, 1)
    with pytest.raises(ValueError):
        ShintaniContext(6, 2)
