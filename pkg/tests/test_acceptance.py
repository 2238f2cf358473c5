"""The acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line (also collected in the
terminal summary).  A criterion passes when its check holds and finishes
within its wall-clock bound.
"""
import random
import time
from contextlib import contextmanager

import pytest

from conftest import record_criterion
from oracles import SmallGroup, brute_spread, brute_uniform_spread
from spreadlab import build_named, catalog, class_by_label, conjugacy_classes
from spreadlab.classes import every_proper_quotient_cyclic
from spreadlab.genlib import exact_P_table, spread_at_least, spread_exact, uniform_spread_exact
from spreadlab.graphs import DichotomyViolation, conjugate_generation_check, dichotomy_check, generating_graph
from spreadlab.overgroups import fpr_cosets, fpr_intersection, maximal_overgroups, prob_bound
from spreadlab.shintani import (ShintaniContext, borel_normalizer, centralizer_bound_check, class_count_check,
                                order_law, parabolic_count_check, shintani_map, torus_normalizer, whole_extended)
from spreadlab.suites import run_check

CFG = {"timeout": 3600, "tier": "core", "seed": 0}


class Outcome:
    def __init__(self):
        self.ok = False
        self.detail = ""


@contextmanager
def criterion(number: int, text: str, bound: float | None):
    out = Outcome()
    t0 = time.monotonic()
    try:
        yield out
    except Exception as exc:
        out.ok, out.detail = False, f"{type(exc).__name__}: {exc}"
        raise
    finally:
        secs = time.monotonic() - t0
        in_time = bound is None or secs < bound
        passed = out.ok and in_time
        limit = "" if bound is None else f" < {bound:g} s"
        note = out.detail if in_time else f"{out.detail}; over time bound".lstrip("; ")
        record_criterion(number, f"{'PASS' if passed else 'FAIL'} criterion {number}: {text} "
                                 f"[{secs:.1f} s{limit}] {note}".rstrip())
    assert out.ok, out.detail
    assert in_time, f"criterion {number} took {secs:.1f} s (bound {bound} s)"


def checks_pass(out: Outcome, names: list[str], each: float | None = None) -> None:
    records = {n: run_check(n, CFG) for n in names}
    out.ok = all(r.status == "pass" and (each is None or r.runtime < each) for r in records.values())
    out.detail = "; ".join(f"{n}={r.status} {r.computed}" for n, r in records.items())


def test_criterion_01_uniform_spread_alternating():
    with criterion(1, "u(Alt5)=2, u(Alt6)=2 with (4,2) the unique witness", 10) as out:
        checks_pass(out, ["u-alt5", "u-alt6"])


def test_criterion_02_spread_two():
    with criterion(2, "s(Alt5)=s(Alt6)=s(Sym6)=2 and u(Sym6)=0", 120) as out:
        checks_pass(out, ["s-alt5", "s-alt6", "s-sym6", "u-sym6"])


def test_criterion_03_uniform_spread_symmetric():
    with criterion(3, "u(Sym5)=2 and u(Sym7)=2", 600) as out:
        checks_pass(out, ["u-sym5", "u-sym7"])


def test_criterion_04_elementary_abelian():
    with criterion(4, "s(Cp x Cp)=p and u=0 for p in 2,3,5", 10) as out:
        checks_pass(out, ["elem-abelian"])


def test_criterion_05_frobenius():
    with criterion(5, "Frobenius C7:C3 has s=7, u=6", 10) as out:
        checks_pass(out, ["frobenius21"])


def test_criterion_06_small_rows():
    with criterion(6, "witness_check rows U3(3).2 order 12 k=3 and PGammaL2(8) order 9 k=6, < 600 s each",
                   None) as out:
        checks_pass(out, ["row-u33", "row-pgaml28"], each=600)


def test_criterion_07_almost_simple_sextic():
    with criterion(7, "u(PGL2(9)) >= 2 and u(M10) >= 2", 300) as out:
        checks_pass(out, ["u-pgl29", "u-m10"])


def test_criterion_08_wreath():
    with criterion(8, "s(Alt5 wr C2) = u(Alt5 wr C2) = 2", 1800) as out:
        checks_pass(out, ["wreath-a5"])


def test_criterion_09_twisted_witness():
    with criterion(9, "u(G_2) >= 1 for the Sym6 twisted wreath data", 1800) as out:
        checks_pass(out, ["gk-witness"])


@pytest.mark.slow
def test_criterion_10_suzuki_certificate():
    with criterion(10, "Sz(8).3 order-15 class certifies u >= 90 (exact-P, hitting fallback)", 4 * 3600) as out:
        checks_pass(out, ["row-sz83"])


def test_criterion_11_probabilistic_sandwich():
    with criterion(11, "exact_P <= sum of fpr over maximal overgroups, catalog order <= 10^4", None) as out:
        violations, pairs = [], 0
        for spec in catalog(max_order=10_000):
            G = spec.group
            for c in conjugacy_classes(G):
                if c.order == 1:
                    continue
                exact = exact_P_table(G, c.representative)
                bound = prob_bound(G, c.representative)
                for lab, v in exact.items():
                    pairs += 1
                    if v > bound[lab]:
                        violations.append((spec.expression, c.label, lab))
        out.ok = not violations
        out.detail = f"{pairs} (x, z) pairs, {len(violations)} violations {violations[:3]}"


def test_criterion_12_fpr_double_count():
    with criterion(12, "fpr by class intersection equals fpr by fixed cosets on 10^4 sampled pairs", None) as out:
        rng = random.Random(12)
        pool = []
        for spec in catalog(max_order=10_000):
            G = spec.group
            classes = conjugacy_classes(G)
            subs = {}
            # every maximal subgroup contains a nontrivial element, so the identity adds nothing
            for c in classes[1:]:
                for H in maximal_overgroups(G, c.representative).members:
                    subs.setdefault(H.key, H)
            pool.extend((G, classes, H) for H in subs.values())
        samples, violations = 10_000, []
        for _ in range(samples):
            G, classes, H = pool[rng.randrange(len(pool))]
            C = classes[rng.randrange(len(classes))]
            if fpr_intersection(G, C, H) != fpr_cosets(G, C, H):
                violations.append((G.name, C.label, H.order))
        out.ok = not violations
        out.detail = f"{samples} pairs from {len(pool)} maximal subgroups, {len(violations)} violations"


def test_criterion_13_oracle_equivalence():
    with criterion(13, "hitting-set s/u equal brute force on catalog order <= 500", None) as out:
        bad = []
        groups = catalog(max_order=500)
        for spec in groups:
            G = spec.group
            oracle = SmallGroup(G.generators)
            s, u = spread_exact(G), uniform_spread_exact(G)
            s_val = None if s.value.is_infinite else s.value.value
            u_val = None if u.value.is_infinite else u.value.value
            if s_val != brute_spread(oracle) or u_val != brute_uniform_spread(oracle)[0]:
                bad.append(spec.expression)
        out.ok = not bad
        out.detail = f"{len(groups)} groups, {len(bad)} violations {bad}"


def test_criterion_14_generating_graph_dichotomy():
    with criterion(14, "isolated vertex or diameter <= 2, and isolated iff s=0, catalog order <= 2000",
                   None) as out:
        bad = []
        groups = catalog(max_order=2000)
        for spec in groups:
            G = spec.group
            try:
                branch = dichotomy_check(G).branch
            except DichotomyViolation as exc:
                bad.append((spec.expression, str(exc)))
                continue
            isolated = bool(generating_graph(G).isolated())
            if (branch == "isolated") != isolated or isolated != (not spread_at_least(G, 1)[0]):
                bad.append((spec.expression, branch))
        out.ok = not bad
        out.detail = f"{len(groups)} groups, {len(bad)} violations {bad}"


def test_criterion_15_product_replacement():
    with criterion(15, "redundant generating 3-tuples connected for C2xC2, Sym3, Alt4", 600) as out:
        checks_pass(out, ["prg"])


def test_criterion_16_shintani():
    with criterion(16, "Shintani class counts, order law, map, parabolic counts, centralizer bound", 1800) as out:
        results = {}
        for q0, e in ((2, 2), (2, 3), (3, 2), (4, 2)):
            ctx = ShintaniContext(q0, e)
            coset, fixed = class_count_check(ctx)
            smap = shintani_map(ctx, seed=0)
            labels = [c.label for c in conjugacy_classes(ctx.fixed)]
            results[(q0, e)] = {
                "class-count": coset == fixed,
                "order-law": order_law(ctx),
                "map": not smap.failures and smap.is_bijection(labels)
                and all(x.independent and x.centralizer_match for x in smap.entries),
                "parabolic": parabolic_count_check(ctx),
                "centralizer": all(centralizer_bound_check(ctx, H) for H in
                                   (whole_extended(ctx), borel_normalizer(ctx), torus_normalizer(ctx))),
            }
        failed = [(k, p) for k, r in results.items() for p, ok in r.items() if not ok]
        out.ok = not failed
        out.detail = f"{len(results)} fields, {len(failed)} failed properties {failed}"


def test_criterion_17_conjugate_generation():
    with criterion(17, "involutions in generating pairs and conjugate generators, catalog order <= 2000",
                   None) as out:
        bad, checked = [], 0
        for spec in catalog(max_order=2000):
            G = spec.group
            if not every_proper_quotient_cyclic(G):
                continue
            checked += 1
            res = conjugate_generation_check(G)
            # conjugate generators are missing exactly for Cp x Cp
            if not res.involutions_ok or (res.conjugate_pair is None) != res.elementary_abelian_pp:
                bad.append(spec.expression)
        out.ok = checked > 0 and not bad
        out.detail = f"{checked} groups with all proper quotients cyclic, {len(bad)} violations {bad}"
