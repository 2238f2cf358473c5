"""Registered verification checks and the suites built from them.

Each check is a module-level function returning ``(computed, ok, detail)``;
``ok`` is ``None`` when the computation could not decide the claim.  Checks
are looked up by name so they can run in worker processes.
"""
from __future__ import annotations

import time
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable

from .atlas import align_label
from .classes import class_by_label, conjugacy_classes, every_proper_quotient_cyclic
from .constructions import build_named
from .genlib import SpreadValue, spread_exact, uniform_spread_exact, witness_check
from .group import BoundExceeded
from .hitting import SolverTimeout
from .report import Record

Outcome = tuple[Any, "bool | None", dict]


@dataclass(frozen=True)
class Check:
    name: str
    claim: str
    anchor: str
    provenance: str
    expected: Any
    tier: str
    run: Callable[[dict], Outcome]


def _value(v: SpreadValue | None):
    return None if v is None else v.to_json()


def _spread(expr: str, cfg: dict) -> Any:
    return spread_exact(build_named(expr).group, timeout=cfg.get("timeout"))


def _uspread(expr: str, cfg: dict) -> Any:
    return uniform_spread_exact(build_named(expr).group, timeout=cfg.get("timeout"))


def _exact_or_none(cert, expected) -> bool | None:
    if cert.value is None:
        return None
    return cert.value.to_json() == expected


# --- check bodies ----------------------------------------------------------------------

def _u_alt5(cfg):
    c = _uspread("Alt(5)", cfg)
    return _value(c.value), _exact_or_none(c, 2), {"witness_classes": c.witness_classes}


def _u_alt6(cfg):
    spec = build_named("Alt(6)")
    c = uniform_spread_exact(spec.group, timeout=cfg.get("timeout"))
    types = [list(class_by_label(spec.group, lab).cycle_type) for lab in c.witness_classes]
    computed = {"value": _value(c.value), "witness_classes": c.witness_classes, "cycle_types": types}
    ok = None if c.value is None else (c.value.value == 2 and types == [[4, 2]])
    return computed, ok, {}


def _s_equals(expr: str, expected):
    def run(cfg):
        c = _spread(expr, cfg)
        return _value(c.value), _exact_or_none(c, expected), {"blocking_set": [str(p) for p in c.blocking_set]}
    return run


def _u_equals(expr: str, expected):
    def run(cfg):
        c = _uspread(expr, cfg)
        return _value(c.value), _exact_or_none(c, expected), {"witness_classes": c.witness_classes}
    return run


def _su_equals(expr: str, s_expected, u_expected):
    def run(cfg):
        s = _spread(expr, cfg)
        u = _uspread(expr, cfg)
        computed = {"s": _value(s.value), "u": _value(u.value)}
        if s.value is None or u.value is None:
            return computed, None, {}
        return computed, computed == {"s": s_expected, "u": u_expected}, {"witness_classes": u.witness_classes}
    return run


def _elem_abelian(cfg):
    out, ok = {}, True
    for p in (2, 3, 5):
        G = build_named(f"ElemAbelian({p},2)").group
        s, u = spread_exact(G, timeout=cfg.get("timeout")), uniform_spread_exact(G, timeout=cfg.get("timeout"))
        out[str(p)] = {"s": _value(s.value), "u": _value(u.value)}
        ok = ok and out[str(p)] == {"s": p, "u": 0}
    return out, ok, {}


def _witness_named(expr: str, label: str, k: int):
    """ATLAS-named class witnesses ``u >= k``; ambiguous names must hold for every candidate."""
    def run(cfg):
        spec = build_named(expr)
        al = align_label(spec, label)
        results = {}
        for lab in al.candidates + al.companions:
            C = class_by_label(spec.group, lab)
            results[lab] = witness_check(spec.group, C, k, timeout=cfg.get("timeout")).holds
        primary = [results[lab] for lab in al.candidates]
        if not primary or any(r is None for r in primary):
            ok = None
        elif all(primary):
            ok = True
        elif al.ambiguous and any(primary):
            ok = None
        else:
            ok = False
        detail = {"alignment": {"candidates": al.candidates, "companions": al.companions,
                                "ambiguous": al.ambiguous}, "holds": results}
        return {lab: results[lab] for lab in al.candidates}, ok, detail
    return run


def _u_at_least(expr: str, k: int):
    def run(cfg):
        G = build_named(expr).group
        c = uniform_spread_exact(G, timeout=cfg.get("timeout"))
        if c.value is not None:
            return _value(c.value), c.value.value >= k, {"witness_classes": c.witness_classes}
        return {"lower": c.lower, "upper": c.upper}, True if (c.lower or 0) >= k else None, {}
    return run


def _gk_witness(cfg):
    spec = build_named("Gk(Alt(6),(1,2),2)")
    G = spec.group
    # order-12 classes outside the socle cosets of index 2 are the natural candidates
    tried = {}
    for c in sorted(conjugacy_classes(G), key=lambda c: (-c.order, c.size, c.label)):
        if c.order == 1:
            continue
        res = witness_check(G, c, 1, timeout=cfg.get("timeout"))
        tried[c.label] = res.holds
        if res.holds:
            return {"witness": c.label, "k": 1}, True, {"tried": tried}
    return {"witness": None}, False, {"tried": tried}


def _cyclic12(cfg):
    c = _spread("Cyclic(12)", cfg)
    u = _uspread("Cyclic(12)", cfg)
    computed = {"s": _value(c.value), "u": _value(u.value)}
    return computed, computed == {"s": "inf", "u": "inf"}, {}


def _dichotomy(expr: str, expected: str):
    def run(cfg):
        from .graphs import DichotomyViolation, dichotomy_check

        try:
            res = dichotomy_check(build_named(expr).group)
        except DichotomyViolation as exc:
            return "violated", False, {"pair": list(exc.pair)}
        return res.branch, res.branch == expected, res.evidence
    return run


def _prg(cfg):
    from .graphs import prg_redundant_connected

    out = {e: prg_redundant_connected(build_named(e).group, 3) for e in ("ElemAbelian(2,2)", "Sym(3)", "Alt(4)")}
    return out, all(out.values()), {}


def _shintani_counts(cfg):
    from .shintani import ShintaniContext, class_count_check, order_law, shintani_map

    out, ok = {}, True
    for q0, e in ((2, 2), (2, 3), (3, 2), (4, 2)):
        ctx = ShintaniContext(q0, e)
        coset, fixed = class_count_check(ctx)
        smap = shintani_map(ctx, seed=cfg.get("seed", 0))
        labels = [c.label for c in conjugacy_classes(ctx.fixed)]
        good = coset == fixed and order_law(ctx) and smap.is_bijection(labels) and \
            all(x.independent for x in smap.entries)
        out[f"{q0},{e}"] = {"coset_classes": coset, "fixed_classes": fixed, "ok": good}
        ok = ok and good
    return out, ok, {}


def _sz83_certificate(cfg):
    from .overgroups import certify_uspread

    spec = build_named("Sz(8):3")
    al = align_label(spec, "15A")
    out = {}
    for lab in al.candidates + al.companions:
        cert = certify_uspread(spec.group, class_by_label(spec.group, lab), 90, mode="exact-P")
        out[lab] = {"certified": cert.certified, "max_P": str(cert.max_value), "worst": cert.worst_class}
    primary = [out[lab]["certified"] for lab in al.candidates]
    if all(primary):
        return out, True, {"alignment": al.candidates}
    # certificate margin failed: fall back to the hitting-set decision
    res = [witness_check(spec.group, class_by_label(spec.group, lab), 90, timeout=cfg.get("timeout")).holds
           for lab in al.candidates]
    return out, (None if any(r is None for r in res) else all(res)), {"fallback": res}


def _gk_exact(cfg):
    G = build_named("Gk(Alt(6),(1,2),2)").group
    s = spread_exact(G, timeout=cfg.get("timeout"))
    u = uniform_spread_exact(G, timeout=cfg.get("timeout"))
    computed = {"s": _value(s.value), "u": _value(u.value), "s_bracket": [s.lower, s.upper],
                "u_bracket": [u.lower, u.upper]}
    if s.value is None or u.value is None:
        return computed, None, {}
    return computed, (s.value.value, u.value.value) == (2, 1), {}


def _not_constructed(name: str):
    def run(cfg):
        return None, None, {"reason": f"{name} is not constructed by this package"}
    return run


CHECKS: list[Check] = [
    Check("u-alt5", "u(Alt(5)) = 2", "uniform-spread/Alt(5)", "PAPER", 2, "core", _u_alt5),
    Check("u-alt6", "u(Alt(6)) = 2 with the (4,2) class the only witness", "uniform-spread/Alt(6)", "PAPER",
          {"value": 2, "cycle_types": [[4, 2]]}, "core", _u_alt6),
    Check("s-alt5", "s(Alt(5)) = 2", "spread/Alt(5)", "PAPER", 2, "core", _s_equals("Alt(5)", 2)),
    Check("s-alt6", "s(Alt(6)) = 2", "spread/Alt(6)", "PAPER", 2, "core", _s_equals("Alt(6)", 2)),
    Check("s-sym6", "s(Sym(6)) = 2", "spread/Sym(6)", "PAPER", 2, "core", _s_equals("Sym(6)", 2)),
    Check("u-sym6", "u(Sym(6)) = 0", "uniform-spread/Sym(6)", "PAPER", 0, "core", _u_equals("Sym(6)", 0)),
    Check("u-sym5", "u(Sym(5)) = 2", "uniform-spread/Sym(5)", "PAPER", 2, "core", _u_equals("Sym(5)", 2)),
    Check("u-sym7", "u(Sym(7)) = 2", "uniform-spread/Sym(7)", "PAPER", 2, "core", _u_equals("Sym(7)", 2)),
    Check("elem-abelian", "s(Cp x Cp) = p and u = 0 for p = 2, 3, 5", "spread/elementary-abelian", "PAPER",
          {str(p): {"s": p, "u": 0} for p in (2, 3, 5)}, "core", _elem_abelian),
    Check("frobenius21", "Frobenius(7,3): s = 7, u = 6", "spread/Frobenius(7,3)", "PAPER",
          {"s": 7, "u": 6}, "core", _su_equals("Frobenius(7,3)", 7, 6)),
    Check("row-u33", "PSU(3,3):2 class 12C witnesses u >= 3", "small-rows/PSU(3,3):2", "PAPER", True, "core",
          _witness_named("PSU(3,3):2", "12C", 3)),
    Check("row-pgaml28", "PGammaL(2,8) class 9D witnesses u >= 6", "small-rows/PGammaL(2,8)", "PAPER", True,
          "core", _witness_named("PGammaL(2,8)", "9D", 6)),
    Check("u-pgl29", "u(PGL(2,9)) >= 2", "uniform-spread/PGL(2,9)", "PAPER", ">= 2", "core",
          _u_at_least("PGL(2,9)", 2)),
    Check("u-m10", "u(M10) >= 2", "uniform-spread/M10", "PAPER", ">= 2", "core", _u_at_least("M10", 2)),
    Check("wreath-a5", "s(Wr(Alt(5),2)) = u(Wr(Alt(5),2)) = 2", "spread/Wr(Alt(5),2)", "PAPER",
          {"s": 2, "u": 2}, "core", _su_equals("Wr(Alt(5),2)", 2, 2)),
    Check("gk-witness", "Gk(Alt(6),(1,2),2) has u >= 1", "twisted/Gk(Alt(6),(1,2),2)", "PAPER",
          {"k": 1}, "core", _gk_witness),
    Check("cyclic-inf", "s(Cyclic(12)) = u(Cyclic(12)) = infinity", "spread/cyclic", "PAPER",
          {"s": "inf", "u": "inf"}, "core", _cyclic12),
    Check("gg-sym6", "generating graph of Sym(6) has diameter at most 2", "generating-graph/Sym(6)", "PAPER",
          "diameter-at-most-2", "core", _dichotomy("Sym(6)", "diameter-at-most-2")),
    Check("gg-sym4", "generating graph of Sym(4) has an isolated vertex", "generating-graph/Sym(4)", "DERIVED",
          "isolated", "core", _dichotomy("Sym(4)", "isolated")),
    Check("prg", "redundant generating 3-tuples connected for C2xC2, Sym(3), Alt(4)",
          "product-replacement/3-tuples", "PAPER", True, "core", _prg),
    Check("shintani", "Shintani class counts, order law and map for SL2 instances", "shintani/SL2", "DERIVED",
          True, "core", _shintani_counts),
    # stretch tier
    Check("row-sz83", "Sz(8):3 class 15A witnesses u >= 90 (exact-P certificate)", "small-rows/Sz(8):3",
          "PAPER", True, "stretch", _sz83_certificate),
    Check("gk-exact", "Gk(Alt(6),(1,2),2): s = 2 and u = 1", "twisted/Gk(Alt(6),(1,2),2)/exact", "PAPER",
          {"s": 2, "u": 1}, "stretch", _gk_exact),
    Check("row-2f42", "2F4(2)' extension class 12C witnesses u >= 18", "small-rows/2F4(2)'", "PAPER", True,
          "stretch", _not_constructed("2F4(2)'")),
    Check("row-g23", "G2(3) extension class 18A witnesses u >= 23", "small-rows/G2(3)", "PAPER", True,
          "stretch", _not_constructed("G2(3)")),
    Check("row-g24", "G2(4) extension class 24B witnesses u >= 10", "small-rows/G2(4)", "PAPER", True,
          "stretch", _not_constructed("G2(4)")),
]

CHECK_BY_NAME = {c.name: c for c in CHECKS}

SUITES = {
    "paper-small": lambda tier: [c for c in CHECKS if c.tier == "core" or tier == "stretch"],
    "stretch": lambda tier: [c for c in CHECKS if c.tier == "stretch"],
}


def run_check(name: str, cfg: dict) -> Record:
    check = CHECK_BY_NAME[name]
    t0 = time.monotonic()
    error = None
    try:
        computed, ok, detail = check.run(cfg)
    except (BoundExceeded, SolverTimeout, TimeoutError) as exc:
        computed, ok, detail = None, None, {"reason": str(exc)}
    except Exception as exc:  # reported, never turned into a pass
        computed, ok, detail = None, None, {"traceback": traceback.format_exc(limit=5)}
        error = f"{type(exc).__name__}: {exc}"
    status = "indeterminate" if ok is None else ("pass" if ok else "fail")
    return Record(check.claim, check.anchor, computed, check.expected, check.provenance, status,
                  time.monotonic() - t0, detail, error)


def _worker(args):
    import random

    name, cfg = args
    random.seed(cfg.get("seed", 0))
    return run_check(name, cfg)


def run_suite(suite: str, cfg: dict, threads: int = 1, only: list[str] | None = None) -> list[Record]:
    """Run the checks of ``suite`` in order; ``threads > 1`` uses a process pool."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}")
    checks = SUITES[suite](cfg.get("tier", "core"))
    if only:
        checks = [c for c in checks if c.name in only]
    jobs = [(c.name, cfg) for c in checks]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(_worker, jobs))
    return [_worker(j) for j in jobs]


def quotient_claim(expr: str) -> bool:
    """Whether every proper quotient is cyclic (the hypothesis for the graph claims)."""
    return every_proper_quotient_cyclic(build_named(expr).group)
