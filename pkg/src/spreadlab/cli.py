"""Command-line front end.

Every subcommand produces a :class:`~spreadlab.report.VerificationReport`
printed as a table or as JSON.  Exit status is 0 when nothing fails, 1 on a
computation or usage error, and 2 when a checked claim is false.
"""
from __future__ import annotations

import argparse
import logging
import random
import sys
import time
import traceback
from pathlib import Path
from typing import Callable

from . import __version__
from .cache import CertificateCache, cache_dir, cache_key
from .classes import class_by_label, conjugacy_classes, every_proper_quotient_cyclic
from .constructions import SpecError, build_named, canonical_expression
from .genlib import DEFAULT_TIMEOUT, exact_P_table, spread_exact, uniform_spread_exact, witness_check
from .group import BoundExceeded
from .hitting import SolverTimeout
from .perm import Permutation
from .report import Record, VerificationReport

log = logging.getLogger("spreadlab")

U64 = 2**64


class UsageError(Exception):
    """Bad arguments detected after parsing (unknown class, element outside the group, ...)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < U64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _positive_float(text: str) -> float:
    v = float(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


GLOBAL_DEFAULTS = {"timeout": DEFAULT_TIMEOUT, "threads": 1, "cache_dir": None, "tier": "core",
                   "format": "table", "seed": 0, "verbose": False}


def _add_globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda key: argparse.SUPPRESS) if suppress else GLOBAL_DEFAULTS.get
    p.add_argument("--timeout", type=_positive_float, default=d("timeout"),
                   help="seconds allowed per exact solver instance (default %(default)s)")
    p.add_argument("--threads", type=_positive_int, default=d("threads"), help="worker processes for suites")
    p.add_argument("--cache-dir", default=d("cache_dir"),
                   help="certificate cache directory (also SPREADLAB_CACHE)")
    p.add_argument("--tier", choices=("core", "stretch"), default=d("tier"))
    p.add_argument("--format", choices=("json", "table"), default=d("format"))
    p.add_argument("--seed", type=_seed, default=d("seed"), help="seed for randomized heuristics")
    p.add_argument("-v", "--verbose", action="store_true", default=d("verbose"))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spreadlab", description="Exact spread, uniform spread and related checks.")
    parser.add_argument("--version", action="version", version=f"spreadlab {__version__}")
    _add_globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_):
        p = sub.add_parser(name, help=help_, description=help_)
        _add_globals(p, suppress=True)
        return p

    p = add("spread", "exact spread s(G)")
    p.add_argument("expr")
    p.add_argument("--expect", help="expected value (integer or inf); a mismatch exits 2")
    p.add_argument("--candidates", choices=("prime", "all"), default="prime")

    p = add("uspread", "exact uniform spread u(G) and its witness classes")
    p.add_argument("expr")
    p.add_argument("--expect")
    p.add_argument("--candidates", choices=("prime", "all"), default="prime")

    p = add("witness", "check that a class witnesses u(G) >= k")
    p.add_argument("expr")
    p.add_argument("label", help="class label such as 4A (or an ATLAS name with --atlas)")
    p.add_argument("k", type=_positive_int)
    p.add_argument("--mode", choices=("hitting", "exact-P", "fpr-bound"), default="hitting")
    p.add_argument("--atlas", action="store_true", help="interpret the label with ATLAS naming")

    p = add("gengraph", "generating graph: dichotomy check and export")
    p.add_argument("expr")
    p.add_argument("--export", choices=("dimacs", "json"))
    p.add_argument("--output", help="file for the export (default: standard output)")

    p = add("prg", "connectivity of redundant generating k-tuples under Nielsen moves")
    p.add_argument("expr")
    p.add_argument("k", type=_positive_int)

    p = add("overgroups", "maximal subgroups containing an element")
    p.add_argument("expr")
    p.add_argument("element", help="cycle notation, 1-indexed, e.g. (1,2,3)(4,5)")

    p = add("fpr", "exact P(z, x) against the fixed-point-ratio bound for every class z")
    p.add_argument("expr")
    p.add_argument("element")

    p = add("shintani", "Shintani descent checks for SL2(q0^e)")
    p.add_argument("q0", type=int)
    p.add_argument("e", type=int)
    p.add_argument("--tower", type=_positive_int, default=None, help="largest extension degree tried")

    p = add("verify", "run a verification suite")
    p.add_argument("--suite", choices=("paper-small", "stretch"), default="paper-small")
    p.add_argument("--only", action="append", help="run only the named check (repeatable)")
    return parser


# --- helpers -----------------------------------------------------------------------------

def _spec(expr: str):
    try:
        return build_named(expr)
    except SpecError as exc:
        raise UsageError(str(exc)) from exc


def _element(spec, text: str) -> Permutation:
    try:
        x = Permutation.from_cycles(text, spec.group.degree)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if not spec.group.contains(x):
        raise UsageError(f"{text} is not an element of {spec.expression}")
    return x


def _class(G, label: str):
    try:
        return class_by_label(G, label)
    except (KeyError, ValueError) as exc:
        labels = ", ".join(c.label for c in conjugacy_classes(G))
        raise UsageError(f"no class {label!r}; classes are {labels}") from exc


def _expected(text: str | None):
    if text is None:
        return None
    t = text.strip().lower()
    if t in ("inf", "infinity", "∞"):
        return "inf"
    try:
        return int(t)
    except ValueError as exc:
        raise UsageError(f"--expect must be an integer or inf, not {text!r}") from exc


def _status(ok: bool | None) -> str:
    return "indeterminate" if ok is None else ("pass" if ok else "fail")


def _record(claim, anchor, computed, expected, ok, t0, detail=None, provenance=None) -> Record:
    prov = provenance or ("TRIVIAL" if expected is not None else "DERIVED")
    return Record(claim, anchor, computed, expected, prov, _status(ok), time.monotonic() - t0, detail or {})


def _result_config(args) -> dict:
    """Options that can change a result; hashed into cache keys and report fingerprints."""
    return {"timeout": args.timeout, "candidates": getattr(args, "candidates", "prime"), "tier": args.tier,
            "seed": args.seed}


# --- subcommands -------------------------------------------------------------------------

def _cached(args, operation: str, compute: Callable):
    spec = _spec(args.expr)
    root = cache_dir(args.cache_dir)
    if root is None:
        return spec, compute(spec)
    cache = CertificateCache(root)
    expr = canonical_expression(args.expr)
    key = cache_key(expr, operation, _result_config(args))
    cert = cache.load(key, spec.group)
    if cert is not None:
        log.info("cache hit for %s %s (certificate re-verified)", operation, expr)
        return spec, cert
    cert = compute(spec)
    if cert.exact:
        cache.store(key, expr, operation, cert)
    return spec, cert


def cmd_spread(args) -> list[Record]:
    t0 = time.monotonic()
    expected = _expected(args.expect)
    spec, cert = _cached(args, "spread",
                         lambda s: spread_exact(s.group, timeout=args.timeout, candidates=args.candidates))
    value = None if cert.value is None else cert.value.to_json()
    ok = None if value is None else (True if expected is None else value == expected)
    detail = {"method": cert.method, "blocking_set": [str(p) for p in cert.blocking_set]}
    if value is None:
        detail["bracket"] = [cert.lower, cert.upper]
    return [_record(f"s({spec.expression})", f"spread/{spec.expression}", value, expected, ok, t0, detail)]


def cmd_uspread(args) -> list[Record]:
    t0 = time.monotonic()
    expected = _expected(args.expect)
    spec, cert = _cached(args, "uspread",
                         lambda s: uniform_spread_exact(s.group, timeout=args.timeout, candidates=args.candidates))
    value = None if cert.value is None else cert.value.to_json()
    ok = None if value is None else (True if expected is None else value == expected)
    G = spec.group
    witnesses = [{"class": lab, "cycle_type": list(class_by_label(G, lab).cycle_type),
                  "order": class_by_label(G, lab).order} for lab in cert.witness_classes]
    computed = {"value": value, "witness": cert.witness, "witnesses": witnesses}
    detail = {"method": cert.method, "class_values": cert.class_values}
    if value is None:
        detail["bracket"] = [cert.lower, cert.upper]
    return [_record(f"u({spec.expression})", f"uniform-spread/{spec.expression}", computed,
                    None if expected is None else {"value": expected}, ok, t0, detail)]


def _witness_one(args, G, label: str) -> tuple[bool | None, dict]:
    C = _class(G, label)
    if args.mode == "hitting":
        res = witness_check(G, C, args.k, timeout=args.timeout)
        detail = {"blocking": [str(p) for p in res.blocking]}
        if res.holds is None:
            detail["bracket"] = [res.lower, res.upper]
        return res.holds, detail
    from .overgroups import certify_uspread

    cert = certify_uspread(G, C, args.k, mode=args.mode)
    # a certificate that misses the margin is a refusal, not a disproof
    return (True if cert.certified else None), {"max": str(cert.max_value), "worst_class": cert.worst_class}


def cmd_witness(args) -> list[Record]:
    t0 = time.monotonic()
    spec = _spec(args.expr)
    G = spec.group
    detail: dict = {"mode": args.mode}
    if args.atlas:
        from .atlas import align_label

        try:
            al = align_label(spec, args.label)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        if not al.candidates:
            raise UsageError(f"{args.label}: {al.note}")
        labels = al.candidates
        detail["alignment"] = {"candidates": al.candidates, "ambiguous": al.ambiguous,
                               "outer": al.outer, "companions": al.companions}
    else:
        labels = [args.label]
    results = {}
    for lab in labels:
        holds, d = _witness_one(args, G, lab)
        results[lab] = holds
        detail[lab] = d
    vals = list(results.values())
    if any(v is None for v in vals):
        ok = None
    elif all(vals):
        ok = True
    elif len(vals) > 1 and any(vals):
        ok = None  # ambiguous name: candidates disagree
    else:
        ok = False
    claim = f"{args.label} witnesses u({spec.expression}) >= {args.k}"
    return [_record(claim, f"witness/{spec.expression}/{args.label}", results, True, ok, t0, detail, "TRIVIAL")]


def cmd_gengraph(args) -> list[Record]:
    from .graphs import DichotomyViolation, generating_graph, graph_json_dumps

    t0 = time.monotonic()
    spec = _spec(args.expr)
    graph = generating_graph(spec.group)
    if args.export:
        text = graph.to_dimacs(spec.expression) if args.export == "dimacs" else graph_json_dumps(graph, spec.expression)
        if args.output:
            Path(args.output).write_text(text)
        else:
            sys.stdout.write(text if text.endswith("\n") else text + "\n")
            args.format = "none"
    from .graphs import dichotomy_check

    try:
        res = dichotomy_check(spec.group)
        branch, ok, evidence = res.branch, True, res.evidence
    except DichotomyViolation as exc:
        branch, ok, evidence = "violated", False, {"pair": list(exc.pair), "distance": exc.distance}
    diameter = graph.diameter()
    computed = {"vertices": graph.n, "edges": graph.edge_count(), "isolated": len(graph.isolated()),
                "diameter": None if diameter == float("inf") else int(diameter), "branch": branch}
    return [_record(f"generating graph of {spec.expression}: isolated vertices or diameter <= 2",
                    f"generating-graph/{spec.expression}", computed, "isolated or diameter-at-most-2", ok, t0,
                    evidence, "TRIVIAL")]


def cmd_prg(args) -> list[Record]:
    from .graphs import prg_redundant_connected

    t0 = time.monotonic()
    spec = _spec(args.expr)
    connected = prg_redundant_connected(spec.group, args.k)
    hypothesis = every_proper_quotient_cyclic(spec.group) and args.k >= 3
    expected = True if hypothesis else None
    ok = True if expected is None else connected
    return [_record(f"redundant generating {args.k}-tuples of {spec.expression} are connected",
                    f"product-replacement/{spec.expression}/{args.k}", connected, expected, ok, t0,
                    {"every_proper_quotient_cyclic": hypothesis})]


def cmd_overgroups(args) -> list[Record]:
    from .overgroups import maximal_overgroups

    t0 = time.monotonic()
    spec = _spec(args.expr)
    x = _element(spec, args.element)
    ovs = maximal_overgroups(spec.group, x)
    computed = {"count": len(ovs), "orders": ovs.orders(), "conjugacy_classes": len(ovs.classes)}
    return [_record(f"maximal overgroups of {x} in {spec.expression}", f"overgroups/{spec.expression}",
                    computed, None, True, t0)]


def cmd_fpr(args) -> list[Record]:
    from .overgroups import maximal_overgroups, prob_bound

    t0 = time.monotonic()
    spec = _spec(args.expr)
    G = spec.group
    x = _element(spec, args.element)
    if x.is_identity():
        raise UsageError("the element must be nontrivial")
    exact = exact_P_table(G, x)
    bound = prob_bound(G, x, maximal_overgroups(G, x))
    violations = [lab for lab in exact if exact[lab] > bound.get(lab, 0)]
    computed = {lab: {"P": str(exact[lab]), "bound": str(bound[lab])} for lab in sorted(exact)}
    return [_record(f"P(z, {x}) <= sum of fpr over maximal overgroups in {spec.expression}",
                    f"fpr/{spec.expression}", computed, "no violations", not violations, t0,
                    {"violations": violations}, "TRIVIAL")]


def cmd_shintani(args) -> list[Record]:
    from .shintani import (DEFAULT_TOWER, ShintaniContext, borel_normalizer, centralizer_bound_check,
                           class_count_check, order_law, parabolic_count_check, shintani_map, torus_normalizer,
                           whole_extended)

    try:
        ctx = ShintaniContext(args.q0, args.e)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    tag = f"SL2({args.q0}^{args.e})"
    anchor = f"shintani/{args.q0},{args.e}"
    out = []
    t0 = time.monotonic()
    coset, fixed = class_count_check(ctx)
    out.append(_record(f"{tag}: coset classes equal classes of SL2({args.q0})", anchor + "/class-count",
                       {"coset": coset, "fixed": fixed}, "equal", coset == fixed, t0, provenance="TRIVIAL"))
    t0 = time.monotonic()
    out.append(_record(f"{tag}: |g sigma| = e |F(g sigma)|", anchor + "/order-law", order_law(ctx), True,
                       None, t0, provenance="TRIVIAL"))
    out[-1].status = _status(out[-1].computed)
    t0 = time.monotonic()
    smap = shintani_map(ctx, tower=args.tower or DEFAULT_TOWER, seed=args.seed)
    labels = [c.label for c in conjugacy_classes(ctx.fixed)]
    good = smap.is_bijection(labels) and all(e.independent and e.centralizer_match for e in smap.entries)
    table = {str(e.coset_class): e.image_label for e in smap.entries}
    towers = {str(e.coset_class): e.tower_degree for e in smap.entries}
    out.append(_record(f"{tag}: Shintani map is a well-defined bijection", anchor + "/map", table, "bijection",
                       None if smap.failures else good, t0, {"tower_degrees": towers, "failures": smap.failures},
                       "TRIVIAL"))
    t0 = time.monotonic()
    out.append(_record(f"{tag}: parabolic fixed-point counts agree", anchor + "/parabolic",
                       parabolic_count_check(ctx), True, None, t0, provenance="TRIVIAL"))
    out[-1].status = _status(out[-1].computed)
    for name, H in (("whole", whole_extended(ctx)), ("borel", borel_normalizer(ctx)),
                    ("torus", torus_normalizer(ctx))):
        t0 = time.monotonic()
        ok = centralizer_bound_check(ctx, H)
        out.append(_record(f"{tag}: centralizer bound for the {name} subgroup", anchor + f"/centralizer/{name}",
                           ok, True, ok, t0, provenance="TRIVIAL"))
    return out


def cmd_verify(args) -> list[Record]:
    from .suites import CHECK_BY_NAME, run_suite

    unknown = [n for n in args.only or [] if n not in CHECK_BY_NAME]
    if unknown:
        raise UsageError(f"unknown check(s): {', '.join(unknown)}; known: {', '.join(CHECK_BY_NAME)}")
    cfg = {"timeout": args.timeout, "tier": args.tier, "seed": args.seed}
    return run_suite(args.suite, cfg, threads=args.threads, only=args.only)


COMMANDS = {
    "spread": cmd_spread, "uspread": cmd_uspread, "witness": cmd_witness, "gengraph": cmd_gengraph,
    "prg": cmd_prg, "overgroups": cmd_overgroups, "fpr": cmd_fpr, "shintani": cmd_shintani,
    "verify": cmd_verify,
}


def _command_text(args) -> str:
    fields = [args.command] + [f"{k}={v}" for k, v in sorted(vars(args).items())
                               if k not in GLOBAL_DEFAULTS and k != "command" and v is not None]
    return " ".join(fields)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for key, default in GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, default)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    random.seed(args.seed)
    suite = args.suite if args.command == "verify" else args.command
    try:
        records = COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"spreadlab: error: {exc}", file=sys.stderr)
        return 1
    except (BoundExceeded, SolverTimeout) as exc:
        print(f"spreadlab: {args.command} not decided: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:
        if args.verbose:
            traceback.print_exc()
        print(f"spreadlab: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    config = {"timeout": args.timeout, "tier": args.tier, "seed": args.seed,
              "candidates": getattr(args, "candidates", "prime")}
    report = VerificationReport(suite, _command_text(args), records, config)
    if args.format == "json":
        print(report.dumps())
    elif args.format == "table":
        print(report.table())
    else:
        for r in records:
            print(f"{r.status}: {r.claim}", file=sys.stderr)
    return report.exit_code()


if __name__ == "__main__":
    sys.exit(main())
