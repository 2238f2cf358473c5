"""Generation tests and exact spread computations.

For an element ``y`` write ``NonGen(y)`` for the candidates ``x`` with
``<x, y> != G``.  A set of elements ``x_1..x_k`` has no common generating
partner in a domain ``D`` exactly when it meets ``NonGen(y)`` for every
``y`` in ``D``.  So the spread is one less than the minimum hitting set of
``{NonGen(y) : y in G}``, and a class ``C`` witnesses uniform spread ``k``
when ``{NonGen(y) : y in C}`` has no hitting set of size ``k``.

Candidates are restricted to elements of prime order: if ``<x, y> != G``
then ``<x^m, y> != G`` too, so every blocking set can be replaced by one of
prime-order powers.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .classes import (ConjugacyClass, class_index_map, conjugacy_classes, is_cyclic)
from .group import BoundExceeded, NotInGroup, PermGroup
from .hitting import HittingSet, HitResult, SolverTimeout
from .perm import Permutation
from .subgroups import Subgroup

DEFAULT_TIMEOUT = 600.0
SPREAD_ORDER_LIMIT = 2_000_000


# --- values and certificates --------------------------------------------------

@dataclass(frozen=True)
class SpreadValue:
    """A spread-type value; ``value is None`` means infinite."""

    value: int | None

    INFINITE_TEXT = "inf"

    @classmethod
    def infinite(cls) -> "SpreadValue":
        return cls(None)

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def __str__(self) -> str:
        return "∞" if self.value is None else str(self.value)

    def to_json(self):
        return self.INFINITE_TEXT if self.value is None else self.value

    @classmethod
    def from_json(cls, v) -> "SpreadValue":
        return cls(None) if v == cls.INFINITE_TEXT else cls(int(v))

    def __le__(self, other: "SpreadValue") -> bool:
        if other.value is None:
            return True
        if self.value is None:
            return False
        return self.value <= other.value


@dataclass
class SpreadCertificate:
    """Result of an exact spread computation together with its evidence.

    ``blocking_set`` proves the upper bound for spread.  For uniform spread,
    ``class_blocking`` gives a blocking set for every class (each proves
    that class witnesses nothing larger) and ``witness`` names the best class.
    When a solver times out, ``value`` is ``None`` and ``lower``/``upper``
    bracket the answer.
    """

    kind: str
    value: SpreadValue | None
    method: str
    lower: int | None = None
    upper: int | None = None
    witness: str | None = None
    witness_classes: list[str] = field(default_factory=list)
    blocking_set: list[Permutation] = field(default_factory=list)
    class_blocking: dict[str, list[Permutation]] = field(default_factory=dict)
    class_values: dict[str, int | None] = field(default_factory=dict)
    runtime: float = 0.0

    @property
    def exact(self) -> bool:
        return self.value is not None

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "value": None if self.value is None else self.value.to_json(),
            "method": self.method,
            "lower": self.lower,
            "upper": self.upper,
            "witness": self.witness,
            "witness_classes": list(self.witness_classes),
            "blocking_set": [str(p) for p in self.blocking_set],
            "class_blocking": {k: [str(p) for p in v] for k, v in self.class_blocking.items()},
            "class_values": dict(self.class_values),
        }

    @classmethod
    def from_json(cls, d: dict, degree: int) -> "SpreadCertificate":
        def perms(xs):
            return [Permutation.from_cycles(s, degree) for s in xs]

        return cls(
            kind=d["kind"],
            value=None if d["value"] is None else SpreadValue.from_json(d["value"]),
            method=d["method"],
            lower=d.get("lower"),
            upper=d.get("upper"),
            witness=d.get("witness"),
            witness_classes=list(d.get("witness_classes", [])),
            blocking_set=perms(d.get("blocking_set", [])),
            class_blocking={k: perms(v) for k, v in d.get("class_blocking", {}).items()},
            class_values=dict(d.get("class_values", {})),
        )


@dataclass
class WitnessResult:
    """Outcome of :func:`witness_check`; ``holds`` is ``None`` when undecided."""

    holds: bool | None
    k: int
    label: str
    blocking: list[Permutation] = field(default_factory=list)
    lower: int | None = None
    upper: int | None = None
    runtime: float = 0.0
    method: str = "hitting-set"


@dataclass
class NonGenSet:
    """``NonGen(y)`` as a boolean vector over an indexed candidate list."""

    anchor: Permutation
    anchor_index: int
    members: np.ndarray  # bool over candidates

    def __len__(self) -> int:
        return int(self.members.sum())


# --- per-group context -----------------------------------------------------------

def _is_prime_array(orders: np.ndarray) -> np.ndarray:
    top = int(orders.max()) if len(orders) else 1
    sieve = np.ones(top + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(math.isqrt(top)) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return sieve[orders]


class GenContext:
    """Cached generation data for one group."""

    def __init__(self, G: PermGroup):
        if G.order > SPREAD_ORDER_LIMIT:
            raise BoundExceeded("spread computation", G.order, SPREAD_ORDER_LIMIT)
        self.G = G
        self.table = G.table
        self.classes = conjugacy_classes(G)
        self.class_of = class_index_map(G)
        self._cent_gens: dict[int, list[int]] = {}
        self._rep_rows: dict[tuple, np.ndarray] = {}
        self._class_rows: dict[tuple, tuple[np.ndarray, np.ndarray]] = {}
        self._cand: dict[tuple, np.ndarray] = {}

    @classmethod
    def of(cls, G: PermGroup) -> "GenContext":
        if "genctx" not in G._cache:
            G._cache["genctx"] = cls(G)
        return G._cache["genctx"]

    def candidates(self, kind: str = "prime", within: Subgroup | None = None) -> np.ndarray:
        """Sorted candidate indices: prime-order (or all nontrivial) elements, optionally inside a subgroup."""
        key = (kind, None if within is None else within.key)
        if key not in self._cand:
            orders = self.table.orders
            if kind == "prime":
                mask = _is_prime_array(orders)
            elif kind == "all":
                mask = orders > 1
            else:
                raise ValueError(f"unknown candidate kind {kind!r}")
            if within is not None:
                mask = mask & within.mask
            self._cand[key] = np.nonzero(mask)[0]
        return self._cand[key]

    def centralizer_gens(self, y: int) -> list[int]:
        if y not in self._cent_gens:
            cent = self.table.centralizer(y)
            self._cent_gens[y] = self.table.generating_subset(cent)
        return self._cent_gens[y]

    def centralizer_orbits(self, y: int, subset: np.ndarray) -> list[np.ndarray]:
        maps = [self.table.conj_map(c) for c in self.centralizer_gens(y)]
        return self.table.orbits_under(maps, subset)

    def nongen_row(self, y: int, cand: np.ndarray, cand_key=None) -> np.ndarray:
        """Boolean vector over ``cand``: ``<x, y> != G``; one test per ``C_G(y)``-orbit."""
        key = (y, cand_key if cand_key is not None else cand.tobytes())
        if key in self._rep_rows:
            return self._rep_rows[key]
        orbits = self.centralizer_orbits(y, cand)
        reps = np.array([int(o[0]) for o in orbits], dtype=np.int64)
        gen = self.table.generates_with(y, reps)
        pos = np.full(self.table.order, -1, dtype=np.int64)
        pos[cand] = np.arange(len(cand))
        row = np.zeros(len(cand), dtype=bool)
        for o, g in zip(orbits, gen):
            if not g:
                row[pos[o]] = True
        self._rep_rows[key] = row
        return row

    def class_rows(self, C: ConjugacyClass, cand: np.ndarray, cand_key=None
                   ) -> tuple[np.ndarray, np.ndarray]:
        """``(members, rows)``: class members in BFS order from the representative and their NonGen rows.

        Rows of conjugates come from conjugating the representative's row.
        """
        ckey = cand_key if cand_key is not None else cand.tobytes()
        key = (C.rep_index, ckey)
        if key in self._class_rows:
            return self._class_rows[key]
        table = self.table
        pos = np.full(table.order, -1, dtype=np.int64)
        pos[cand] = np.arange(len(cand))
        cmaps = [pos[mp[cand]] for mp in table.conj_gen_maps]
        if any(np.any(cm < 0) for cm in cmaps):
            raise ValueError("candidate set is not closed under conjugation")
        rep_row = self.nongen_row(C.rep_index, cand, ckey)
        members = [C.rep_index]
        rows = [rep_row]
        seen = {C.rep_index}
        layer_members = np.array([C.rep_index], dtype=np.int64)
        layer_rows = rep_row[None, :]
        while len(layer_members):
            next_m, next_r = [], []
            for gi, mp in enumerate(table.conj_gen_maps):
                imgs = mp[layer_members]
                for j, m in enumerate(imgs):
                    m = int(m)
                    if m not in seen:
                        seen.add(m)
                        r = np.zeros(len(cand), dtype=bool)
                        r[cmaps[gi]] = layer_rows[j]
                        next_m.append(m)
                        next_r.append(r)
            members.extend(next_m)
            rows.extend(next_r)
            layer_members = np.array(next_m, dtype=np.int64)
            layer_rows = np.array(next_r) if next_r else np.zeros((0, len(cand)), dtype=bool)
        if len(members) != C.size:
            raise RuntimeError("class expansion mismatch")
        out = (np.array(members, dtype=np.int64), np.array(rows))
        self._class_rows[key] = out
        return out

    def root_reps_factory(self, domain: np.ndarray, cand: np.ndarray):
        """Root symmetry: candidates of the first row up to ``C_G(y0)``-conjugacy."""

        def reps(origin: int, positions: list[int]) -> list[int]:
            y0 = int(domain[origin])
            subset = cand[np.array(positions, dtype=np.int64)]
            orbits = self.centralizer_orbits(y0, np.sort(subset))
            pos = {int(c): i for i, c in enumerate(cand)}
            return [pos[int(o[0])] for o in orbits]

        return reps


def _pack_rows(rows: np.ndarray) -> list[int]:
    if rows.shape[0] == 0:
        return []
    packed = np.packbits(rows, axis=1, bitorder="little")
    return [int.from_bytes(r.tobytes(), "little") for r in packed]


# --- operations ----------------------------------------------------------------

def _index(G: PermGroup, x: Permutation) -> int:
    try:
        return G.table.index(x)
    except NotInGroup:
        raise NotInGroup(f"{x} is not an element of the group") from None


def generates(G: PermGroup, x: Permutation, y: Permutation) -> bool:
    """Whether ``<x, y> = G``."""
    i, j = _index(G, x), _index(G, y)
    return G.table.generates([i, j])


def nongen_family(G: PermGroup, domain: str | ConjugacyClass | PermGroup = "all",
                  socle: PermGroup | None = None, candidates: str = "prime") -> tuple[np.ndarray, list[NonGenSet]]:
    """``(candidates, sets)``: one :class:`NonGenSet` per ``y`` in the domain.

    ``domain`` is ``"all"`` (every element), a conjugacy class, or ``"socle"``
    (the elements of ``socle``).  When ``socle`` is given, candidates are
    restricted to its nontrivial elements.
    """
    ctx = GenContext.of(G)
    within = _as_subgroup(G, socle) if socle is not None else None
    cand = ctx.candidates(candidates, within)
    if isinstance(domain, ConjugacyClass):
        classes = [domain]
    elif domain == "all":
        classes = ctx.classes
    elif domain == "socle":
        if within is None:
            raise ValueError("socle domain needs a socle")
        classes = [c for c in ctx.classes if within.mask[c.rep_index]]
    else:
        raise ValueError(f"unknown domain {domain!r}")
    out = []
    for c in classes:
        members, rows = ctx.class_rows(c, cand)
        for m, r in zip(members, rows):
            out.append(NonGenSet(ctx.table.perm(int(m)), int(m), r))
    return cand, out


def _as_subgroup(G: PermGroup, H: PermGroup) -> Subgroup:
    table = G.table
    gens = [_index(G, g) for g in H.generators]
    sub = Subgroup.generated(table, gens)
    if sub.order != H.order:
        raise RuntimeError("subgroup order mismatch")
    return sub


def _power_classes(ctx: GenContext) -> set[int]:
    """Positions of classes consisting of proper powers of elements of larger order."""
    table = ctx.table
    out = set()
    for c in ctx.classes:
        o = c.order
        rep = c.representative
        for d in range(2, o):
            if o % d == 0:
                out.add(int(ctx.class_of[table.index(rep ** d)]))
    return out


def _hitting_instance(ctx: GenContext, classes: Sequence[ConjugacyClass], cand: np.ndarray,
                      timeout: float | None) -> tuple[HittingSet, np.ndarray]:
    members_all, rows_all = [], []
    for c in classes:
        members, rows = ctx.class_rows(c, cand)
        members_all.append(members)
        rows_all.append(rows)
    domain = np.concatenate(members_all)
    rows = np.concatenate(rows_all, axis=0)
    inst = HittingSet.build(_pack_rows(rows), len(cand), ctx.root_reps_factory(domain, cand), timeout)
    return inst, domain


def _perms(ctx: GenContext, cand: np.ndarray, sol: Iterable[int]) -> list[Permutation]:
    return sorted((ctx.table.perm(int(cand[x])) for x in sol), key=lambda p: p.images)


def _cyclic_certificate(kind: str, t0: float) -> SpreadCertificate:
    return SpreadCertificate(kind, SpreadValue.infinite(), "definitional", runtime=time.monotonic() - t0)


def _check_nontrivial(G: PermGroup) -> None:
    if G.order == 1:
        raise ValueError("spread is not defined for the trivial group")


def spread_exact(G: PermGroup, timeout: float | None = DEFAULT_TIMEOUT,
                 candidates: str = "prime") -> SpreadCertificate:
    """Exact ``s(G)`` with a minimum blocking set; cyclic groups give infinity."""
    t0 = time.monotonic()
    _check_nontrivial(G)
    if is_cyclic(G):
        return _cyclic_certificate("spread", t0)
    ctx = GenContext.of(G)
    cand = ctx.candidates(candidates)
    # NonGen(y) is contained in NonGen(y^d), so powers can be skipped
    skip = _power_classes(ctx)
    classes = [c for i, c in enumerate(ctx.classes) if i not in skip]
    inst, _ = _hitting_instance(ctx, classes, cand, timeout)
    res = inst.minimize()
    return _certificate_from(ctx, cand, "spread", res, t0)


def spread_at_least(G: PermGroup, k: int, timeout: float | None = DEFAULT_TIMEOUT,
                    candidates: str = "prime") -> tuple[bool, list[Permutation]]:
    """Decide ``s(G) >= k``; when false, also return a blocking set of size at most ``k``."""
    _check_nontrivial(G)
    if k <= 0 or is_cyclic(G):
        return True, []
    ctx = GenContext.of(G)
    cand = ctx.candidates(candidates)
    skip = _power_classes(ctx)
    classes = [c for i, c in enumerate(ctx.classes) if i not in skip]
    inst, _ = _hitting_instance(ctx, classes, cand, timeout)
    sol = inst.decide(k)
    if sol is None:
        return True, []
    return False, _perms(ctx, cand, sol)


def _certificate_from(ctx, cand, kind, res: HitResult, t0) -> SpreadCertificate:
    if res.size is None and res.exact:
        return SpreadCertificate(kind, SpreadValue.infinite(), "hitting-set", runtime=time.monotonic() - t0)
    blocking = _perms(ctx, cand, res.solution or [])
    if res.exact:
        return SpreadCertificate(kind, SpreadValue(res.size - 1), "hitting-set", res.size - 1, res.size - 1,
                                 blocking_set=blocking, runtime=time.monotonic() - t0)
    return SpreadCertificate(kind, None, "hitting-set", res.lower - 1, res.upper - 1,
                             blocking_set=blocking, runtime=time.monotonic() - t0)


def _class_priority(c: ConjugacyClass) -> tuple:
    return (-c.order, c.size, c.label)


def uniform_spread_exact(G: PermGroup, timeout: float | None = DEFAULT_TIMEOUT,
                         candidates: str = "prime", socle: PermGroup | None = None,
                         classes: Sequence[ConjugacyClass] | None = None) -> SpreadCertificate:
    """Exact ``u(G)`` together with every class attaining it.

    The reported witness is the attaining class of smallest element order,
    then smallest size.  ``timeout`` applies to each hitting-set instance.
    """
    t0 = time.monotonic()
    _check_nontrivial(G)
    kind = "uniform" if socle is None else "u0"
    ctx = GenContext.of(G)
    within = _as_subgroup(G, socle) if socle is not None else None
    if is_cyclic(G) and within is None:
        return _cyclic_certificate(kind, t0)
    cand = ctx.candidates(candidates, within)
    pool = [c for c in (classes or ctx.classes) if c.order > 1]
    pool.sort(key=_class_priority)
    best = 0  # best hitting-set size so far (u = best - 1)
    winners: list[ConjugacyClass] = []
    blocking: dict[str, list[Permutation]] = {}
    values: dict[str, int | None] = {}
    lower_bound, upper_bound, undecided = 0, 0, False
    infinite = False
    for c in pool:
        inst, _ = _hitting_instance(ctx, [c], cand, timeout)
        if inst.has_empty_row():
            infinite = True
            winners = [c]
            values[c.label] = None
            break
        try:
            if best >= 2:
                small = inst.decide(best - 1)
                if small is not None:
                    blocking[c.label] = _perms(ctx, cand, small)
                    values[c.label] = None  # strictly below the final value
                    continue
            res = inst.minimize(known_lower=max(best, 1) if best >= 2 else 0)
        except SolverTimeout:
            res = HitResult(None, False, best, None, None, timed_out=True)
        if not res.exact:
            undecided = True
            lower_bound = max(lower_bound, res.lower - 1)
            upper_bound = max(upper_bound, (res.upper or 0) - 1)
            values[c.label] = None
            if res.solution:
                blocking[c.label] = _perms(ctx, cand, res.solution)
            continue
        h = res.size
        values[c.label] = h - 1
        blocking[c.label] = _perms(ctx, cand, res.solution)
        if h > best:
            best, winners = h, [c]
        elif h == best:
            winners.append(c)
    runtime = time.monotonic() - t0
    if infinite:
        return SpreadCertificate(kind, SpreadValue.infinite(), "hitting-set", witness=winners[0].label,
                                 witness_classes=[winners[0].label], runtime=runtime)
    winners.sort(key=lambda c: (c.order, c.size, c.label))
    labels = [c.label for c in winners]
    u = best - 1 if best else 0
    if undecided and upper_bound > u:
        return SpreadCertificate(kind, None, "hitting-set", max(u, lower_bound), upper_bound,
                                 witness=labels[0] if labels else None, witness_classes=labels,
                                 class_blocking=blocking, class_values=values, runtime=runtime)
    return SpreadCertificate(kind, SpreadValue(max(u, 0)), "hitting-set", max(u, 0), max(u, 0),
                             witness=labels[0] if labels and u > 0 else None,
                             witness_classes=labels if u > 0 else [],
                             class_blocking=blocking, class_values=values, runtime=runtime)


def witness_check(G: PermGroup, C: ConjugacyClass, k: int, timeout: float | None = DEFAULT_TIMEOUT,
                  socle: PermGroup | None = None) -> WitnessResult:
    """Whether every ``k`` nontrivial elements have a common generating partner in ``C``.

    On failure a blocking ``k``-set is returned.  ``k = 1`` is decided per
    class of prime-order elements without building the full family.
    """
    t0 = time.monotonic()
    if k < 1:
        raise ValueError("k must be at least 1")
    ctx = GenContext.of(G)
    within = _as_subgroup(G, socle) if socle is not None else None
    if k == 1 and within is None:
        return _witness_one(ctx, C, t0)
    cand = ctx.candidates("prime", within)
    inst, _ = _hitting_instance(ctx, [C], cand, timeout)
    try:
        sol = inst.decide(k)
    except SolverTimeout:
        lower = inst.packing_bound(inst.full)
        return WitnessResult(None, k, C.label, lower=lower, upper=len(inst.greedy()),
                             runtime=time.monotonic() - t0)
    if sol is None:
        return WitnessResult(True, k, C.label, runtime=time.monotonic() - t0)
    blocking = _perms(ctx, cand, sol)
    return WitnessResult(False, k, C.label, blocking, runtime=time.monotonic() - t0)


def _witness_one(ctx: GenContext, C: ConjugacyClass, t0: float) -> WitnessResult:
    """k = 1: each prime-order class rep needs a generating partner in ``C``."""
    table = ctx.table
    rng = np.random.default_rng(0)
    for xc in ctx.classes:
        if xc.order == 1 or not _is_prime_array(np.array([xc.order]))[0]:
            continue
        x = xc.rep_index
        members = C.members
        order = rng.permutation(len(members))
        found = False
        # random members in doubling chunks until all have been tried
        start, step = 0, 1
        while start < len(order):
            chunk = members[order[start:start + step]]
            if np.any(table.generates_with(x, chunk)):
                found = True
                break
            start += step
            step = min(2 * step, 256)
        if not found:
            return WitnessResult(False, 1, C.label, [xc.representative], runtime=time.monotonic() - t0)
    return WitnessResult(True, 1, C.label, runtime=time.monotonic() - t0)


def restricted_spread(G: PermGroup, N: PermGroup, kind: str = "s0",
                      timeout: float | None = DEFAULT_TIMEOUT) -> SpreadCertificate:
    """``s_0`` or ``u_0``: the ``x_i`` range over nontrivial elements of the normal subgroup ``N``."""
    t0 = time.monotonic()
    _check_nontrivial(G)
    ctx = GenContext.of(G)
    sub = _as_subgroup(G, N)
    if not sub.is_normal():
        raise ValueError("N is not normal in G")
    if is_cyclic(G):
        return _cyclic_certificate(kind, t0)
    if kind == "u0":
        return uniform_spread_exact(G, timeout, socle=N)
    if kind != "s0":
        raise ValueError("kind must be 's0' or 'u0'")
    cand = ctx.candidates("prime", sub)
    skip = _power_classes(ctx)
    classes = [c for i, c in enumerate(ctx.classes) if i not in skip]
    inst, _ = _hitting_instance(ctx, classes, cand, timeout)
    res = inst.minimize()
    return _certificate_from(ctx, cand, "s0", res, t0)


def exact_P(G: PermGroup, z: Permutation, C: ConjugacyClass) -> Fraction:
    """``|{y in C : <z, y> != G}| / |C|``, testing one ``y`` per ``C_G(z)``-orbit."""
    ctx = GenContext.of(G)
    zi = _index(G, z)
    if zi == ctx.table.identity:
        raise ValueError("z must be nontrivial")
    orbits = ctx.centralizer_orbits(zi, C.members)
    reps = np.array([int(o[0]) for o in orbits], dtype=np.int64)
    gen = ctx.table.generates_with(zi, reps)
    bad = sum(len(o) for o, g in zip(orbits, gen) if not g)
    return Fraction(bad, C.size)


def nongen_class_counts(G: PermGroup, x: Permutation) -> dict[str, int]:
    """For each class label, the number of its elements failing to generate with ``x``."""
    ctx = GenContext.of(G)
    xi = _index(G, x)
    everything = np.arange(ctx.table.order, dtype=np.int64)
    orbits = ctx.centralizer_orbits(xi, everything)
    reps = np.array([int(o[0]) for o in orbits], dtype=np.int64)
    gen = ctx.table.generates_with(xi, reps)
    counts = {c.label: 0 for c in ctx.classes}
    for o, g in zip(orbits, gen):
        if not g:
            lab = ctx.classes[int(ctx.class_of[int(o[0])])].label
            counts[lab] += len(o)
    return counts


def exact_P_table(G: PermGroup, x: Permutation) -> dict[str, Fraction]:
    """``P(z, x)`` for every nontrivial class ``z^G``, by double counting over NonGen(x)."""
    ctx = GenContext.of(G)
    counts = nongen_class_counts(G, x)
    return {c.label: Fraction(counts[c.label], c.size) for c in ctx.classes if c.order > 1}


# --- certificate re-verification ----------------------------------------------

def blocks_domain(G: PermGroup, xs: Sequence[Permutation], domain: np.ndarray) -> bool:
    """True if every ``y`` in ``domain`` fails to generate with some ``x``."""
    table = G.table
    alive = np.ones(len(domain), dtype=bool)
    for x in xs:
        xi = _index(G, x)
        idx = np.nonzero(alive)[0]
        gen = table.generates_with(xi, domain[idx])
        alive[idx] = gen
        if not alive.any():
            return True
    return not alive.any()


def verify_certificate(G: PermGroup, cert: SpreadCertificate, full: bool = False,
                       timeout: float | None = DEFAULT_TIMEOUT) -> bool:
    """Re-check the evidence in ``cert`` against ``G``.

    Blocking sets are always re-verified exhaustively over their domain.  With
    ``full`` the witness lower bound is re-derived by a fresh decision run.
    """
    if cert.value is not None and cert.value.is_infinite:
        return is_cyclic(G)
    classes = {c.label: c for c in conjugacy_classes(G)}
    if cert.kind in ("spread", "s0"):
        if cert.value is None:
            return True
        k = cert.value.value
        if len(cert.blocking_set) != k + 1:
            return False
        if not all(p.order() > 1 for p in cert.blocking_set):
            return False
        if not blocks_domain(G, cert.blocking_set, np.arange(G.order, dtype=np.int64)):
            return False
        if full and cert.kind == "spread":
            return spread_at_least(G, k, timeout)[0]
        return True
    u = cert.value.value if cert.value is not None else None
    if u is not None:
        needed = {lab for lab, c in classes.items() if c.order > 1}
        if cert.kind == "uniform" and not needed <= set(cert.class_blocking):
            return False
    for lab, bl in cert.class_blocking.items():
        if lab not in classes:
            return False
        if u is not None and len(bl) > u + 1:
            return False
        if not bl or not all(p.order() > 1 for p in bl):
            return False
        if not blocks_domain(G, bl, classes[lab].members):
            return False
    if u is not None and u > 0:
        if cert.witness not in classes:
            return False
        if full and not witness_check(G, classes[cert.witness], u, timeout).holds:
            return False
    return True
