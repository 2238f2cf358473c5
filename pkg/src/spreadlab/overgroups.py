"""Maximal overgroups, fixed point ratios and probabilistic certificates.

``maximal_overgroups`` walks the overgroups of ``<x>`` depth first.  Each
visited subgroup ``K`` keeps the set ``S_K`` of elements ``h`` outside ``K``
with ``<K, h>`` proper.  A maximal overgroup ``M`` of ``K`` lies inside
``K`` together with ``S_K``, and ``S_L`` is contained in ``S_K`` for every
``L`` above ``K``, so each child only re-tests its parent's survivors.
``K`` is maximal exactly when ``S_K`` is empty.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .classes import ConjugacyClass, class_index_map, conjugacy_classes
from .group import BoundExceeded, NotInGroup, PermGroup
from .perm import Permutation
from .subgroups import Subgroup

OVERGROUP_ORDER_LIMIT = 1_000_000
COSET_INDEX_LIMIT = 1_000_000


@dataclass
class OvergroupSet:
    """The maximal subgroups of ``G`` containing ``anchor``.

    ``classes`` partitions ``members`` (by position) into ``G``-conjugacy
    classes of subgroups.
    """

    anchor: Permutation
    members: list[Subgroup]
    classes: list[list[int]] = field(default_factory=list)
    visited: int = 0

    def __len__(self) -> int:
        return len(self.members)

    def orders(self) -> list[int]:
        return sorted(m.order for m in self.members)


@dataclass
class FprTable:
    """``fpr(z, G/H)`` for every class ``z^G`` and each subgroup class representative ``H``."""

    class_labels: list[str]
    subgroup_orders: list[int]
    degrees: list[int]
    values: list[list[Fraction]]  # [subgroup][class]


def _index(G: PermGroup, x: Permutation) -> int:
    try:
        return G.table.index(x)
    except NotInGroup:
        raise NotInGroup(f"{x} is not an element of the group") from None


def _proper_children(table, L: Subgroup, S: np.ndarray, half: int):
    """Survivors ``S_L`` of ``S`` and the proper subgroups ``<L, h>`` they produce.

    ``<L, h>`` only depends on the double coset ``LhL``, so one ``h`` per
    double coset meeting ``S`` is tested.
    """
    S = S[~L.mask[S]]
    if len(S) == 0:
        return S, []
    maps = [table.left_mul_map(k) for k in L.gens] + [table.right_mul_map(k) for k in L.gens]
    labels = table.orbit_labels(maps)
    lab = labels[S]
    _, first = np.unique(lab, return_index=True)
    keep_labels = []
    children: dict[bytes, Subgroup] = {}
    for i in first:
        h = int(S[i])
        gens = list(L.gens) + [h]
        members = table.closure(gens, limit=half)
        if len(members) > half:
            continue
        keep_labels.append(lab[i])
        child = Subgroup(table, members, gens)
        children.setdefault(child.key, child)
    survivors = S[np.isin(lab, np.array(keep_labels, dtype=lab.dtype))]
    return survivors, list(children.values())


def maximal_overgroups(G: PermGroup, x: Permutation, limit: int = OVERGROUP_ORDER_LIMIT,
                       timeout: float | None = None) -> OvergroupSet:
    """All maximal subgroups of ``G`` containing ``x``."""
    if G.order > limit:
        raise BoundExceeded("maximal overgroup search", G.order, limit)
    table = G.table
    xi = _index(G, x)
    deadline = None if timeout is None else time.monotonic() + timeout
    half = G.order // 2
    start = Subgroup.generated(table, [xi] if xi != table.identity else [])
    if start.order == G.order:
        return OvergroupSet(x, [], [], 0)
    memo: dict[bytes, Subgroup] = {start.key: start}
    maximal: dict[bytes, Subgroup] = {}
    stack = [(start, np.arange(G.order, dtype=np.int64))]
    while stack:
        if deadline is not None and time.monotonic() > deadline:
            raise TimeoutError("maximal overgroup search timed out")
        K, S = stack.pop()
        SK, children = _proper_children(table, K, S, half)
        if len(SK) == 0:
            maximal[K.key] = K
            continue
        for child in children:
            if child.key not in memo:
                memo[child.key] = child
                stack.append((child, SK))
    members = sorted(maximal.values(), key=lambda s: (s.order, s.members.tolist()))
    return OvergroupSet(x, members, _subgroup_classes(G, members), len(memo))


def _subgroup_classes(G: PermGroup, subs: list[Subgroup]) -> list[list[int]]:
    """Group positions of ``subs`` into conjugacy classes of subgroups."""
    table = G.table
    key_pos = {s.key: i for i, s in enumerate(subs)}
    seen = set()
    out = []
    for i, s in enumerate(subs):
        if i in seen:
            continue
        # orbit of s under the generator conjugations
        orbit = {s.key: s}
        queue = [s]
        for t in queue:
            for mp in table.conj_gen_maps:
                u = Subgroup(table, np.sort(mp[t.members]), [int(mp[g]) for g in t.gens])
                if u.key not in orbit:
                    orbit[u.key] = u
                    queue.append(u)
        cls = sorted(key_pos[k] for k in orbit if k in key_pos)
        seen.update(cls)
        out.append(cls)
    return out


def conjugate_subgroups(G: PermGroup, H: Subgroup) -> list[Subgroup]:
    """All conjugates of ``H`` in ``G``."""
    table = G.table
    orbit = {H.key: H}
    queue = [H]
    for t in queue:
        for mp in table.conj_gen_maps:
            u = Subgroup(table, np.sort(mp[t.members]), [int(mp[g]) for g in t.gens])
            if u.key not in orbit:
                orbit[u.key] = u
                queue.append(u)
    return queue


def is_maximal(G: PermGroup, H: Subgroup, samples: int = 50, rng: random.Random | None = None) -> bool:
    """Spot check: ``<H, g> = G`` for random ``g`` outside ``H`` (exhaustive for small index)."""
    rng = rng or random.Random(0)
    table = G.table
    outside = np.nonzero(~H.mask)[0]
    if len(outside) == 0:
        return False
    picks = outside if len(outside) <= samples else [outside[rng.randrange(len(outside))] for _ in range(samples)]
    return all(table.generates(list(H.gens) + [int(g)]) for g in picks)


# --- fixed point ratios ---------------------------------------------------------

def _as_subgroup(G: PermGroup, H) -> Subgroup:
    if isinstance(H, Subgroup):
        return H
    table = G.table
    try:
        gens = [table.index(g) for g in H.generators]
    except NotInGroup:
        raise NotInGroup("H is not a subgroup of G") from None
    sub = Subgroup.generated(table, gens)
    if sub.order != H.order:
        raise RuntimeError("subgroup order mismatch")
    return sub


def fpr_intersection(G: PermGroup, C: ConjugacyClass, H) -> Fraction:
    """``|z^G ∩ H| / |z^G|``."""
    sub = _as_subgroup(G, H)
    hits = int(np.count_nonzero(sub.mask[C.members]))
    return Fraction(hits, C.size)


def coset_action(G: PermGroup, H: Subgroup) -> tuple[np.ndarray, np.ndarray]:
    """``(coset_of, rep)``: right coset label ``Hg`` of every element and one representative per coset.

    The result is memoized on ``H``.
    """
    cached = H.__dict__.get("_coset_action")
    if cached is not None:
        return cached
    table = G.table
    index = G.order // H.order
    if index > COSET_INDEX_LIMIT:
        raise BoundExceeded("coset action", index, COSET_INDEX_LIMIT)
    coset_of = np.full(G.order, -1, dtype=np.int64)
    reps = []
    for g in range(G.order):
        if coset_of[g] >= 0:
            continue
        # the coset Hg is the image of H under right multiplication by g
        members = table.right_mul_map(g, H.members)
        coset_of[members] = len(reps)
        reps.append(g)
    H.__dict__["_coset_action"] = (coset_of, np.array(reps, dtype=np.int64))
    return H.__dict__["_coset_action"]


def fpr_cosets(G: PermGroup, C: ConjugacyClass, H) -> Fraction:
    """Fixed cosets of the representative of ``C`` on ``G/H`` over ``|G:H|``."""
    sub = _as_subgroup(G, H)
    table = G.table
    coset_of, reps = coset_action(G, sub)
    z = C.rep_index
    images = coset_of[table.right_mul_map(z, reps)]
    fixed = int(np.count_nonzero(images == np.arange(len(reps))))
    return Fraction(fixed, len(reps))


def fpr(G: PermGroup, C: ConjugacyClass, H, check: bool = True) -> Fraction:
    """Fixed point ratio of ``C`` on ``G/H``, cross-checked by counting fixed cosets."""
    sub = _as_subgroup(G, H)
    a = fpr_intersection(G, C, sub)
    if check and G.order // sub.order <= COSET_INDEX_LIMIT:
        b = fpr_cosets(G, C, sub)
        if a != b:
            raise RuntimeError(f"fixed point ratio mismatch: {a} vs {b}")
    return a


def fpr_table(G: PermGroup, subgroups: list[Subgroup], check: bool = True) -> FprTable:
    classes = conjugacy_classes(G)
    values = [[fpr(G, c, H, check) for c in classes] for H in subgroups]
    return FprTable([c.label for c in classes], [H.order for H in subgroups],
                    [G.order // H.order for H in subgroups], values)


def prob_bound(G: PermGroup, x: Permutation, overgroups: OvergroupSet | None = None) -> dict[str, Fraction]:
    """``sum over H in M(x) of fpr(z, G/H)`` for every nontrivial class ``z^G``."""
    ovs = overgroups or maximal_overgroups(G, x)
    classes = conjugacy_classes(G)
    out = {}
    for c in classes:
        if c.order == 1:
            continue
        out[c.label] = sum((fpr_intersection(G, c, H) for H in ovs.members), Fraction(0))
    return out


# --- certificates ------------------------------------------------------------------

@dataclass
class UspreadCertificate:
    """Outcome of :func:`certify_uspread`; ``certified`` False is a refusal, not a disproof."""

    certified: bool
    mode: str
    label: str
    k: int
    max_value: Fraction
    worst_class: str | None
    values: dict[str, Fraction]
    runtime: float = 0.0

    @property
    def margin(self) -> Fraction:
        return Fraction(1, self.k) - self.max_value


def certify_uspread(G: PermGroup, C: ConjugacyClass, k: int, mode: str = "exact-P") -> UspreadCertificate:
    """Certify that ``C`` witnesses ``u(G) >= k`` when the relevant maximum is below ``1/k``.

    A ``k``-tuple fails to have a common partner in ``C`` with probability at
    most the sum over its entries of ``P(x_i, y)``, which is below 1 when each
    term is below ``1/k``.
    """
    from .genlib import exact_P_table

    t0 = time.monotonic()
    if k < 1:
        raise ValueError("k must be at least 1")
    x = C.representative
    if mode == "fpr-bound":
        values = prob_bound(G, x)
    elif mode == "exact-P":
        values = exact_P_table(G, x)
    else:
        raise ValueError("mode must be 'fpr-bound' or 'exact-P'")
    worst = max(values, key=lambda lab: (values[lab], lab)) if values else None
    top = values[worst] if worst else Fraction(0)
    return UspreadCertificate(top < Fraction(1, k), mode, C.label, k, top, worst, values,
                              time.monotonic() - t0)
