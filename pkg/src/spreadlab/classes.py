"""Conjugacy classes, centralizers, normal subgroups and quotient tests."""
from __future__ import annotations

import string
from dataclasses import dataclass, field

import numpy as np

from .group import BoundExceeded, PermGroup
from .perm import Permutation
from .subgroups import Subgroup, generated_by_set, trivial_subgroup, whole_group

CLASS_ORDER_LIMIT = 2_000_000
NORMAL_SUBGROUP_LIMIT = 1_000_000


@dataclass(eq=False)
class ConjugacyClass:
    """One conjugacy class; ``members`` holds sorted element-table indices."""

    representative: Permutation
    size: int
    order: int
    label: str
    rep_index: int
    members: np.ndarray = field(repr=False)
    group_order: int = field(repr=False, default=0)

    @property
    def centralizer_order(self) -> int:
        return self.group_order // self.size

    @property
    def cycle_type(self) -> tuple[int, ...]:
        return self.representative.cycle_type()

    def __contains__(self, i: int) -> bool:
        j = np.searchsorted(self.members, i)
        return j < len(self.members) and int(self.members[j]) == i


def _letters(i: int) -> str:
    up = string.ascii_uppercase
    out = ""
    i += 1
    while i:
        i, r = divmod(i - 1, 26)
        out = up[r] + out
    return out


def lex_rank(table) -> np.ndarray:
    """Rank of each element in lexicographic order of image arrays."""
    cols = tuple(table.perms[:, j] for j in reversed(range(table.n)))
    order = np.lexsort(cols)
    rank = np.empty(table.order, dtype=np.int64)
    rank[order] = np.arange(table.order)
    return rank


def conjugacy_classes(G: PermGroup, limit: int = CLASS_ORDER_LIMIT) -> list[ConjugacyClass]:
    """All conjugacy classes of ``G`` with canonical labels, identity class first.

    Classes are the orbits of the generator conjugation maps on the element
    table.  Labels sort classes by element order, class size and least
    representative in image-tuple order.
    """
    if "classes" in G._cache:
        return G._cache["classes"]
    if G.order > limit:
        raise BoundExceeded("conjugacy class enumeration", G.order, limit)
    table = G.table
    orbits = table.orbits_under(table.conj_gen_maps, np.arange(table.order))
    rank = lex_rank(table)
    orders = table.orders
    info = []
    for orb in orbits:
        rep = int(orb[np.argmin(rank[orb])])
        info.append((int(orders[rep]), len(orb), int(rank[rep]), rep, orb))
    info.sort(key=lambda t: t[:3])
    per_order: dict[int, int] = {}
    classes = []
    for o, size, _, rep, orb in info:
        k = per_order.get(o, 0)
        per_order[o] = k + 1
        classes.append(ConjugacyClass(table.perm(rep), size, o, f"{o}{_letters(k)}", rep, orb, G.order))
    G._cache["classes"] = classes
    return classes


def class_index_map(G: PermGroup) -> np.ndarray:
    """Array mapping each element index to the position of its class."""
    if "class_of" not in G._cache:
        out = np.empty(G.order, dtype=np.int64)
        for ci, c in enumerate(conjugacy_classes(G)):
            out[c.members] = ci
        G._cache["class_of"] = out
    return G._cache["class_of"]


def class_of(G: PermGroup, x: Permutation) -> ConjugacyClass:
    return conjugacy_classes(G)[int(class_index_map(G)[G.table.index(x)])]


def class_by_label(G: PermGroup, label: str) -> ConjugacyClass:
    for c in conjugacy_classes(G):
        if c.label == label:
            return c
    raise KeyError(f"no class labelled {label!r}")


def centralizer_order(G: PermGroup, x: Permutation) -> int:
    """``|C_G(x)|``; raises :class:`NotInGroup` when ``x`` is not in ``G``."""
    i = G.table.index(x)
    return len(G.table.centralizer(i))


def normal_closure(G: PermGroup, elements: np.ndarray) -> Subgroup:
    """Smallest normal subgroup containing the given union of classes."""
    table = G.table
    sub = generated_by_set(table, elements)
    # the input is a union of classes, so the generated subgroup is normal;
    # otherwise conjugate generators until stable
    while not sub.is_normal():
        extra = np.concatenate([mp[sub.members] for mp in table.conj_gen_maps])
        sub = generated_by_set(table, np.concatenate([sub.members, extra]))
    return sub


def _join(table, a: Subgroup, b: Subgroup) -> Subgroup:
    if a.is_subgroup_of(b):
        return b
    if b.is_subgroup_of(a):
        return a
    gens = list(a.gens)
    mask = a.mask.copy()
    members = a.members
    for g in b.gens:
        if not mask[g]:
            gens.append(g)
            members = table.closure(gens)
            mask[:] = False
            mask[members] = True
    return Subgroup(table, members, gens)


def normal_subgroup_list(G: PermGroup, limit: int = NORMAL_SUBGROUP_LIMIT) -> list[Subgroup]:
    """All normal subgroups as index sets, sorted by order then members."""
    if "normal" in G._cache:
        return G._cache["normal"]
    if G.order > limit:
        raise BoundExceeded("normal subgroup enumeration", G.order, limit)
    table = G.table
    found: dict[bytes, Subgroup] = {}
    triv = trivial_subgroup(table)
    found[triv.key] = triv
    for c in conjugacy_classes(G)[1:]:
        n = normal_closure(G, c.members)
        found.setdefault(n.key, n)
    queue = list(found.values())
    while queue:
        new = []
        current = list(found.values())
        for a in queue:
            for b in current:
                j = _join(table, a, b)
                if j.key not in found:
                    found[j.key] = j
                    new.append(j)
                    current.append(j)
        queue = new
    whole = whole_group(table)
    found.setdefault(whole.key, whole)
    result = sorted(found.values(), key=lambda s: (s.order, s.members.tolist()))
    G._cache["normal"] = result
    return result


def normal_subgroups(G: PermGroup, limit: int = NORMAL_SUBGROUP_LIMIT) -> list[PermGroup]:
    """All normal subgroups of ``G`` as groups, including 1 and ``G``."""
    return [s.as_group() for s in normal_subgroup_list(G, limit)]


def minimal_normal_subgroups(G: PermGroup) -> list[Subgroup]:
    subs = normal_subgroup_list(G)
    nontriv = [s for s in subs if s.order > 1]
    return [s for s in nontriv
            if not any(t.order < s.order and t.is_subgroup_of(s) for t in nontriv)]


def quotient_is_cyclic(G: PermGroup, N: Subgroup) -> bool:
    """Whether ``G/N`` is cyclic: some single coset together with ``N`` generates ``G``."""
    table = G.table
    if N.order == G.order:
        return True
    for c in conjugacy_classes(G):
        if table.generates(list(N.gens) + [c.rep_index]):
            return True
    return False


def every_proper_quotient_cyclic(G: PermGroup) -> bool:
    """True iff ``G/N`` is cyclic for every nontrivial normal subgroup ``N``."""
    return all(quotient_is_cyclic(G, N) for N in normal_subgroup_list(G) if N.order > 1)


def is_cyclic(G: PermGroup) -> bool:
    if G.order == 1:
        return True
    if not G.is_abelian():
        return False
    return bool(np.any(G.table.orders == G.order))
