"""Matching ATLAS-style class names such as ``12C`` to computed classes.

ATLAS letters for a group ``G`` with simple socle ``G0`` and cyclic ``G/G0``
run over the ``G0``-classes of the given order first (ordered by decreasing
centralizer order, i.e. increasing size), then over the classes of the coset
``g G0`` of a designated outer generator.  Classes in the other outer cosets
carry primed names and are reported as algebraic companions.  Ties in class
size leave the letter ambiguous; all tied classes are returned and flagged.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .classes import ConjugacyClass, class_index_map, conjugacy_classes
from .constructions import GroupSpec

_LABEL = re.compile(r"^(\d+)([A-Z]+)$")


@dataclass
class Alignment:
    """Computed classes matching an ATLAS name.

    ``candidates`` are the classes the name may denote (one unless
    ``ambiguous``); ``companions`` are the matching classes in the other outer
    cosets, which carry the primed names.
    """

    label: str
    candidates: list[str]
    ambiguous: bool
    outer: bool
    companions: list[str] = field(default_factory=list)
    note: str = ""


def _letter_index(letters: str) -> int:
    n = 0
    for ch in letters:
        n = n * 26 + (ord(ch) - ord("A") + 1)
    return n - 1


def coset_index(spec: GroupSpec, element) -> int:
    """The ``i`` with ``element`` in ``g^i G0`` (``g`` the designated coset element)."""
    G0, g = spec.socle, spec.coset
    if G0 is None or g is None:
        raise ValueError(f"{spec.expression} has no designated socle and coset element")
    x = element
    ginv = g.inverse()
    i = 0
    while x not in G0:
        x = x * ginv
        i += 1
        if i > spec.order:
            raise RuntimeError("element outside every coset of the socle")
    return i


def _pick(ranked: list[ConjugacyClass], pos: int) -> tuple[list[ConjugacyClass], bool]:
    if pos >= len(ranked):
        return [], False
    size = ranked[pos].size
    tied = [c for c in ranked if c.size == size]
    return tied, len(tied) > 1


def align_label(spec: GroupSpec, label: str) -> Alignment:
    """Classes of ``spec.group`` that the ATLAS name ``label`` can denote."""
    m = _LABEL.match(label.strip().upper())
    if not m:
        raise ValueError(f"not a class name: {label!r}")
    order, idx = int(m.group(1)), _letter_index(m.group(2))
    G = spec.group
    classes = [c for c in conjugacy_classes(G) if c.order == order]
    if spec.socle is None or spec.socle.order == G.order:
        ranked = sorted(classes, key=lambda c: c.size)
        picked, amb = _pick(ranked, idx)
        return Alignment(label, [c.label for c in picked], amb, False,
                         note="" if picked else "no class with this name")
    G0 = spec.socle
    inner0 = sorted((c for c in conjugacy_classes(G0) if c.order == order), key=lambda c: c.size)
    if idx < len(inner0):
        tied0, amb = _pick(inner0, idx)
        cmap = class_index_map(G)
        all_classes = conjugacy_classes(G)
        hits = {all_classes[int(cmap[G.table.index(c.representative)])].label for c in tied0}
        return Alignment(label, sorted(hits), amb or len(hits) > 1, False)
    outer_pos = idx - len(inner0)
    by_coset: dict[int, list[ConjugacyClass]] = {}
    for c in classes:
        i = coset_index(spec, c.representative)
        if i:
            by_coset.setdefault(i, []).append(c)
    ranked = sorted(by_coset.get(1, []), key=lambda c: c.size)
    picked, amb = _pick(ranked, outer_pos)
    companions = []
    for i, cs in sorted(by_coset.items()):
        if i == 1:
            continue
        tied, _ = _pick(sorted(cs, key=lambda c: c.size), outer_pos)
        companions.extend(c.label for c in tied)
    note = "" if picked else "no outer class with this name"
    return Alignment(label, [c.label for c in picked], amb, True, companions, note)
