"""Permutation groups backed by a deterministic Schreier-Sims stabilizer chain."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .perm import Permutation


class BoundExceeded(RuntimeError):
    """A computation was refused because the input exceeds a configured limit."""

    def __init__(self, what: str, size: int, limit: int):
        super().__init__(f"{what}: size {size} exceeds configured limit {limit}")
        self.what = what
        self.size = size
        self.limit = limit


class NotInGroup(ValueError):
    pass


# Element-table limits: number of elements and total stored images.
TABLE_ORDER_LIMIT = 2_000_000
TABLE_CELL_LIMIT = 60_000_000


@dataclass
class _Level:
    point: int
    gens: list = field(default_factory=list)
    trans: dict = field(default_factory=dict)
    trans_inv: dict = field(default_factory=dict)
    checked: set = field(default_factory=set)


def _inv(a: np.ndarray) -> np.ndarray:
    out = np.empty_like(a)
    out[a] = np.arange(len(a), dtype=a.dtype)
    return out


def _is_id(a: np.ndarray, ident: np.ndarray) -> bool:
    return bool(np.array_equal(a, ident))


def _extend_orbit(level: _Level) -> None:
    queue = list(level.trans)
    k = 0
    while k < len(queue):
        p = queue[k]
        k += 1
        u = level.trans[p]
        for s in level.gens:
            q = int(s[p])
            if q not in level.trans:
                v = s[u]
                level.trans[q] = v
                level.trans_inv[q] = _inv(v)
                queue.append(q)


def _new_level(point: int, n: int) -> _Level:
    ident = np.arange(n, dtype=np.int32)
    lvl = _Level(point)
    lvl.trans[point] = ident
    lvl.trans_inv[point] = ident
    return lvl


def _sift(levels: list[_Level], g: np.ndarray, start: int) -> tuple[np.ndarray, int]:
    for i in range(start, len(levels)):
        lvl = levels[i]
        p = int(g[lvl.point])
        uinv = lvl.trans_inv.get(p)
        if uinv is None:
            return g, i
        g = uinv[g]
    return g, len(levels)


def schreier_sims(gens: Sequence[np.ndarray], n: int) -> list[_Level]:
    """Deterministic Schreier-Sims; returns the stabilizer chain levels."""
    ident = np.arange(n, dtype=np.int32)
    gens = [np.asarray(g, dtype=np.int32) for g in gens]
    gens = [g for g in gens if not _is_id(g, ident)]
    levels: list[_Level] = []
    if not gens:
        return levels
    for g in gens:
        if not any(int(g[lvl.point]) != lvl.point for lvl in levels):
            moved = int(np.nonzero(g != ident)[0][0])
            levels.append(_new_level(moved, n))
    levels[0].gens = list(gens)
    _extend_orbit(levels[0])
    i = len(levels) - 1
    while i >= 0:
        lvl = levels[i]
        found = False
        for p in list(lvl.trans):
            u = lvl.trans[p]
            for gi, s in enumerate(lvl.gens):
                if (p, gi) in lvl.checked:
                    continue
                lvl.checked.add((p, gi))
                q = int(s[p])
                h = lvl.trans_inv[q][s[u]]
                if _is_id(h, ident):
                    continue
                r, j = _sift(levels, h, i + 1)
                if _is_id(r, ident):
                    continue
                if j == len(levels):
                    moved = int(np.nonzero(r != ident)[0][0])
                    levels.append(_new_level(moved, n))
                for l in range(i + 1, j + 1):
                    levels[l].gens.append(r)
                    _extend_orbit(levels[l])
                i = j
                found = True
                break
            if found:
                break
        if not found:
            i -= 1
    return levels


class PermGroup:
    """A permutation group with a verified stabilizer chain.

    Handles are immutable after construction; the element table and class
    data are computed lazily and cached.
    """

    def __init__(self, generators: Sequence[Permutation], degree: int | None = None,
                 name: str | None = None):
        gens = list(generators)
        if degree is None:
            if not gens:
                raise ValueError("degree required for an empty generating set")
            degree = gens[0].degree
        if degree < 1:
            raise ValueError("group degree must be at least 1")
        for g in gens:
            if not isinstance(g, Permutation):
                raise TypeError("generators must be Permutation instances")
            if g.degree != degree:
                raise ValueError(f"generator degree {g.degree} != {degree}")
        self.degree = degree
        self.generators: list[Permutation] = gens
        self.name = name
        self._levels = schreier_sims([g.array for g in gens], degree)
        self.base: list[int] = [lvl.point for lvl in self._levels]
        self.order: int = math.prod(len(lvl.trans) for lvl in self._levels)
        self._table = None
        self._cache: dict = {}

    def __repr__(self) -> str:
        label = self.name or f"<{len(self.generators)} generators>"
        return f"PermGroup({label}, order={self.order}, degree={self.degree})"

    @property
    def transversal_sizes(self) -> list[int]:
        return [len(lvl.trans) for lvl in self._levels]

    @property
    def strong_generators(self) -> list[Permutation]:
        seen = {}
        for lvl in self._levels:
            for g in lvl.gens:
                p = Permutation.from_array(g)
                seen.setdefault(p, None)
        return list(seen)

    def contains(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            return False
        r, j = _sift(self._levels, p.array, 0)
        return j == len(self._levels) and bool(np.array_equal(r, np.arange(self.degree)))

    __contains__ = contains

    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def random_element(self, rng: random.Random) -> Permutation:
        g = np.arange(self.degree, dtype=np.int32)
        for lvl in reversed(self._levels):
            u = lvl.trans[rng.choice(sorted(lvl.trans))]
            g = u[g]
        return Permutation.from_array(g)

    def is_abelian(self) -> bool:
        gs = self.generators
        return all(a * b == b * a for a in gs for b in gs)

    def orbit(self, point: int) -> list[int]:
        seen = {point}
        queue = [point]
        for p in queue:
            for g in self.generators:
                q = g.images[p]
                if q not in seen:
                    seen.add(q)
                    queue.append(q)
        return sorted(seen)

    def element_arrays(self) -> np.ndarray:
        """All elements as an ``(order, degree)`` int32 array (unordered)."""
        cells = self.order * self.degree
        if self.order > TABLE_ORDER_LIMIT or cells > TABLE_CELL_LIMIT:
            raise BoundExceeded("element enumeration", self.order, TABLE_ORDER_LIMIT)
        elems = np.arange(self.degree, dtype=np.int32)[None, :]
        for lvl in reversed(self._levels):
            reps = [lvl.trans[p] for p in sorted(lvl.trans)]
            elems = np.concatenate([u[elems] for u in reps], axis=0)
        return elems

    @property
    def table(self):
        """The cached :class:`~spreadlab.elements.ElementTable` of this group."""
        if self._table is None:
            from .elements import ElementTable

            self._table = ElementTable(self)
        return self._table

    def index_of(self, p: Permutation) -> int:
        return self.table.index(p)


def build_group(generators: Iterable[Permutation], degree: int | None = None,
                name: str | None = None) -> PermGroup:
    """Construct a group handle; the stabilizer chain is built eagerly."""
    return PermGroup(list(generators), degree=degree, name=name)
