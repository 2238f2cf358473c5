"""Subgroups of an enumerated group, stored as sorted element-index arrays."""
from __future__ import annotations

import hashlib
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .elements import ElementTable
from .group import PermGroup
from .perm import Permutation


class Subgroup:
    """A subgroup of the group behind ``table``.

    ``members`` is the sorted index array of its elements; ``gens`` a generating
    list of element indices.
    """

    __slots__ = ("table", "members", "gens", "__dict__")

    def __init__(self, table: ElementTable, members: np.ndarray, gens: Sequence[int]):
        self.table = table
        self.members = np.asarray(members, dtype=np.int64)
        self.gens = tuple(int(g) for g in gens)

    @classmethod
    def generated(cls, table: ElementTable, gens: Iterable[int]) -> "Subgroup":
        gens = [int(g) for g in gens]
        return cls(table, table.closure(gens), gens)

    @property
    def order(self) -> int:
        return len(self.members)

    @cached_property
    def key(self) -> bytes:
        return hashlib.blake2b(self.members.tobytes(), digest_size=16).digest()

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.table.order, dtype=bool)
        m[self.members] = True
        return m

    def contains_index(self, i: int) -> bool:
        j = np.searchsorted(self.members, i)
        return j < len(self.members) and int(self.members[j]) == i

    def contains(self, p: Permutation) -> bool:
        return self.contains_index(self.table.index(p))

    __contains__ = contains

    def is_subgroup_of(self, other: "Subgroup") -> bool:
        return bool(np.all(other.mask[self.members]))

    @property
    def generators(self) -> list[Permutation]:
        return [self.table.perm(g) for g in self.gens]

    def as_group(self, name: str | None = None) -> PermGroup:
        gens = self.generators or [Permutation.identity(self.table.n)]
        return PermGroup(gens, degree=self.table.n, name=name)

    def conjugate(self, g: int) -> "Subgroup":
        members = np.sort(self.table.conj_map(g, self.members))
        gens = self.table.conj_map(g, np.array(self.gens, dtype=np.int64)) if self.gens else []
        return Subgroup(self.table, members, [int(x) for x in gens])

    def is_normal(self) -> bool:
        return all(bool(np.all(self.mask[mp[self.members]])) for mp in self.table.conj_gen_maps)

    def __eq__(self, other) -> bool:
        return isinstance(other, Subgroup) and other.table is self.table and np.array_equal(
            self.members, other.members)

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order})"


def whole_group(table: ElementTable) -> Subgroup:
    return Subgroup(table, np.arange(table.order, dtype=np.int64), table.gen_indices)


def trivial_subgroup(table: ElementTable) -> Subgroup:
    return Subgroup(table, np.array([table.identity], dtype=np.int64), [])


def generated_by_set(table: ElementTable, elements: np.ndarray) -> Subgroup:
    """Subgroup generated by an index set, adding generators only as needed."""
    elements = np.asarray(elements, dtype=np.int64)
    gens: list[int] = []
    current = np.array([table.identity], dtype=np.int64)
    mask = np.zeros(table.order, dtype=bool)
    mask[current] = True
    for e in elements:
        if not mask[e]:
            gens.append(int(e))
            current = table.closure(gens)
            mask[:] = False
            mask[current] = True
    return Subgroup(table, current, gens)
