"""Enumerated element tables with compiled closure kernels.

Every element of a group is stored once, sorted by the integer key built from
its base images (a group element is determined by where it sends the base).
Subgroups, conjugation actions and generation tests then work on element
indices.  The BFS closure only ever needs base images of products, so one
product costs O(len(base)) instead of O(degree).
"""
from __future__ import annotations

import math
import random
from typing import Iterable, Sequence

import numpy as np
from numba import njit

from .group import BoundExceeded, NotInGroup, PermGroup
from .perm import Permutation


@njit(cache=True)
def _find(keys, k):
    lo = 0
    hi = keys.shape[0] - 1
    while lo <= hi:
        mid = (lo + hi) >> 1
        v = keys[mid]
        if v < k:
            lo = mid + 1
        elif v > k:
            hi = mid - 1
        else:
            return mid
    return -1


@njit(cache=True)
def _locate(keys, dense, k):
    if dense.shape[0] > 0:
        return dense[k]
    return _find(keys, k)


@njit(cache=True)
def _closure(perms, base, radix, keys, dense, gens, seeds, limit, visited, stamp, out):
    """Right-multiplication BFS from ``seeds``; returns the number reached.

    Stops early once more than ``limit`` elements are reached.
    """
    count = 0
    for s in seeds:
        if visited[s] != stamp:
            visited[s] = stamp
            out[count] = s
            count += 1
    head = 0
    nb = base.shape[0]
    while head < count:
        cur = out[head]
        head += 1
        for gi in range(gens.shape[0]):
            g = gens[gi]
            k = 0
            for t in range(nb):
                k += perms[g, perms[cur, base[t]]] * radix[t]
            j = _locate(keys, dense, k)
            if visited[j] != stamp:
                visited[j] = stamp
                out[count] = j
                count += 1
                if count > limit:
                    return count
    return count


@njit(cache=True)
def _pair_generates(perms, base, radix, keys, dense, ident, y, xs, half, visited, stamp0, out):
    res = np.zeros(xs.shape[0], dtype=np.bool_)
    gens = np.empty(2, dtype=np.int64)
    seeds = np.empty(1, dtype=np.int64)
    seeds[0] = ident
    stamp = stamp0
    for i in range(xs.shape[0]):
        gens[0] = y
        gens[1] = xs[i]
        c = _closure(perms, base, radix, keys, dense, gens, seeds, half, visited, stamp, out)
        res[i] = c > half
        stamp += 1
    return res


@njit(cache=True)
def _element_orders(perms):
    n = perms.shape[1]
    out = np.empty(perms.shape[0], dtype=np.int64)
    seen = np.zeros(n, dtype=np.int64)
    tag = 0
    for r in range(perms.shape[0]):
        tag += 1
        o = 1
        for s in range(n):
            if seen[s] == tag:
                continue
            length = 0
            j = s
            while seen[j] != tag:
                seen[j] = tag
                j = perms[r, j]
                length += 1
            a = o
            b = length
            while b:
                a, b = b, a % b
            o = o // a * length
        out[r] = o
    return out


# Key spaces up to this size get a direct key -> index array.
DENSE_KEY_LIMIT = 1 << 23


class ElementTable:
    """All elements of a :class:`PermGroup`, indexed by sorted base-image key."""

    def __init__(self, group: PermGroup):
        self.group = group
        self.n = group.degree
        self.order = group.order
        base = list(group.base) or [0]
        self.base = np.array(base, dtype=np.int64)
        if len(base) * math.log2(max(self.n, 2)) > 62:
            raise BoundExceeded("base-image key width", len(base), int(62 / math.log2(max(self.n, 2))))
        self.radix = np.array([self.n ** t for t in range(len(base))], dtype=np.int64)
        perms = group.element_arrays()
        keys = perms[:, self.base].astype(np.int64) @ self.radix
        order = np.argsort(keys, kind="stable")
        self.keys = keys[order]
        self.perms = np.ascontiguousarray(perms[order])
        if len(self.keys) > 1 and not np.all(np.diff(self.keys) > 0):
            raise RuntimeError("base images do not determine elements; stabilizer chain is inconsistent")
        span = self.n ** len(base)
        if span <= DENSE_KEY_LIMIT:
            self.dense = np.full(span, -1, dtype=np.int64)
            self.dense[self.keys] = np.arange(self.order, dtype=np.int64)
        else:
            self.dense = np.zeros(0, dtype=np.int64)
        self.identity = self.index_array(np.arange(self.n))
        self._visited = np.zeros(self.order, dtype=np.int64)
        self._stamp = 1
        self._out = np.empty(self.order + 1, dtype=np.int64)
        self._orders = None
        self._inverse = None
        self._conj_gen_maps = None
        self.gen_indices = np.array(
            [self.index(g) for g in group.generators] or [self.identity], dtype=np.int64)

    def __len__(self) -> int:
        return self.order

    def keys_of(self, arr: np.ndarray) -> np.ndarray:
        arr = np.atleast_2d(arr)
        return arr[:, self.base].astype(np.int64) @ self.radix

    def lookup_keys(self, keys: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self.keys, keys)
        idx = np.minimum(idx, len(self.keys) - 1)
        if not np.all(self.keys[idx] == keys):
            raise NotInGroup("element not in group")
        return idx

    def index_array(self, arr) -> int:
        arr = np.asarray(arr)
        i = int(self.lookup_keys(self.keys_of(arr))[0])
        if not np.array_equal(self.perms[i], arr):
            raise NotInGroup("element not in group")
        return i

    def index(self, p: Permutation) -> int:
        if p.degree != self.n:
            raise NotInGroup(f"degree {p.degree} does not match group degree {self.n}")
        return self.index_array(np.array(p.images, dtype=np.int64))

    def perm(self, i: int) -> Permutation:
        return Permutation._trusted(tuple(int(v) for v in self.perms[i]))

    @property
    def orders(self) -> np.ndarray:
        if self._orders is None:
            self._orders = _element_orders(self.perms)
        return self._orders

    @property
    def inverse(self) -> np.ndarray:
        if self._inverse is None:
            inv_base = np.empty((self.order, len(self.base)), dtype=np.int64)
            for t, b in enumerate(self.base):
                inv_base[:, t] = np.argmax(self.perms == b, axis=1)
            self._inverse = self.lookup_keys(inv_base @ self.radix)
        return self._inverse

    # --- index maps -------------------------------------------------------

    def right_mul_map(self, g: int, subset: np.ndarray | None = None) -> np.ndarray:
        rows = self.perms if subset is None else self.perms[subset]
        gp = self.perms[g]
        return self.lookup_keys(gp[rows[:, self.base]] @ self.radix)

    def left_mul_map(self, g: int, subset: np.ndarray | None = None) -> np.ndarray:
        rows = self.perms if subset is None else self.perms[subset]
        gb = self.perms[g][self.base]
        return self.lookup_keys(rows[:, gb].astype(np.int64) @ self.radix)

    def conj_map(self, g: int, subset: np.ndarray | None = None) -> np.ndarray:
        """Indices of ``x^g = g^-1 x g`` for every ``x`` (or those in ``subset``)."""
        rows = self.perms if subset is None else self.perms[subset]
        gp = self.perms[g]
        ginv_base = self.perms[self.inverse[g]][self.base]
        return self.lookup_keys(gp[rows[:, ginv_base]] @ self.radix)

    def mul(self, a: int, b: int) -> int:
        return int(self.right_mul_map(b, np.array([a]))[0])

    @property
    def conj_gen_maps(self) -> list[np.ndarray]:
        if self._conj_gen_maps is None:
            self._conj_gen_maps = [self.conj_map(int(g)) for g in self.gen_indices]
        return self._conj_gen_maps

    # --- closures -----------------------------------------------------------

    def _next_stamp(self, uses: int = 1) -> int:
        if self._stamp + uses >= 2**62:
            self._visited[:] = 0
            self._stamp = 1
        s = self._stamp
        self._stamp += uses
        return s

    def closure(self, gens: Iterable[int], seeds: Sequence[int] | None = None,
                limit: int | None = None) -> np.ndarray:
        """Sorted element indices of the subgroup generated by ``gens`` (and ``seeds``).

        With ``limit`` set, returns the partial set as soon as it exceeds ``limit``.
        """
        gens_arr = np.array(list(gens), dtype=np.int64)
        if gens_arr.size == 0:
            gens_arr = np.array([self.identity], dtype=np.int64)
        seeds_arr = np.array([self.identity] if seeds is None else list(seeds), dtype=np.int64)
        lim = self.order if limit is None else limit
        c = _closure(self.perms, self.base, self.radix, self.keys, self.dense, gens_arr, seeds_arr, lim,
                     self._visited, self._next_stamp(), self._out)
        return np.sort(self._out[:c].copy())

    def closure_size(self, gens: Iterable[int], limit: int | None = None) -> int:
        gens_arr = np.array(list(gens), dtype=np.int64)
        if gens_arr.size == 0:
            return 1
        seeds_arr = np.array([self.identity], dtype=np.int64)
        lim = self.order if limit is None else limit
        return int(_closure(self.perms, self.base, self.radix, self.keys, self.dense, gens_arr, seeds_arr, lim,
                            self._visited, self._next_stamp(), self._out))

    def generates(self, gens: Iterable[int]) -> bool:
        half = self.order // 2
        return self.closure_size(gens, limit=half) > half

    def generates_with(self, y: int, xs: np.ndarray) -> np.ndarray:
        """Boolean array: does ``<x, y>`` equal the whole group, for each ``x`` in ``xs``."""
        xs = np.asarray(xs, dtype=np.int64)
        if xs.size == 0:
            return np.zeros(0, dtype=bool)
        half = self.order // 2
        stamp = self._next_stamp(len(xs))
        return _pair_generates(self.perms, self.base, self.radix, self.keys, self.dense, self.identity,
                               int(y), xs, half, self._visited, stamp, self._out)

    # --- subgroup helpers -------------------------------------------------

    def centralizer(self, y: int) -> np.ndarray:
        a = self.right_mul_map(y)
        b = self.left_mul_map(y)
        return np.nonzero(a == b)[0]

    def generating_subset(self, members: np.ndarray, rng: random.Random | None = None) -> list[int]:
        """A short list of elements of ``members`` generating the subgroup they form."""
        members = np.asarray(members)
        size = len(members)
        rng = rng or random.Random(0)
        gens: list[int] = []
        current = np.array([self.identity])
        while len(current) < size:
            inside = np.isin(members, current, assume_unique=False)
            outside = members[~inside]
            cand = int(outside[rng.randrange(len(outside))])
            gens.append(cand)
            current = self.closure(gens)
        return gens

    def orbit_labels(self, maps: Sequence[np.ndarray]) -> np.ndarray:
        """Component label of every element under the index maps (acting on all of G)."""
        from scipy.sparse import coo_matrix
        from scipy.sparse.csgraph import connected_components

        m = self.order
        if not maps:
            return np.arange(m)
        r = np.tile(np.arange(m), len(maps))
        c = np.concatenate(list(maps))
        graph = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(m, m))
        return connected_components(graph, directed=True, connection="weak")[1]

    def orbits_under(self, maps: Sequence[np.ndarray], subset: np.ndarray) -> list[np.ndarray]:
        """Orbits on ``subset`` of the group generated by the index maps ``maps``.

        ``subset`` must be invariant under every map.  Orbits are returned in
        order of their least element, each sorted.
        """
        from scipy.sparse import coo_matrix
        from scipy.sparse.csgraph import connected_components

        subset = np.asarray(subset, dtype=np.int64)
        m = len(subset)
        if m == 0:
            return []
        pos = np.full(self.order, -1, dtype=np.int64)
        pos[subset] = np.arange(m)
        rows, cols = [], []
        for mp in maps:
            img = pos[mp[subset]]
            if np.any(img < 0):
                raise ValueError("subset is not invariant under the action")
            rows.append(np.arange(m))
            cols.append(img)
        if rows:
            r = np.concatenate(rows)
            c = np.concatenate(cols)
        else:
            r = c = np.zeros(0, dtype=np.int64)
        graph = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(m, m))
        _, labels = connected_components(graph, directed=True, connection="weak")
        order = np.argsort(labels, kind="stable")
        splits = np.nonzero(np.diff(labels[order]))[0] + 1
        groups = [subset[g] for g in np.split(order, splits)]
        groups = [np.sort(g) for g in groups]
        groups.sort(key=lambda g: int(g[0]))
        return groups
