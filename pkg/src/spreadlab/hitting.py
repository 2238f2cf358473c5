"""Exact minimum hitting set by branch and bound over Python-int bitmasks.

Rows are sets of candidate positions (bit ``x`` of ``rows[i]`` set when
candidate ``x`` hits row ``i``).  A hitting set picks candidates so that every
row contains at least one of them.  The search branches on the smallest
uncovered row, which keeps the branching factor low, and prunes with a
disjoint-row packing bound.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

SUPERSET_LIMIT = 4000


class SolverTimeout(Exception):
    pass


@dataclass
class HitResult:
    """Outcome of a minimisation or decision run.

    ``size`` is the exact optimum when ``exact``; otherwise ``lower``/``upper``
    bracket it.  ``solution`` holds candidate positions of the best cover found.
    ``size`` is ``None`` when some row is empty (nothing can hit it).
    """

    size: int | None
    exact: bool
    lower: int
    upper: int | None
    solution: list[int] | None
    nodes: int = 0
    timed_out: bool = False


def bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass
class HittingSet:
    """A reduced hitting-set instance.

    ``origins[i]`` records which input row produced reduced row ``i``; the
    root symmetry callback receives it together with the candidate list.
    """

    rows: list[int]
    n_candidates: int
    origins: list[int] = field(default_factory=list)
    root_reps: Callable[[int, list[int]], list[int]] | None = None
    timeout: float | None = None

    @classmethod
    def build(cls, rows: Sequence[int], n_candidates: int,
              root_reps: Callable[[int, list[int]], list[int]] | None = None,
              timeout: float | None = None, remove_supersets: bool = True) -> "HittingSet":
        seen: dict[int, int] = {}
        for i, r in enumerate(rows):
            if r not in seen:
                seen[r] = i
        uniq = sorted(seen.items(), key=lambda t: (popcount(t[0]), t[1]))
        kept: list[tuple[int, int]] = []
        if remove_supersets and len(uniq) <= SUPERSET_LIMIT:
            for r, i in uniq:
                if not any(k & r == k for k, _ in kept):
                    kept.append((r, i))
        else:
            kept = uniq
        inst = cls([r for r, _ in kept], n_candidates, [i for _, i in kept], root_reps, timeout)
        return inst

    def __post_init__(self):
        self.cov = [0] * self.n_candidates
        for ri, r in enumerate(self.rows):
            for x in bits(r):
                self.cov[x] |= 1 << ri
        self.full = (1 << len(self.rows)) - 1
        self.nodes = 0
        self._deadline = None

    # --- bounds -------------------------------------------------------------

    def packing_bound(self, uncovered: int, stop: int | None = None) -> int:
        """Number of pairwise candidate-disjoint uncovered rows found greedily."""
        used = 0
        count = 0
        u = uncovered
        while u:
            low = u & -u
            r = self.rows[low.bit_length() - 1]
            if r & used == 0:
                used |= r
                count += 1
                if stop is not None and count > stop:
                    return count
            u ^= low
        return count

    def greedy(self, uncovered: int | None = None) -> list[int]:
        u = self.full if uncovered is None else uncovered
        chosen = []
        while u:
            best, best_c = -1, -1
            for x, c in enumerate(self.cov):
                pc = popcount(c & u)
                if pc > best_c:
                    best, best_c = x, pc
            chosen.append(best)
            u &= ~self.cov[best]
        return chosen

    def is_cover(self, chosen: Sequence[int]) -> bool:
        u = self.full
        for x in chosen:
            u &= ~self.cov[x]
        return u == 0

    # --- search -------------------------------------------------------------

    def _tick(self) -> None:
        self.nodes += 1
        if self._deadline is not None and (self.nodes & 255) == 0 and time.monotonic() > self._deadline:
            raise SolverTimeout()

    def _candidates(self, r: int, uncovered: int, root: bool) -> list[int]:
        cands = bits(self.rows[r])
        if root and self.root_reps is not None:
            cands = self.root_reps(self.origins[r], cands)
            return sorted(cands, key=lambda x: (-popcount(self.cov[x] & uncovered), x))
        # drop candidates whose coverage equals or is dominated by another's
        by_cov: dict[int, int] = {}
        for x in cands:
            c = self.cov[x] & uncovered
            if c not in by_cov:
                by_cov[c] = x
        items = sorted(by_cov.items(), key=lambda t: (-popcount(t[0]), t[1]))
        if len(items) * len(items) <= 40000:
            kept = []
            for c, x in items:
                if not any(c & k == c for k, _ in kept):
                    kept.append((c, x))
            items = kept
        return [x for _, x in items]

    def _search(self, uncovered: int, k: int, chosen: list[int], root: bool) -> list[int] | None:
        if uncovered == 0:
            return list(chosen)
        if k == 0:
            return None
        self._tick()
        low = uncovered & -uncovered
        r = low.bit_length() - 1
        if k == 1:
            acc = self.rows[r]
            u = uncovered ^ low
            while u and acc:
                b = u & -u
                acc &= self.rows[b.bit_length() - 1]
                u ^= b
            if acc:
                return chosen + [(acc & -acc).bit_length() - 1]
            return None
        if self.packing_bound(uncovered, stop=k) > k:
            return None
        for x in self._candidates(r, uncovered, root):
            chosen.append(x)
            res = self._search(uncovered & ~self.cov[x], k - 1, chosen, False)
            chosen.pop()
            if res is not None:
                return res
        return None

    def _start(self, timeout: float | None) -> None:
        t = self.timeout if timeout is None else timeout
        self._deadline = None if t is None else time.monotonic() + t

    def has_empty_row(self) -> bool:
        return any(r == 0 for r in self.rows)

    def decide(self, k: int, timeout: float | None = None) -> list[int] | None:
        """A hitting set of size at most ``k``, or ``None`` if none exists.

        Raises :class:`SolverTimeout` when the time budget runs out.
        """
        if self.has_empty_row():
            return None
        if not self.rows:
            return []
        self._start(timeout)
        return self._search(self.full, k, [], True)

    def minimize(self, timeout: float | None = None, known_lower: int = 0) -> HitResult:
        """Exact minimum hitting set by iterative deepening from the packing bound."""
        if self.has_empty_row():
            return HitResult(None, True, 0, None, None)
        if not self.rows:
            return HitResult(0, True, 0, 0, [])
        self._start(timeout)
        lower = max(known_lower, self.packing_bound(self.full), 1)
        best = self.greedy()
        upper = len(best)
        k = lower
        try:
            while k < upper:
                sol = self._search(self.full, k, [], True)
                if sol is not None:
                    return HitResult(k, True, k, k, sol, self.nodes)
                k += 1
                lower = k
        except SolverTimeout:
            return HitResult(None, False, lower, upper, best, self.nodes, True)
        return HitResult(upper, True, upper, upper, best, self.nodes)
