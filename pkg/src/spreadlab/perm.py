"""Permutations on {0, ..., n-1}.

Products compose left to right, so ``(x * y)`` applies ``x`` first.  This
matches the exponent notation ``x^g = g^-1 x g`` used for conjugation.
User-facing text is 1-indexed cycle notation, e.g. ``"(1,2,3)(4,5)"``.
"""
from __future__ import annotations

import math
import re
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class Permutation:
    """An immutable permutation stored as its image tuple."""

    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int]):
        images = tuple(int(i) for i in images)
        n = len(images)
        if n == 0:
            raise ValueError("permutation degree must be at least 1")
        if sorted(images) != list(range(n)):
            raise ValueError(f"not a bijection on {n} points: {images}")
        self.images = images
        self._hash = hash(images)

    @classmethod
    def _trusted(cls, images: tuple[int, ...]) -> "Permutation":
        p = object.__new__(cls)
        p.images = images
        p._hash = hash(images)
        return p

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        if n < 1:
            raise ValueError("permutation degree must be at least 1")
        return cls._trusted(tuple(range(n)))

    @classmethod
    def from_array(cls, arr) -> "Permutation":
        return cls(np.asarray(arr).tolist())

    @classmethod
    def from_cycles(cls, cycles: str | Sequence[Sequence[int]], degree: int) -> "Permutation":
        """Build from 1-indexed cycles, either text like ``"(1,2)(3,4,5)"`` or nested lists."""
        if isinstance(cycles, str):
            text = cycles.replace(" ", "")
            if text in ("", "()", "1", "id"):
                parsed: list[list[int]] = []
            else:
                stripped = _CYCLE_RE.sub("", text)
                if stripped:
                    raise ValueError(f"cannot parse cycle notation: {cycles!r}")
                parsed = []
                for body in _CYCLE_RE.findall(text):
                    if body:
                        parsed.append([int(tok) for tok in body.split(",")])
        else:
            parsed = [list(c) for c in cycles]
        images = list(range(degree))
        seen: set[int] = set()
        for cyc in parsed:
            for pt in cyc:
                if not 1 <= pt <= degree:
                    raise ValueError(f"point {pt} outside 1..{degree}")
                if pt in seen:
                    raise ValueError(f"point {pt} repeated in {cycles!r}")
                seen.add(pt)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                images[a - 1] = b - 1
        return cls._trusted(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.images, dtype=np.int32)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if not isinstance(other, Permutation):
            return NotImplemented
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        o = other.images
        return Permutation._trusted(tuple(o[i] for i in self.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation._trusted(tuple(inv))

    def __invert__(self) -> "Permutation":
        return self.inverse()

    def __pow__(self, k: int) -> "Permutation":
        if k < 0:
            return self.inverse() ** (-k)
        result = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self, g: "Permutation") -> "Permutation":
        """Return ``g^-1 * self * g``."""
        return g.inverse() * self * g

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, 0-indexed, each starting at its least point."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = self.images[start]
            while j != start:
                seen[j] = True
                cyc.append(j)
                j = self.images[j]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def order(self) -> int:
        return reduce(math.lcm, (len(c) for c in self.cycles()), 1)

    def support(self) -> list[int]:
        return [i for i, j in enumerate(self.images) if i != j]

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + ",".join(str(p + 1) for p in c) + ")" for c in cyc)

    def __repr__(self) -> str:
        return f"Permutation({self}, degree={self.degree})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __hash__(self) -> int:
        return self._hash


def parse_perm(text: str, degree: int) -> Permutation:
    return Permutation.from_cycles(text, degree)
