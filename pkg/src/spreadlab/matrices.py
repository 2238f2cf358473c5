"""Small matrices over :class:`~spreadlab.fields.GF`, stored as tuples of row tuples."""
from __future__ import annotations

from typing import Callable, Iterable, Sequence

from .fields import GF

Matrix = tuple  # tuple[tuple[int, ...], ...]


def mat(rows: Iterable[Iterable[int]]) -> Matrix:
    return tuple(tuple(int(v) for v in r) for r in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def diag(entries: Sequence[int]) -> Matrix:
    n = len(entries)
    return tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n))


def mul(F: GF, a: Matrix, b: Matrix) -> Matrix:
    n, m, r = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(r):
            s = 0
            for t in range(m):
                if a[i][t] and b[t][j]:
                    s = F.add(s, F.mul(a[i][t], b[t][j]))
            row.append(s)
        out.append(tuple(row))
    return tuple(out)


def power(F: GF, a: Matrix, e: int) -> Matrix:
    if e < 0:
        a, e = inverse(F, a), -e
    result = identity(len(a))
    while e:
        if e & 1:
            result = mul(F, result, a)
        a = mul(F, a, a)
        e >>= 1
    return result


def vec_mul(F: GF, v: Sequence[int], a: Matrix) -> tuple[int, ...]:
    """Row vector times matrix."""
    out = []
    for j in range(len(a[0])):
        s = 0
        for t, vt in enumerate(v):
            if vt and a[t][j]:
                s = F.add(s, F.mul(vt, a[t][j]))
        out.append(s)
    return tuple(out)


def mat_vec(F: GF, a: Matrix, v: Sequence[int]) -> tuple[int, ...]:
    """Matrix times column vector."""
    out = []
    for row in a:
        s = 0
        for x, vt in zip(row, v):
            if x and vt:
                s = F.add(s, F.mul(x, vt))
        out.append(s)
    return tuple(out)


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def entrywise(a: Matrix, f: Callable[[int], int]) -> Matrix:
    return tuple(tuple(f(x) for x in r) for r in a)


def frobenius(F: GF, a: Matrix, times: int = 1) -> Matrix:
    return entrywise(a, lambda x: F.frobenius(x, times))


def det(F: GF, a: Matrix) -> int:
    n = len(a)
    m = [list(r) for r in a]
    d = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = F.neg(d)
        d = F.mul(d, m[c][c])
        inv = F.inv(m[c][c])
        for r in range(c + 1, n):
            if m[r][c]:
                f = F.mul(m[r][c], inv)
                m[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(m[r], m[c])]
    return d


def inverse(F: GF, a: Matrix) -> Matrix:
    n = len(a)
    m = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(a)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[c], m[piv] = m[piv], m[c]
        inv = F.inv(m[c][c])
        m[c] = [F.mul(inv, x) for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(m[r], m[c])]
    return tuple(tuple(r[n:]) for r in m)


def normalize(F: GF, v: Sequence[int]) -> tuple[int, ...]:
    """Projective representative: scale so the first nonzero entry is 1."""
    for x in v:
        if x:
            inv = F.inv(x)
            return tuple(F.mul(inv, y) for y in v)
    raise ValueError("zero vector has no projective point")


def sl2_generators(F: GF) -> list[Matrix]:
    w = F.primitive
    return [
        mat([[w, 0], [0, F.inv(w)]]),
        mat([[1, 1], [0, 1]]),
        mat([[0, 1], [F.neg(1), 0]]),
    ]


def enumerate_group(F: GF, gens: Sequence[Matrix], limit: int = 10_000_000) -> list[Matrix]:
    """All elements of the matrix group generated by ``gens`` (BFS, bounded)."""
    from .group import BoundExceeded

    start = identity(len(gens[0]))
    seen = {start}
    queue = [start]
    for a in queue:
        for g in gens:
            b = mul(F, a, g)
            if b not in seen:
                seen.add(b)
                queue.append(b)
                if len(seen) > limit:
                    raise BoundExceeded("matrix group enumeration", len(seen), limit)
    return queue
