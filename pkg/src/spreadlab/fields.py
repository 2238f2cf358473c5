"""Finite fields GF(p^k) with integer-coded elements.

An element is the integer ``sum c_i p^i`` of its coefficient vector in the
polynomial basis ``1, x, ..., x^(k-1)`` modulo the defining polynomial.  The
defining polynomial is the least primitive monic polynomial of degree ``k``
(coefficients compared as base-``p`` integers, constant term lowest), so the
class of ``x`` is a primitive element and multiplication goes through
log/exp tables.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np
from numba import njit

FIELD_SIZE_LIMIT = 1 << 24


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and prime_factors(n) == [n]


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, k)`` with ``q = p^k``; raises ``ValueError`` otherwise."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    ps = prime_factors(q)
    if len(ps) != 1:
        raise ValueError(f"{q} is not a prime power")
    p = ps[0]
    k = 0
    while q > 1:
        q //= p
        k += 1
    return p, k


def _poly_mulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    k = len(f) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            for t in range(k + 1):
                prod[d - k + t] = (prod[d - k + t] - c * f[t]) % p
    out = prod[:k] + [0] * (k - len(prod[:k]))
    return out


def _x_power_is_one(e: int, f: list[int], p: int) -> bool:
    k = len(f) - 1
    result = [1] + [0] * (k - 1)
    base = ([0, 1] + [0] * (k - 2)) if k >= 2 else [(-f[0]) % p]
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, f, p)
        base = _poly_mulmod(base, base, f, p)
        e >>= 1
    return result == [1] + [0] * (k - 1)


def least_primitive_polynomial(p: int, k: int) -> tuple[int, ...]:
    """Coefficients (constant term first, monic) of the least primitive polynomial."""
    n = p ** k - 1
    rs = prime_factors(n)
    for code in range(1, p ** k):
        f = []
        c = code
        for _ in range(k):
            f.append(c % p)
            c //= p
        f.append(1)
        if f[0] == 0:
            continue
        if _x_power_is_one(n, f, p) and all(not _x_power_is_one(n // r, f, p) for r in rs):
            return tuple(f)
    raise RuntimeError("no primitive polynomial found")


@njit(cache=True)
def _build_exp(p, k, f, q):
    exp = np.empty(q - 1, dtype=np.int64)
    digits = np.zeros(k, dtype=np.int64)
    digits[0] = 1
    for i in range(q - 1):
        v = 0
        m = 1
        for t in range(k):
            v += digits[t] * m
            m *= p
        exp[i] = v
        top = digits[k - 1]
        for t in range(k - 1, 0, -1):
            digits[t] = digits[t - 1]
        digits[0] = 0
        if top:
            for t in range(k):
                digits[t] = (digits[t] - top * f[t]) % p
    return exp


class GF:
    """The field with ``q = p^k`` elements; use :func:`field` to get a shared instance."""

    def __init__(self, q: int):
        p, k = prime_power(q)
        if q > FIELD_SIZE_LIMIT:
            raise ValueError(f"field size {q} exceeds limit {FIELD_SIZE_LIMIT}")
        self.p, self.k, self.q = p, k, q
        self.poly = least_primitive_polynomial(p, k)
        self.exp = _build_exp(p, k, np.array(self.poly, dtype=np.int64), q)
        self.log = np.full(q, -1, dtype=np.int64)
        self.log[self.exp] = np.arange(q - 1, dtype=np.int64)
        if len(np.unique(self.exp)) != q - 1:
            raise RuntimeError("defining polynomial is not primitive")
        self._pw = [p ** t for t in range(k)]

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def descriptor(self) -> dict:
        return {"p": self.p, "k": self.k, "polynomial": list(self.poly)}

    @property
    def one(self) -> int:
        return 1

    @property
    def primitive(self) -> int:
        return int(self.exp[1 % (self.q - 1)]) if self.q > 2 else 1

    def digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def from_digits(self, d) -> int:
        return sum(int(c) % self.p * w for c, w in zip(d, self._pw))

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.k == 1:
            return (a + b) % self.p
        p = self.p
        out = 0
        w = 1
        for _ in range(self.k):
            out += ((a % p + b % p) % p) * w
            a //= p
            b //= p
            w *= p
        return out

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.k == 1:
            return (-a) % self.p
        return self.from_digits([-c for c in self.digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[(self.log[a] + self.log[b]) % (self.q - 1)])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return int(self.exp[(-self.log[a]) % (self.q - 1)])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 0
        return int(self.exp[(int(self.log[a]) * e) % (self.q - 1)])

    def frobenius(self, a: int, times: int = 1) -> int:
        return self.pow(a, self.p ** (times % self.k))

    def element_order(self, a: int) -> int:
        from math import gcd

        if a == 0:
            raise ValueError("zero has no multiplicative order")
        n = self.q - 1
        return n // gcd(n, int(self.log[a]))

    def is_square(self, a: int) -> bool:
        if a == 0 or self.p == 2:
            return True
        return int(self.log[a]) % 2 == 0

    def elements(self) -> range:
        return range(self.q)

    def scalar(self, n: int) -> int:
        """Image of the integer ``n`` in the prime field."""
        return n % self.p

    def subfield(self, r: int) -> list[int]:
        """Elements of the subfield with ``r`` elements."""
        p, a = prime_power(r)
        if p != self.p or self.k % a:
            raise ValueError(f"GF({r}) is not a subfield of GF({self.q})")
        return [0] + [x for x in range(1, self.q) if self.pow(x, r - 1) == 1]


@lru_cache(maxsize=None)
def field(q: int) -> GF:
    return GF(q)


@lru_cache(maxsize=None)
def embedding(small: int, big: int) -> tuple[int, ...]:
    """Field embedding GF(small) -> GF(big) as a lookup tuple indexed by element code."""
    F, K = field(small), field(big)
    if F.p != K.p or K.k % F.k:
        raise ValueError(f"GF({small}) does not embed in GF({big})")
    # find a root of the small field's defining polynomial in the big field
    poly = F.poly
    for c in K.subfield(small)[1:]:
        acc = 0
        for coef in reversed(poly):
            acc = K.add(K.mul(acc, c), coef % K.p)
        if acc == 0:
            root = c
            break
    else:
        raise RuntimeError("defining polynomial has no root in the extension")
    table = [0] * small
    for i in range(small - 1):
        table[int(F.exp[i])] = K.pow(root, i)
    return tuple(table)
