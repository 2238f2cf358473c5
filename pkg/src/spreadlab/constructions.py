"""Named group constructors and the constructor-expression grammar.

Grammar (whitespace-insensitive)::

    spec   := name "(" args ")" [":" int]  |  "M10"
    args   := arg ("," arg)*
    arg    := int | spec | cycles
    cycles := "(" ints ")" ...  |  "()"

Supported names: Cyclic(n), ElemAbelian(p,d), Sym(n), Alt(n), Dihedral(n),
Frobenius(p,r), PSL(2,q), PGL(2,q), PGammaL(2,q), PSU(3,q), PSU(3,q):2,
Sz(q), Sz(q):f, M10, Wr(spec,k), Gk(spec,cycles,k), Direct(spec,spec).
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Callable, Sequence

from . import matrices as M
from .fields import GF, field, is_prime, prime_power
from .group import BoundExceeded, PermGroup
from .perm import Permutation


class SpecError(ValueError):
    """Raised for unparsable expressions or unsupported parameters."""


@dataclass(eq=False)
class GroupSpec:
    """A resolved constructor expression.

    ``socle`` is a designated normal subgroup (usually the socle) and
    ``coset`` an element generating ``group`` modulo it, when known.
    """

    expression: str
    group: PermGroup
    socle: PermGroup | None = None
    coset: Permutation | None = None
    expected_order: int | None = None
    notes: dict = dc_field(default_factory=dict)

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def degree(self) -> int:
        return self.group.degree


def _check_order(spec: GroupSpec) -> GroupSpec:
    if spec.expected_order is not None and spec.group.order != spec.expected_order:
        raise RuntimeError(
            f"{spec.expression}: constructed order {spec.group.order} != expected {spec.expected_order}")
    if spec.socle is not None:
        N = spec.socle
        if not all(s.conj(g) in N for g in spec.group.generators for s in N.generators):
            raise RuntimeError(f"{spec.expression}: designated socle is not normal")
    return spec


def _cycle(points: Sequence[int], n: int) -> Permutation:
    img = list(range(n))
    for a, b in zip(points, list(points[1:]) + [points[0]]):
        img[a] = b
    return Permutation(img)


def _prune(gens: list[Permutation], degree: int) -> list[Permutation]:
    """Drop generators already in the group generated by the earlier ones."""
    kept: list[Permutation] = []
    current = None
    for g in gens:
        if g.is_identity():
            continue
        if current is not None and g in current:
            continue
        kept.append(g)
        current = PermGroup(kept, degree=degree)
    return kept or [Permutation.identity(degree)]


# --- elementary families ----------------------------------------------------

def cyclic(n: int) -> GroupSpec:
    if n < 1:
        raise SpecError("Cyclic(n) needs n >= 1")
    g = _cycle(list(range(n)), n) if n > 1 else Permutation.identity(1)
    grp = PermGroup([g], degree=n, name=f"Cyclic({n})")
    return GroupSpec(f"Cyclic({n})", grp, expected_order=n)


def elem_abelian(p: int, d: int) -> GroupSpec:
    if not is_prime(p) or d < 1:
        raise SpecError("ElemAbelian(p,d) needs p prime and d >= 1")
    n = p * d
    gens = [_cycle(list(range(i * p, (i + 1) * p)), n) for i in range(d)]
    return GroupSpec(f"ElemAbelian({p},{d})", PermGroup(gens, degree=n, name=f"ElemAbelian({p},{d})"),
                     expected_order=p ** d)


def symmetric(n: int) -> GroupSpec:
    if n < 1:
        raise SpecError("Sym(n) needs n >= 1")
    if n == 1:
        gens = [Permutation.identity(1)]
    elif n == 2:
        gens = [_cycle([0, 1], 2)]
    else:
        gens = [_cycle(list(range(n)), n), _cycle([0, 1], n)]
    grp = PermGroup(gens, degree=n, name=f"Sym({n})")
    spec = GroupSpec(f"Sym({n})", grp, expected_order=math.factorial(n))
    if n >= 5:
        spec.socle = alternating(n).group
        spec.coset = _cycle([0, 1], n)
    return spec


def alternating(n: int) -> GroupSpec:
    if n < 1:
        raise SpecError("Alt(n) needs n >= 1")
    if n < 3:
        gens = [Permutation.identity(n)]
    elif n % 2:
        gens = [_cycle([0, 1, 2], n), _cycle(list(range(n)), n)]
    else:
        gens = [_cycle([0, 1, 2], n), _cycle(list(range(1, n)), n)]
    grp = PermGroup(gens, degree=n, name=f"Alt({n})")
    return GroupSpec(f"Alt({n})", grp, expected_order=max(1, math.factorial(n) // 2))


def dihedral(n: int) -> GroupSpec:
    """Symmetries of the n-gon: degree n, order 2n."""
    if n < 3:
        raise SpecError("Dihedral(n) needs n >= 3")
    rot = _cycle(list(range(n)), n)
    ref = Permutation([(-i) % n for i in range(n)])
    # the rotations are a minimal normal subgroup only for prime n
    socle = PermGroup([rot], degree=n) if is_prime(n) else None
    return GroupSpec(f"Dihedral({n})", PermGroup([rot, ref], degree=n, name=f"Dihedral({n})"),
                     socle=socle, coset=ref if socle else None, expected_order=2 * n)


def frobenius_group(p: int, r: int) -> GroupSpec:
    """The affine group ``x -> a x + b`` on GF(p) with ``a`` of order ``r``."""
    if not is_prime(p) or r < 1 or (p - 1) % r:
        raise SpecError("Frobenius(p,r) needs p prime and r dividing p-1")
    a = next(a for a in range(1, p) if pow(a, r, p) == 1 and all(pow(a, d, p) != 1 for d in range(1, r)))
    t = Permutation([(i + 1) % p for i in range(p)])
    m = Permutation([(a * i) % p for i in range(p)])
    grp = PermGroup([t, m], degree=p, name=f"Frobenius({p},{r})")
    return GroupSpec(f"Frobenius({p},{r})", grp, socle=PermGroup([t], degree=p), coset=m,
                     expected_order=p * r)


# --- actions of matrix groups ------------------------------------------------

def _projective_points(F: GF, dim: int) -> list[tuple[int, ...]]:
    pts = []
    for lead in range(dim):
        for code in range(F.q ** (dim - lead - 1)):
            tail = []
            c = code
            for _ in range(dim - lead - 1):
                tail.append(c % F.q)
                c //= F.q
            pts.append(tuple([0] * lead + [1] + tail[::-1]))
    return pts


def _action(points: list[tuple[int, ...]], maps: Sequence[Callable[[tuple[int, ...]], tuple[int, ...]]]
            ) -> list[Permutation]:
    index = {p: i for i, p in enumerate(points)}
    perms = []
    for f in maps:
        perms.append(Permutation([index[f(p)] for p in points]))
    return perms


def _linear(F: GF, a: M.Matrix):
    return lambda v: M.normalize(F, M.vec_mul(F, v, a))


def _semilinear(F: GF, a: M.Matrix, times: int):
    return lambda v: M.normalize(F, M.vec_mul(F, tuple(F.frobenius(x, times) for x in v), a))


def _orbit(F: GF, start: tuple[int, ...], maps) -> list[tuple[int, ...]]:
    seen = {start}
    queue = [start]
    for v in queue:
        for f in maps:
            w = f(v)
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return sorted(queue)


def _check_q(q: int) -> tuple[int, int]:
    try:
        return prime_power(q)
    except ValueError:
        raise SpecError(f"{q} is not a prime power") from None


def psl2(q: int) -> GroupSpec:
    p, _ = _check_q(q)
    F = field(q)
    pts = _projective_points(F, 2)
    gens = _action(pts, [_linear(F, a) for a in M.sl2_generators(F)])
    order = q * (q * q - 1) // math.gcd(2, q - 1)
    grp = PermGroup(_prune(gens, q + 1), degree=q + 1, name=f"PSL(2,{q})")
    return GroupSpec(f"PSL(2,{q})", grp, expected_order=order, notes={"field": F.descriptor()})


def pgl2(q: int) -> GroupSpec:
    _check_q(q)
    F = field(q)
    pts = _projective_points(F, 2)
    base = psl2(q)
    d = _action(pts, [_linear(F, M.diag([F.primitive, 1]))])[0]
    grp = PermGroup(list(base.group.generators) + [d], degree=q + 1, name=f"PGL(2,{q})")
    return GroupSpec(f"PGL(2,{q})", grp, socle=base.group, coset=d, expected_order=q * (q * q - 1),
                     notes={"field": F.descriptor()})


def pgammal2(q: int) -> GroupSpec:
    _, k = _check_q(q)
    F = field(q)
    pts = _projective_points(F, 2)
    base = pgl2(q)
    frob = _action(pts, [_semilinear(F, M.identity(2), 1)])[0]
    grp = PermGroup(list(base.group.generators) + [frob], degree=q + 1, name=f"PGammaL(2,{q})")
    socle = base.socle
    coset = frob if math.gcd(2, q - 1) == 1 else None
    return GroupSpec(f"PGammaL(2,{q})", grp, socle=socle, coset=coset,
                     expected_order=q * (q * q - 1) * k, notes={"field": F.descriptor()})


def m10() -> GroupSpec:
    F = field(9)
    pts = _projective_points(F, 2)
    base = psl2(9)
    zeta = F.primitive  # a non-square
    # (a:b) -> (zeta a^3 : b^3), i.e. x -> zeta x^3 on the affine line
    twist = _action(pts, [_semilinear(F, M.diag([zeta, 1]), 1)])[0]
    grp = PermGroup(list(base.group.generators) + [twist], degree=10, name="M10")
    return GroupSpec("M10", grp, socle=base.group, coset=twist, expected_order=720,
                     notes={"field": F.descriptor()})


def _hermitian_ok(F: GF, q: int, a: M.Matrix) -> bool:
    # preserves u1 v3^q + u2 v2^q + u3 v1^q, i.e. a J conj(a)^T = J
    J = ((0, 0, 1), (0, 1, 0), (1, 0, 0))
    conj_t = M.transpose(M.entrywise(a, lambda x: F.pow(x, q)))
    return M.mul(F, M.mul(F, a, J), conj_t) == J


def _isotropic_points(F: GF, q: int) -> list[tuple[int, ...]]:
    pts = []
    for v in _projective_points(F, 3):
        h = F.add(F.add(F.mul(v[0], F.pow(v[2], q)), F.mul(v[1], F.pow(v[1], q))), F.mul(v[2], F.pow(v[0], q)))
        if h == 0:
            pts.append(v)
    return pts


@lru_cache(maxsize=None)
def _psu3_data(q: int):
    _check_q(q)
    if q < 3:
        raise SpecError("PSU(3,q) needs q >= 3")
    F = field(q * q)
    pts = _isotropic_points(F, q)
    if len(pts) != q ** 3 + 1:
        raise RuntimeError("isotropic point count mismatch")
    unip = []
    for a in range(F.q):
        for b in range(F.q):
            for c in range(F.q):
                u = M.mat([[1, a, b], [0, 1, c], [0, 0, 1]])
                if _hermitian_ok(F, q, u):
                    unip.append(u)
    if len(unip) != q ** 3:
        raise RuntimeError("unitary unipotent count mismatch")
    w = M.mat([[0, 0, F.neg(1)], [0, F.neg(1), 0], [F.neg(1), 0, 0]])
    perms = _action(pts, [_linear(F, u) for u in unip] + [_linear(F, w)])
    gens = _prune(perms, len(pts))
    return F, pts, gens


def psu3(q: int, ext: int = 1) -> GroupSpec:
    F, pts, gens = _psu3_data(q)
    n = len(pts)
    order = q ** 3 * (q ** 3 + 1) * (q * q - 1) // math.gcd(3, q + 1)
    name = f"PSU(3,{q})"
    base = PermGroup(gens, degree=n, name=name)
    if ext == 1:
        return GroupSpec(name, base, expected_order=order, notes={"field": F.descriptor()})
    if ext != 2:
        raise SpecError("only the extension PSU(3,q):2 is supported")
    frob = _action(pts, [lambda v: M.normalize(F, tuple(F.pow(x, q) for x in v))])[0]
    grp = PermGroup(list(gens) + [frob], degree=n, name=name + ":2")
    return GroupSpec(name + ":2", grp, socle=base, coset=frob, expected_order=2 * order,
                     notes={"field": F.descriptor()})


def _suzuki_matrices(F: GF, m: int):
    t = 2 ** (m + 1)

    def th(x):
        return F.pow(x, t)

    def S(a, b):
        c = F.add(F.add(F.mul(F.pow(a, 2), th(a)), F.mul(a, b)), th(b))
        return M.mat([[1, 0, 0, 0],
                      [a, 1, 0, 0],
                      [b, th(a), 1, 0],
                      [c, F.add(F.mul(a, th(a)), b), a, 1]])

    k = F.primitive
    e = 2 ** m
    torus = M.diag([F.pow(k, 1 + e), F.pow(k, e), F.pow(k, -e), F.pow(k, -1 - e)])
    w = M.mat([[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0]])
    basis = [int(F.exp[i % (F.q - 1)]) for i in range(F.k)]
    unip = [S(a, 0) for a in basis] + [S(0, b) for b in basis]
    return unip + [torus, w]


@lru_cache(maxsize=None)
def _suzuki_data(q: int):
    p, k = _check_q(q)
    if p != 2 or k % 2 == 0:
        raise SpecError("Sz(q) needs q an odd power of 2")
    m = (k - 1) // 2
    F = field(q)
    mats = _suzuki_matrices(F, m)
    maps = [_linear(F, a) for a in mats]
    pts = _orbit(F, (1, 0, 0, 0), maps)
    if len(pts) != q * q + 1:
        raise RuntimeError(f"ovoid has {len(pts)} points, expected {q * q + 1}")
    gens = _prune(_action(pts, maps), len(pts))
    return F, pts, gens


def suzuki(q: int, f: int = 1) -> GroupSpec:
    F, pts, gens = _suzuki_data(q)
    n = len(pts)
    order = q * q * (q * q + 1) * (q - 1)
    base = PermGroup(gens, degree=n, name=f"Sz({q})")
    if f == 1:
        return GroupSpec(f"Sz({q})", base, expected_order=order, notes={"field": F.descriptor()})
    if F.k % f:
        raise SpecError(f"Sz({q}):{f} needs {f} dividing {F.k}")
    times = F.k // f
    frob = _action(pts, [lambda v: tuple(F.frobenius(x, times) for x in v)])[0]
    grp = PermGroup(list(gens) + [frob], degree=n, name=f"Sz({q}):{f}")
    return GroupSpec(f"Sz({q}):{f}", grp, socle=base, coset=frob, expected_order=order * f,
                     notes={"field": F.descriptor()})


# --- products ----------------------------------------------------------------

def _shift(p: Permutation, offset: int, n: int) -> Permutation:
    img = list(range(n))
    for i, j in enumerate(p.images):
        img[offset + i] = offset + j
    return Permutation._trusted(tuple(img))


def direct(a: GroupSpec, b: GroupSpec) -> GroupSpec:
    n = a.degree + b.degree
    gens = [_shift(g, 0, n) for g in a.group.generators] + [_shift(g, a.degree, n) for g in b.group.generators]
    expr = f"Direct({a.expression},{b.expression})"
    return GroupSpec(expr, PermGroup(gens, degree=n, name=expr), expected_order=a.order * b.order)


def block_cycle(m: int, k: int) -> Permutation:
    """The permutation sending point ``(i, p)`` to ``(i+1 mod k, p)`` on ``k`` blocks of size ``m``."""
    return Permutation([((i // m + 1) % k) * m + i % m for i in range(m * k)])


def wreath(t: GroupSpec, k: int) -> GroupSpec:
    if k < 1:
        raise SpecError("Wr(spec,k) needs k >= 1")
    m = t.degree
    n = m * k
    base = [_shift(g, i * m, n) for i in range(k) for g in t.group.generators]
    sigma = block_cycle(m, k)
    expr = f"Wr({t.expression},{k})"
    grp = PermGroup(base + [sigma], degree=n, name=expr)
    return GroupSpec(expr, grp, socle=PermGroup(base, degree=n), coset=sigma,
                     expected_order=t.order ** k * k)


# --- parsing -------------------------------------------------------------------

_TOKEN = re.compile(r"\s+")


class _Parser:
    def __init__(self, text: str):
        self.s = _TOKEN.sub("", text)
        self.i = 0

    def error(self, msg: str) -> SpecError:
        return SpecError(f"{msg} at position {self.i} in {self.s!r}")

    def peek(self) -> str:
        return self.s[self.i] if self.i < len(self.s) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            raise self.error(f"expected {ch!r}")
        self.i += 1

    def ident(self) -> str:
        m = re.compile(r"[A-Za-z][A-Za-z0-9]*").match(self.s, self.i)
        if not m:
            raise self.error("expected a constructor name")
        self.i = m.end()
        return m.group()

    def integer(self) -> int:
        m = re.compile(r"\d+").match(self.s, self.i)
        if not m:
            raise self.error("expected an integer")
        self.i = m.end()
        return int(m.group())

    def cycles(self) -> str:
        m = re.compile(r"(\((\d+(,\d+)*)?\))+").match(self.s, self.i)
        if not m:
            raise self.error("expected cycle notation")
        self.i = m.end()
        return m.group()

    def arg(self):
        c = self.peek()
        if c.isdigit():
            return self.integer()
        if c == "(":
            return self.cycles()
        return self.spec()

    def spec(self):
        name = self.ident()
        args = []
        if self.peek() == "(":
            self.i += 1
            if self.peek() != ")":
                args.append(self.arg())
                while self.peek() == ",":
                    self.i += 1
                    args.append(self.arg())
            self.expect(")")
        suffix = None
        if self.peek() == ":":
            self.i += 1
            suffix = self.integer()
        return (name, args, suffix)

    def parse(self):
        tree = self.spec()
        if self.i != len(self.s):
            raise self.error("trailing input")
        return tree


# Integer parameters above this would build groups of degree far past any exhaustive bound.
MAX_PARAMETER = 10_000


def _ints(name: str, args, count: int) -> list[int]:
    if len(args) != count or not all(isinstance(a, int) for a in args):
        raise SpecError(f"{name} takes {count} integer argument(s)")
    for a in args:
        if a > MAX_PARAMETER:
            raise BoundExceeded(f"{name} parameter", a, MAX_PARAMETER)
    return args


def _resolve(tree) -> GroupSpec:
    name, args, suffix = tree
    if suffix is not None and name not in ("PSU", "Sz"):
        raise SpecError(f"{name} does not take a ':' extension")
    if name == "Cyclic":
        return cyclic(*_ints(name, args, 1))
    if name == "ElemAbelian":
        return elem_abelian(*_ints(name, args, 2))
    if name == "Sym":
        return symmetric(*_ints(name, args, 1))
    if name == "Alt":
        return alternating(*_ints(name, args, 1))
    if name == "Dihedral":
        return dihedral(*_ints(name, args, 1))
    if name == "Frobenius":
        return frobenius_group(*_ints(name, args, 2))
    if name in ("PSL", "PGL", "PGammaL"):
        d, q = _ints(name, args, 2)
        if d != 2:
            raise SpecError(f"{name}(d,q) is only supported for d = 2")
        return {"PSL": psl2, "PGL": pgl2, "PGammaL": pgammal2}[name](q)
    if name == "PSU":
        d, q = _ints(name, args, 2)
        if d != 3:
            raise SpecError("PSU(d,q) is only supported for d = 3")
        return psu3(q, suffix or 1)
    if name == "Sz":
        (q,) = _ints(name, args, 1)
        return suzuki(q, suffix or 1)
    if name == "M10":
        if args:
            raise SpecError("M10 takes no arguments")
        return m10()
    if name == "Wr":
        if len(args) != 2 or not isinstance(args[0], tuple) or not isinstance(args[1], int):
            raise SpecError("Wr takes (spec, k)")
        if args[1] > MAX_PARAMETER:
            raise BoundExceeded("Wr parameter", args[1], MAX_PARAMETER)
        return wreath(_resolve(args[0]), args[1])
    if name == "Direct":
        if len(args) != 2 or not all(isinstance(a, tuple) for a in args):
            raise SpecError("Direct takes (spec, spec)")
        return direct(_resolve(args[0]), _resolve(args[1]))
    if name == "Gk":
        if len(args) != 3 or not isinstance(args[0], tuple) or not isinstance(args[1], str) \
                or not isinstance(args[2], int):
            raise SpecError("Gk takes (spec, cycles, k)")
        if args[2] > MAX_PARAMETER:
            raise BoundExceeded("Gk parameter", args[2], MAX_PARAMETER)
        from .twisted import twisted_wreath

        t = _resolve(args[0])
        try:
            y = Permutation.from_cycles(args[1], t.degree)
        except ValueError as exc:
            raise SpecError(str(exc)) from exc
        return twisted_wreath(t, y, args[2]).spec
    raise SpecError(f"unknown constructor {name!r}")


def parse_spec(expression: str):
    """Parse an expression into a ``(name, args, suffix)`` tree without building it."""
    return _Parser(expression).parse()


_BUILT: dict[str, GroupSpec] = {}


def canonical_expression(expression: str) -> str:
    return _TOKEN.sub("", expression)


def build_named(expression: str) -> GroupSpec:
    """Resolve a constructor expression to a :class:`GroupSpec` with verified order."""
    key = canonical_expression(expression)
    if key not in _BUILT:
        spec = _check_order(_resolve(parse_spec(key)))
        spec.expression = key
        if spec.group.name is None:
            spec.group.name = key
        _BUILT[key] = spec
    return _BUILT[key]


# Groups the property suites range over, in increasing order.
CATALOG = [
    "Cyclic(2)", "ElemAbelian(2,2)", "Cyclic(6)", "Sym(3)", "Dihedral(4)", "ElemAbelian(3,2)",
    "Dihedral(5)", "Alt(4)", "Cyclic(12)", "Frobenius(7,3)", "Sym(4)", "ElemAbelian(5,2)",
    "Alt(5)", "Sym(5)", "PSL(2,7)", "PGL(2,7)", "Alt(6)", "PSL(2,8)", "PSL(2,11)",
    "Sym(6)", "PGL(2,9)", "M10", "PGammaL(2,8)", "Sym(7)", "PSU(3,3)", "Wr(Alt(5),2)",
    "PSU(3,3):2", "Sz(8)", "Sz(8):3", "Gk(Alt(6),(1,2),2)",
]


def catalog(max_order: int | None = None) -> list[GroupSpec]:
    specs = [build_named(e) for e in CATALOG]
    if max_order is not None:
        specs = [s for s in specs if s.order <= max_order]
    return sorted(specs, key=lambda s: s.order)
