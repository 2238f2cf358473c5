"""Twisted wreath groups ``G_k = <T^k, (y,1,...,1) sigma>``.

Block ``i`` of the realization occupies points ``[i*m, (i+1)*m)`` where ``m``
is the degree of ``A = <T, y>``, and ``sigma`` moves block ``i`` to block
``i+1`` (mod ``k``).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .constructions import GroupSpec, SpecError, _shift
from .group import BoundExceeded, PermGroup
from .perm import Permutation

STRUCTURE_ORDER_LIMIT = 1_000_000
WREATH_TABLE_LIMIT = 2_000_000
DIAGONAL_SEARCH_LIMIT = 100_000


@dataclass(eq=False)
class TwistedWreathSpec:
    T: GroupSpec
    y: Permutation
    k: int
    A: PermGroup
    group: PermGroup
    N: PermGroup
    x: Permutation
    spec: GroupSpec

    @property
    def m(self) -> int:
        return self.T.degree

    def block_element(self, parts: list[Permutation]) -> Permutation:
        """The element ``(t_0, ..., t_{k-1})`` of ``A^k`` acting blockwise."""
        n = self.m * self.k
        img = list(range(n))
        for i, t in enumerate(parts):
            for p, q in enumerate(t.images):
                img[i * self.m + p] = i * self.m + q
        return Permutation._trusted(tuple(img))


def twisted_element(y: Permutation, m: int, k: int) -> Permutation:
    """``x = (y,1,...,1) sigma``: point ``(i,p)`` goes to ``(i+1, y(p))`` if ``i = 0`` else ``(i+1, p)``."""
    n = m * k
    img = [0] * n
    for i in range(k):
        for p in range(m):
            q = y.images[p] if i == 0 else p
            img[i * m + p] = ((i + 1) % k) * m + q
    return Permutation._trusted(tuple(img))


def _is_nonabelian_simple(G: PermGroup) -> bool:
    from .classes import normal_subgroup_list

    if G.order == 1 or G.is_abelian():
        return False
    return len(normal_subgroup_list(G)) == 2


def twisted_wreath(T: GroupSpec, y: Permutation, k: int, check_simple: bool = True) -> TwistedWreathSpec:
    """Realize ``G_k`` for the simple group ``T`` and ``y`` normalizing ``T``."""
    if k < 1:
        raise SpecError("Gk needs k >= 1")
    if y.degree != T.degree:
        raise SpecError("y must act on the points of T")
    if check_simple and not _is_nonabelian_simple(T.group):
        raise SpecError(f"{T.expression} is not nonabelian simple")
    for g in T.group.generators:
        if g.conj(y) not in T.group:
            raise SpecError("y does not normalize T")
    m = T.degree
    n = m * k
    A = PermGroup(list(T.group.generators) + [y], degree=m)
    base = [_shift(g, i * m, n) for i in range(k) for g in T.group.generators]
    x = twisted_element(y, m, k)
    N = PermGroup(base, degree=n)
    expr = f"Gk({T.expression},{y},{k})"
    grp = PermGroup(base + [x], degree=n, name=expr)
    outer = A.order // T.order
    # |G_k : N| = k times the order of yT in A/T; A/T is cyclic here
    y_outer = 1
    yp = y
    while yp not in T.group:
        yp = yp * y
        y_outer += 1
    expected = T.order ** k * k * y_outer
    if outer % y_outer:
        raise RuntimeError("inconsistent outer order")
    spec = GroupSpec(expr, grp, socle=N, coset=x, expected_order=expected)
    return TwistedWreathSpec(T, y, k, A, grp, N, x, spec)



# --- power test ---------------------------------------------------------------------

class CoarseRealizationWarning(UserWarning):
    """The modeled automorphism group of ``T`` is smaller than ``Aut(T)``."""


def automorphism_model(spec: TwistedWreathSpec) -> tuple[PermGroup, bool]:
    """A permutation group inducing automorphisms of ``T``, and whether it induces all of them.

    ``Alt(m)`` on ``m`` points is normalized by ``Sym(m)``, which gives every
    automorphism except when ``m = 6``.  Other groups fall back to ``A = <T, y>``.
    """
    from .constructions import symmetric

    m = spec.m
    T = spec.T.group
    if m >= 5 and 2 * T.order == math.factorial(m) and len(T.orbit(0)) == m:
        return symmetric(m).group, m != 6
    return spec.A, False


def _centralizer_gens(group: PermGroup, g: Permutation) -> list[Permutation]:
    table = group.table
    cent = table.centralizer(table.index(g))
    return [table.perm(int(i)) for i in table.generating_subset(cent)]


def twisted_centralizer(spec: TwistedWreathSpec, aut: PermGroup) -> PermGroup:
    """``C_W(x)`` for ``W = aut wr Sym(k)``: the diagonal copy of ``C_aut(y)`` together with ``x``.

    A centralizing element must induce a power of the block cycle, and
    matching coordinates forces it into this group of order ``|C_aut(y)| k``.
    """
    diag = [spec.block_element([c] * spec.k) for c in _centralizer_gens(aut, spec.y)]
    return PermGroup(diag + [spec.x], degree=spec.m * spec.k)


def _wreath_model(spec: TwistedWreathSpec, aut: PermGroup) -> PermGroup:
    from .constructions import block_cycle

    n = spec.m * spec.k
    gens = [_shift(g, i * spec.m, n) for i in range(spec.k) for g in aut.generators]
    gens.append(block_cycle(spec.m, spec.k))
    if spec.k > 2:
        # a transposition of the first two blocks
        img = list(range(n))
        for p in range(spec.m):
            img[p], img[spec.m + p] = spec.m + p, p
        gens.append(Permutation._trusted(tuple(img)))
    return PermGroup(gens, degree=n)


def _has_root(group: PermGroup, target: Permutation, d: int) -> bool:
    table = group.table
    perms = table.perms
    # w^d via repeated composition on the image arrays
    acc = np.tile(np.arange(table.n), (len(table), 1))
    for _ in range(d):
        acc = np.take_along_axis(perms, acc, axis=1)
    return bool(np.any(np.all(acc == np.array(target.images), axis=1)))


@dataclass
class PowersResult:
    value: bool
    criterion: bool
    exact_model: bool
    centralizer_order: int
    cross_checked: bool


def powers_report(spec: TwistedWreathSpec, d: int) -> PowersResult:
    """Whether ``x`` is a ``d``-th power in ``Aut(T) wr Sym(k)`` (as modeled), with the
    number-theoretic criterion ``gcd(d, k) = 1`` and ``y`` a ``d``-th power."""
    if d < 1:
        raise ValueError("d must be positive")
    aut, exact = automorphism_model(spec)
    if not exact:
        warnings.warn(f"automorphisms of {spec.T.expression} are modeled by a proper subgroup",
                      CoarseRealizationWarning, stacklevel=2)
    # any d-th root of x commutes with x
    cent = twisted_centralizer(spec, aut)
    cross = False
    if aut.order ** spec.k * math.factorial(spec.k) <= WREATH_TABLE_LIMIT:
        W = _wreath_model(spec, aut)
        full = W.table.centralizer(W.table.index(spec.x))
        if len(full) != cent.order:
            raise RuntimeError("centralizer of x does not have the expected order")
        cross = True
    value = d == 1 or _has_root(cent, spec.x, d)
    y_root = d == 1 or _has_root(PermGroup(_centralizer_gens(aut, spec.y) or [aut.identity()],
                                           degree=spec.m), spec.y, d)
    criterion = math.gcd(d, spec.k) == 1 and y_root
    if value != criterion:
        raise RuntimeError(f"power test disagrees with the gcd criterion for d={d}")
    return PowersResult(value, criterion, exact, cent.order, cross)


def powers_check(spec: TwistedWreathSpec, d: int) -> bool:
    """Whether ``x`` is a ``d``-th power in the modeled automorphism group of ``N``."""
    return powers_report(spec, d).value


# --- maximal overgroups of x ----------------------------------------------------------

class StructureViolation(RuntimeError):
    """A maximal overgroup of ``x`` that is neither of product nor of diagonal type."""

    def __init__(self, subgroup, detail: str):
        super().__init__(f"unclassified maximal overgroup of order {subgroup.order}: {detail}")
        self.subgroup = subgroup


@dataclass
class OvergroupType:
    order: int
    kind: str  # "product" or "diagonal"
    intersection_order: int
    projection_orders: list[int]
    equal_components: bool


@dataclass
class StructureReport:
    entries: list[OvergroupType] = field(default_factory=list)

    @property
    def counts(self) -> dict[str, int]:
        out = {"product": 0, "diagonal": 0}
        for e in self.entries:
            out[e.kind] += 1
        return out


def _projections(spec: TwistedWreathSpec, perms: np.ndarray) -> list[np.ndarray]:
    m = spec.m
    return [np.unique(perms[:, i * m:(i + 1) * m] - i * m, axis=0) for i in range(spec.k)]


def maximal_structure_check(spec: TwistedWreathSpec) -> StructureReport:
    """Classify every maximal overgroup ``H`` of ``x`` by ``K = H ∩ N``.

    Product type: ``K`` is the direct product of its projections, all proper,
    and ``K`` is not normal in ``G_k`` (so ``H = N_G(K)``).  Diagonal type: every
    projection of ``K`` is an isomorphism onto ``T``.
    """
    from .overgroups import maximal_overgroups
    from .subgroups import Subgroup

    G = spec.group
    if G.order > STRUCTURE_ORDER_LIMIT:
        raise BoundExceeded("maximal structure check", G.order, STRUCTURE_ORDER_LIMIT)
    table = G.table
    ovs = maximal_overgroups(G, spec.x)
    report = StructureReport()
    if spec.k == 1:
        for H in ovs.members:
            report.entries.append(OvergroupType(H.order, "product", H.order, [H.order], True))
        return report
    Nsub = Subgroup.generated(table, [table.index(g) for g in spec.N.generators])
    t_order = spec.T.order
    for H in ovs.members:
        K = np.nonzero(H.mask & Nsub.mask)[0]
        projs = _projections(spec, table.perms[K])
        sizes = [len(p) for p in projs]
        equal = all(np.array_equal(projs[0], p) for p in projs[1:])
        if math.prod(sizes) == len(K) and all(s < t_order for s in sizes):
            Ksub = Subgroup.generated(table, table.generating_subset(K))
            if Ksub.is_normal():
                raise StructureViolation(H, "product intersection is normal in G")
            kind = "product"
        elif len(K) == t_order and all(s == t_order for s in sizes):
            kind = "diagonal"
        else:
            raise StructureViolation(H, f"intersection order {len(K)}, projections {sizes}")
        report.entries.append(OvergroupType(H.order, kind, len(K), sizes, equal))
    return report


def diagonal_subgroup(spec: TwistedWreathSpec, autos: list[Permutation]) -> PermGroup:
    """``D = {(z, z^a_1, ..., z^a_(k-1))}`` for conjugating elements ``a_i``."""
    gens = [spec.block_element([t] + [t.conj(a) for a in autos]) for t in spec.T.group.generators]
    return PermGroup(gens, degree=spec.m * spec.k)


def normalized_diagonals(spec: TwistedWreathSpec) -> list[tuple[Permutation, ...]]:
    """All tuples ``(a_1, ..., a_(k-1))`` from the automorphism model whose
    diagonal subgroup is normalized by ``x``."""
    aut, exact = automorphism_model(spec)
    if not exact:
        warnings.warn(f"automorphisms of {spec.T.expression} are modeled by a proper subgroup",
                      CoarseRealizationWarning, stacklevel=2)
    if aut.order ** (spec.k - 1) > DIAGONAL_SEARCH_LIMIT:
        raise BoundExceeded("diagonal enumeration", aut.order ** (spec.k - 1), DIAGONAL_SEARCH_LIMIT)
    elements = [aut.table.perm(i) for i in range(aut.order)]
    xinv = spec.x.inverse()
    out = []
    for autos in product(elements, repeat=spec.k - 1):
        D = diagonal_subgroup(spec, list(autos))
        if all(g.conj(spec.x) in D for g in D.generators) and all(g.conj(xinv) in D for g in D.generators):
            out.append(autos)
    return out


# --- structural invariants -----------------------------------------------------------

def block_power_check(spec: TwistedWreathSpec) -> bool:
    """``x^k`` acts on every block as ``y`` does."""
    xk = spec.x ** spec.k
    return xk == spec.block_element([spec.y] * spec.k)


def unique_minimal_normal_check(spec: TwistedWreathSpec) -> bool:
    """``N`` is the unique minimal normal subgroup of ``G_k``."""
    from .classes import minimal_normal_subgroups

    mins = minimal_normal_subgroups(spec.group)
    return len(mins) == 1 and mins[0].order == spec.N.order and all(g in spec.N for g in mins[0].generators)
