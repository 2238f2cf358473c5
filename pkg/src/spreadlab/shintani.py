"""Shintani descent for SL2 over small fields, verified exhaustively.

The extended group ``X = <SL2(q), sigma>`` with ``q = q0^e`` acts on the
nonzero row vectors of ``GF(q)^2``; ``sigma`` raises every coordinate to the
power ``q0``.  With products read left to right, ``sigma h sigma^-1`` is the
matrix ``h`` with the inverse Frobenius applied entrywise, so

    (g sigma)^h = h^-1 g h^(sigma^-1) sigma,   (g sigma)^e = g g^(sigma^-1) ... g^(sigma^-(e-1)).

Here ``sigma^-1`` on ``SL2(q)`` is the ``(e-1)``-fold Frobenius power.  A
Lang-Steinberg witness ``a`` with ``g = a (a^-1)^(sigma^-1)`` satisfies
``a^sigma = g^sigma a`` entrywise, a ``GF(p)``-linear condition on each column
of ``a``, solved over ``GF(q0^(e j))`` for ``j = 1, ..., J``.  The Shintani
image is ``a^-1 (g sigma)^e a``, which lands in ``SL2(q0)``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import matrices as M
from .classes import class_index_map, conjugacy_classes
from .fields import FIELD_SIZE_LIMIT, GF, embedding, field, prime_power
from .group import BoundExceeded, PermGroup
from .perm import Permutation
from .subgroups import Subgroup

SL2_ORDER_LIMIT = 10_000_000
DEFAULT_TOWER = 6


def _nonzero_vectors(F: GF) -> list[tuple[int, int]]:
    return [(a, b) for a in range(F.q) for b in range(F.q) if a or b]


def _vector_perm(index: dict, points: list, fn) -> Permutation:
    return Permutation._trusted(tuple(index[fn(v)] for v in points))


def _nullspace_mod_p(A: np.ndarray, p: int) -> list[np.ndarray]:
    """Basis of the right kernel of ``A`` over ``GF(p)``."""
    A = A.copy() % p
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i, c]), None)
        if piv is None:
            continue
        A[[r, piv]] = A[[piv, r]]
        A[r] = A[r] * pow(int(A[r, c]), -1, p) % p
        for i in range(rows):
            if i != r and A[i, c]:
                A[i] = (A[i] - A[i, c] * A[r]) % p
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = np.zeros(cols, dtype=np.int64)
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-A[i, fc]) % p
        basis.append(v)
    return basis


@dataclass
class CosetClass:
    """An ``SL2(q)``-class in the coset ``SL2(q) sigma``."""

    index: int
    rep_index: int
    size: int
    order: int
    g: M.Matrix  # the rep is g * sigma


@dataclass
class LangResult:
    """Outcome of a Lang-Steinberg search; ``a`` is ``None`` when the tower bound was exhausted."""

    a: M.Matrix | None
    j: int | None
    field_q: int | None
    image: M.Matrix | None  # a^-1 (g sigma)^e a over GF(q0)
    skipped: list[int] = dc_field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.a is not None


@dataclass
class ShintaniEntry:
    coset_class: int
    coset_order: int
    coset_size: int
    image_label: str | None
    image_order: int | None
    tower_degree: int | None
    second_label: str | None
    independent: bool
    centralizer_match: bool


@dataclass
class ShintaniMap:
    entries: list[ShintaniEntry]
    failures: list[int]

    @property
    def complete(self) -> bool:
        return not self.failures

    @property
    def table(self) -> dict[int, str]:
        return {e.coset_class: e.image_label for e in self.entries if e.image_label is not None}

    def is_bijection(self, labels: list[str]) -> bool:
        images = list(self.table.values())
        return self.complete and len(set(images)) == len(images) and sorted(images) == sorted(labels)


class ShintaniContext:
    """``SL2(q0^e)`` with the ``q0``-Frobenius ``sigma`` and the fixed group ``SL2(q0)``."""

    def __init__(self, q0: int, e: int):
        if e < 2:
            raise ValueError("e must be at least 2")
        p, f = prime_power(q0)
        self.q0, self.e, self.p, self.f = q0, e, p, f
        self.q = q0 ** e
        sl_order = self.q * (self.q ** 2 - 1)
        if sl_order > SL2_ORDER_LIMIT:
            raise BoundExceeded("SL2 order", sl_order, SL2_ORDER_LIMIT)
        self.F = field(self.q)
        self.F0 = field(q0)
        self.points = _nonzero_vectors(self.F)
        self.point_index = {v: i for i, v in enumerate(self.points)}
        self.sl_gens = M.sl2_generators(self.F)
        sl_perms = [self.matrix_perm(g) for g in self.sl_gens]
        self.sigma = _vector_perm(self.point_index, self.points, lambda v: tuple(self.frob(x) for x in v))
        self.X = PermGroup(sl_perms + [self.sigma], degree=len(self.points), name=f"SL2({self.q}):{e}")
        table = self.X.table
        self.sigma_index = table.index(self.sigma)
        self.sl = Subgroup.generated(table, [table.index(g) for g in sl_perms])
        # the target SL2(q0) on its own nonzero vectors
        self.points0 = _nonzero_vectors(self.F0)
        self.point_index0 = {v: i for i, v in enumerate(self.points0)}
        self.fixed = PermGroup([self.matrix_perm0(g) for g in M.sl2_generators(self.F0)],
                               degree=len(self.points0), name=f"SL2({q0})")
        self._coset_classes: list[CosetClass] | None = None
        self.map: ShintaniMap | None = None

    # --- field and matrix helpers ---------------------------------------------------

    def frob(self, x: int, times: int = 1) -> int:
        """``x^(q0^times)`` in ``GF(q)``."""
        return self.F.frobenius(x, self.f * times)

    def frob_matrix(self, m: M.Matrix, times: int = 1) -> M.Matrix:
        return M.entrywise(m, lambda x: self.frob(x, times % self.e))

    def matrix_perm(self, m: M.Matrix) -> Permutation:
        return _vector_perm(self.point_index, self.points, lambda v: M.vec_mul(self.F, v, m))

    def matrix_perm0(self, m: M.Matrix) -> Permutation:
        return _vector_perm(self.point_index0, self.points0, lambda v: M.vec_mul(self.F0, v, m))

    def perm_matrix(self, p: Permutation) -> M.Matrix:
        """The matrix of an element of ``SL2(q)`` from the images of the unit vectors."""
        return M.mat([self.points[p.images[self.point_index[(1, 0)]]],
                      self.points[p.images[self.point_index[(0, 1)]]]])

    def norm(self, g: M.Matrix) -> M.Matrix:
        """``g g^(sigma^-1) ... g^(sigma^-(e-1))`` computed with matrices."""
        out = g
        for i in range(1, self.e):
            out = M.mul(self.F, out, self.frob_matrix(g, -i))
        return out

    def fixed_label(self, m: M.Matrix) -> str:
        G0 = self.fixed
        idx = G0.table.index(self.matrix_perm0(m))
        classes = conjugacy_classes(G0)
        return classes[int(class_index_map(G0)[idx])].label

    def descriptor(self) -> dict:
        return {"q0": self.q0, "e": self.e, "field": self.F.descriptor(), "subfield": self.F0.descriptor()}

    # --- invariants ---------------------------------------------------------------------

    def sigma_checks(self) -> dict[str, bool]:
        """``sigma^e`` trivial, ``sigma`` centralizing exactly ``SL2(q0)``, and ``|X| = e |SL2(q)|``."""
        table = self.X.table
        cent = table.centralizer(self.sigma_index)
        cent_sl = int(np.count_nonzero(self.sl.mask[cent]))
        return {
            "sigma_power_trivial": (self.sigma ** self.e).is_identity(),
            "sigma_order": self.sigma.order() == self.e,
            "fixed_subgroup_order": cent_sl == self.fixed.order,
            "extended_order": self.X.order == self.e * self.sl.order,
            "sl2_order": self.sl.order == self.q * (self.q ** 2 - 1),
        }


# --- coset classes -------------------------------------------------------------------------

def coset_classes(ctx: ShintaniContext) -> list[CosetClass]:
    """Classes of ``SL2(q) sigma`` under conjugation by ``SL2(q)``."""
    if ctx._coset_classes is not None:
        return ctx._coset_classes
    table = ctx.X.table
    coset = table.right_mul_map(ctx.sigma_index, ctx.sl.members)
    maps = [table.conj_map(int(g)) for g in ctx.sl.gens]
    orbits = table.orbits_under(maps, coset)
    orders = table.orders
    sigma_inv = table.inverse[ctx.sigma_index]
    out = []
    for orb in orbits:
        rep = int(orb[0])
        g_index = table.mul(rep, int(sigma_inv))
        out.append(CosetClass(0, rep, len(orb), int(orders[rep]), ctx.perm_matrix(table.perm(g_index))))
    out.sort(key=lambda c: (c.order, c.size, c.rep_index))
    for i, c in enumerate(out):
        c.index = i
    ctx._coset_classes = out
    return out


def class_count_check(ctx: ShintaniContext) -> tuple[int, int]:
    """``(coset class count, class count of SL2(q0))``."""
    return len(coset_classes(ctx)), len(conjugacy_classes(ctx.fixed))


def order_law(ctx: ShintaniContext) -> bool:
    """Coset element orders are ``e`` times element orders of ``SL2(q0)``, class by class."""
    classes = coset_classes(ctx)
    if any(c.order % ctx.e for c in classes):
        return False
    coset_side = sorted(c.order // ctx.e for c in classes)
    fixed_side = sorted(c.order for c in conjugacy_classes(ctx.fixed))
    if coset_side != fixed_side:
        return False
    # every coset element, not only representatives
    table = ctx.X.table
    coset = table.right_mul_map(ctx.sigma_index, ctx.sl.members)
    allowed = {c.order * ctx.e for c in conjugacy_classes(ctx.fixed)}
    return set(int(o) for o in np.unique(table.orders[coset])) <= allowed


# --- Lang-Steinberg ---------------------------------------------------------------------------

def _solution_space(ctx: ShintaniContext, K: GF, h: M.Matrix) -> list[tuple[int, int]]:
    """``GF(p)``-basis of ``{c in GF(Q)^2 : c^(q0) = h c}``."""
    p = ctx.p
    dim = K.k
    cols = []
    for r in range(2):
        for t in range(dim):
            c = [0, 0]
            c[r] = p ** t
            image = [K.sub(K.frobenius(c[i], ctx.f), M.mat_vec(K, h, c)[i]) for i in range(2)]
            cols.append(K.digits(image[0]) + K.digits(image[1]))
    A = np.array(cols, dtype=np.int64).T
    out = []
    for v in _nullspace_mod_p(A, p):
        out.append((K.from_digits(v[:dim]), K.from_digits(v[dim:])))
    return out


def _combine(K: GF, basis: list[tuple[int, int]], coeffs: list[int]) -> tuple[int, int]:
    x, y = 0, 0
    for (a, b), c in zip(basis, coeffs):
        if c:
            x = K.add(x, K.mul(K.scalar(c), a))
            y = K.add(y, K.mul(K.scalar(c), b))
    return x, y


def lang_steinberg(ctx: ShintaniContext, g: M.Matrix, tower: int = DEFAULT_TOWER,
                   rng: random.Random | None = None) -> LangResult:
    """A witness ``a`` in ``SL2(q0^(e j))`` with ``g = a (a^-1)^(sigma^-1)``, for the least feasible ``j``.

    With ``rng`` the columns are random solutions, giving an independent witness.
    """
    skipped = []
    N = ctx.norm(g)
    for j in range(1, tower + 1):
        Q = ctx.q0 ** (ctx.e * j)
        if Q > FIELD_SIZE_LIMIT:
            skipped.append(j)
            continue
        K = field(Q)
        emb = embedding(ctx.q, Q)
        lift = lambda m: M.entrywise(m, lambda x: emb[x])  # noqa: E731
        h = lift(ctx.frob_matrix(g))
        basis = _solution_space(ctx, K, h)
        if len(basis) < 2 * ctx.f:
            continue
        a = _pick_columns(ctx, K, basis, rng)
        if a is None:
            continue
        # verify g = a (a^-1)^(sigma^-1), with sigma^-1 the inverse q0-Frobenius on GF(Q)
        back = K.k - ctx.f
        a_back = M.entrywise(a, lambda x: K.frobenius(x, back))
        if M.mul(K, a, M.inverse(K, a_back)) != lift(g):
            raise RuntimeError("Lang-Steinberg witness fails its defining equation")
        image_big = M.mul(K, M.mul(K, M.inverse(K, a), lift(N)), a)
        sub = embedding(ctx.q0, Q)
        back_map = {v: i for i, v in enumerate(sub)}
        if any(x not in back_map for row in image_big for x in row):
            raise RuntimeError("Shintani image does not lie over the fixed field")
        image = M.entrywise(image_big, lambda x: back_map[x])
        return LangResult(a, j, Q, image, skipped)
    return LangResult(None, None, None, None, skipped)


def _pick_columns(ctx: ShintaniContext, K: GF, basis, rng) -> M.Matrix | None:
    def det_of(c1, c2):
        return K.sub(K.mul(c1[0], c2[1]), K.mul(c2[0], c1[1]))

    pairs = []
    if rng is None:
        pairs = [(basis[i], basis[j]) for i in range(len(basis)) for j in range(i + 1, len(basis))]
    else:
        for _ in range(200):
            c1 = _combine(K, basis, [rng.randrange(ctx.p) for _ in basis])
            c2 = _combine(K, basis, [rng.randrange(ctx.p) for _ in basis])
            pairs.append((c1, c2))
    for c1, c2 in pairs:
        d = det_of(c1, c2)
        if d:
            # d lies in GF(q0), so rescaling a column keeps it a solution
            dinv = K.inv(d)
            c2 = (K.mul(c2[0], dinv), K.mul(c2[1], dinv))
            return M.mat([[c1[0], c2[0]], [c1[1], c2[1]]])
    return None


# --- the map ----------------------------------------------------------------------------------------

def shintani_map(ctx: ShintaniContext, tower: int = DEFAULT_TOWER, seed: int = 0) -> ShintaniMap:
    """Class map from the coset to ``SL2(q0)``, recomputed from a second class member and
    a randomly chosen second witness to check independence of the choices."""
    rng = random.Random(seed)
    table = ctx.X.table
    sigma_inv = int(table.inverse[ctx.sigma_index])
    maps = [table.conj_map(int(g)) for g in ctx.sl.gens]
    cent0 = {c.label: c.centralizer_order for c in conjugacy_classes(ctx.fixed)}
    entries, failures = [], []
    for c in coset_classes(ctx):
        # the group-level power (g sigma)^e must equal the matrix norm
        power = table.perm(c.rep_index) ** ctx.e
        if ctx.perm_matrix(power) != ctx.norm(c.g):
            raise RuntimeError("(g sigma)^e disagrees with the matrix norm")
        first = lang_steinberg(ctx, c.g, tower)
        if not first.found:
            failures.append(c.index)
            entries.append(ShintaniEntry(c.index, c.order, c.size, None, None, None, None, False, False))
            continue
        label = ctx.fixed_label(first.image)
        # a second member of the class: conjugate the rep by a random product of generators
        other = c.rep_index
        for _ in range(rng.randrange(1, 8)):
            other = int(maps[rng.randrange(len(maps))][other])
        g2 = ctx.perm_matrix(table.perm(table.mul(other, sigma_inv)))
        second = lang_steinberg(ctx, g2, tower, rng)
        label2 = ctx.fixed_label(second.image) if second.found else None
        order = ctx.matrix_perm0(first.image).order()
        cmatch = ctx.sl.order // c.size == cent0[label]
        entries.append(ShintaniEntry(c.index, c.order, c.size, label, order, first.j, label2,
                                     label2 == label, cmatch))
    ctx.map = ShintaniMap(entries, failures)
    return ctx.map


def _require_map(ctx: ShintaniContext) -> ShintaniMap:
    return ctx.map if ctx.map is not None else shintani_map(ctx)


# --- counting checks -------------------------------------------------------------------------------

def _fixed_lines(F: GF, points: list, index: dict, perm: Permutation) -> int:
    count = 0
    for v in points:
        if M.normalize(F, v) != v:
            continue
        w = points[perm.images[index[v]]]
        if M.normalize(F, w) == v:
            count += 1
    return count


def line_stabilizer(ctx: ShintaniContext, lines: list[tuple[int, int]]) -> Subgroup:
    """Subgroup of ``X`` preserving the given set of projective points."""
    table = ctx.X.table
    F = ctx.F
    allowed = {v for v in ctx.points if M.normalize(F, v) in set(lines)}
    cols = [ctx.point_index[v] for v in lines]
    ok = np.ones(len(table), dtype=bool)
    for c in cols:
        imgs = table.perms[:, c]
        ok &= np.array([ctx.points[int(i)] in allowed for i in imgs])
    members = np.nonzero(ok)[0]
    return Subgroup(table, members, table.generating_subset(members))


def borel_normalizer(ctx: ShintaniContext) -> Subgroup:
    """``N_X(B)`` for the upper triangular Borel subgroup (the stabilizer of the line of ``(0,1)``)."""
    return line_stabilizer(ctx, [(0, 1)])


def torus_normalizer(ctx: ShintaniContext) -> Subgroup:
    """``N_X(T)`` for the diagonal torus (the stabilizer of the pair of coordinate lines)."""
    return line_stabilizer(ctx, [(1, 0), (0, 1)])


def whole_extended(ctx: ShintaniContext) -> Subgroup:
    table = ctx.X.table
    return Subgroup(table, np.arange(len(table)), list(table.gen_indices))


def conjugates_containing(ctx: ShintaniContext, H: Subgroup, z: int) -> int:
    """Number of ``X``-conjugates of ``H`` containing the element ``z``."""
    from .overgroups import conjugate_subgroups

    return sum(1 for K in conjugate_subgroups(ctx.X, H) if K.mask[z])


def parabolic_count_check(ctx: ShintaniContext) -> bool:
    """Borel subgroups normalized by ``g sigma`` versus Borel subgroups of ``SL2(q0)`` containing the image.

    The coset side is counted twice: as fixed projective points of ``g sigma``
    and as conjugates of the Borel normalizer containing ``g sigma``.
    """
    smap = _require_map(ctx)
    if not smap.complete:
        return False
    H = borel_normalizer(ctx)
    table = ctx.X.table
    classes = {c.index: c for c in coset_classes(ctx)}
    for entry in smap.entries:
        c = classes[entry.coset_class]
        z = table.perm(c.rep_index)
        lines = _fixed_lines(ctx.F, ctx.points, ctx.point_index, z)
        if lines != conjugates_containing(ctx, H, c.rep_index):
            return False
        image = lang_steinberg(ctx, c.g).image
        target = _fixed_lines(ctx.F0, ctx.points0, ctx.point_index0, ctx.matrix_perm0(image))
        if lines != target:
            return False
    return True


def parabolic_counts(ctx: ShintaniContext) -> list[tuple[int, int]]:
    """``(coset side, fixed side)`` Borel counts per coset class."""
    out = []
    for c in coset_classes(ctx):
        z = ctx.X.table.perm(c.rep_index)
        image = lang_steinberg(ctx, c.g).image
        out.append((_fixed_lines(ctx.F, ctx.points, ctx.point_index, z),
                    _fixed_lines(ctx.F0, ctx.points0, ctx.point_index0, ctx.matrix_perm0(image))))
    return out


def centralizer_bound_check(ctx: ShintaniContext, H: Subgroup) -> bool:
    """Conjugates of ``H`` containing ``g sigma`` number at most ``|C_SL2(q0)(F(g sigma))|``."""
    smap = _require_map(ctx)
    if not smap.complete:
        return False
    cent0 = {c.label: c.centralizer_order for c in conjugacy_classes(ctx.fixed)}
    classes = {c.index: c for c in coset_classes(ctx)}
    for entry in smap.entries:
        c = classes[entry.coset_class]
        if conjugates_containing(ctx, H, c.rep_index) > cent0[entry.image_label]:
            return False
    return True


__all__ = [
    "ShintaniContext", "coset_classes", "class_count_check", "order_law", "lang_steinberg",
    "shintani_map", "parabolic_count_check", "centralizer_bound_check", "borel_normalizer",
    "torus_normalizer", "whole_extended", "conjugates_containing"
]
