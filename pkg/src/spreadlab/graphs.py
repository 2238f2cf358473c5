"""Generating graphs and product replacement graphs.

Adjacency rows of the generating graph are stored as packed bits.  Rows of
class representatives come from generation tests (one per centralizer
orbit) and the remaining rows by conjugating them, since ``<x^g, y^g>`` is
``<x, y>^g``.  Distances are conjugation invariant too, so eccentricities are
computed from one vertex per class.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .classes import conjugacy_classes
from .genlib import GenContext
from .group import BoundExceeded, PermGroup

GRAPH_ORDER_LIMIT = 100_000
ALL_SOURCES_LIMIT = 5000
PRG_TUPLE_LIMIT = 10_000_000
GRAPH_FORMAT = "spreadlab-generating-graph"
GRAPH_FORMAT_VERSION = 1


class DichotomyViolation(RuntimeError):
    """Neither an isolated vertex nor diameter at most 2; carries the offending pair."""

    def __init__(self, pair, distance):
        super().__init__(f"dichotomy violated by vertices {pair[0]} and {pair[1]} at distance {distance}")
        self.pair = pair
        self.distance = distance


@dataclass
class GeneratingGraph:
    """Generating graph on the nontrivial elements.

    ``vertices`` are element-table indices; ``rows[i]`` is the packed
    adjacency row of vertex ``i`` (bit ``j`` set when ``<v_i, v_j> = G``).
    There are no loops; ``generates_alone`` marks vertices with ``<v> = G``
    (only possible for cyclic ``G``).
    """

    group: PermGroup
    vertices: np.ndarray
    rows: np.ndarray  # uint8, packed little-endian bits
    class_of_vertex: np.ndarray
    generates_alone: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def row(self, i: int) -> np.ndarray:
        return np.unpackbits(self.rows[i], count=self.n, bitorder="little").astype(bool)

    def adjacent(self, i: int, j: int) -> bool:
        return bool(self.rows[i, j >> 3] >> (j & 7) & 1)

    def degrees(self) -> np.ndarray:
        if "deg" not in self._cache:
            self._cache["deg"] = np.unpackbits(self.rows, axis=1, count=self.n, bitorder="little").sum(axis=1)
        return self._cache["deg"]

    def edge_count(self) -> int:
        return int(self.degrees().sum()) // 2

    def isolated(self) -> list[int]:
        """Vertices lying in no generating pair.

        A vertex that generates ``G`` by itself is its own partner and is not
        counted, which only matters for groups of order 2.
        """
        return [int(i) for i in np.nonzero((self.degrees() == 0) & ~self.generates_alone)[0]]

    def label(self, i: int) -> str:
        return str(self.group.table.perm(int(self.vertices[i])))

    def bfs(self, source: int) -> np.ndarray:
        """Distances from ``source`` (-1 where unreachable)."""
        dist = np.full(self.n, -1, dtype=np.int64)
        dist[source] = 0
        seen = np.zeros(self.rows.shape[1], dtype=np.uint8)
        seen[source >> 3] |= np.uint8(1 << (source & 7))
        frontier = np.array([source])
        d = 0
        while len(frontier):
            d += 1
            reach = np.bitwise_or.reduce(self.rows[frontier], axis=0)
            new = reach & ~seen
            if not new.any():
                break
            seen |= new
            idx = np.nonzero(np.unpackbits(new, count=self.n, bitorder="little"))[0]
            dist[idx] = d
            frontier = idx
        return dist

    def class_sources(self) -> list[int]:
        _, first = np.unique(self.class_of_vertex, return_index=True)
        return [int(i) for i in first]

    def bfs_sources(self) -> list[int]:
        """Every vertex for small graphs, else one per class (distances are conjugation invariant)."""
        return list(range(self.n)) if self.n <= ALL_SOURCES_LIMIT else self.class_sources()

    def components(self) -> int:
        if "comp" not in self._cache:
            from scipy.sparse import csr_matrix
            from scipy.sparse.csgraph import connected_components

            dense = np.unpackbits(self.rows, axis=1, count=self.n, bitorder="little")
            self._cache["comp"] = connected_components(csr_matrix(dense), directed=False)[0] if self.n else 0
        return self._cache["comp"]

    def diameter(self) -> float:
        """Largest distance; ``inf`` when disconnected."""
        if "diam" not in self._cache:
            best = 0
            for s in self.bfs_sources():
                dist = self.bfs(s)
                if np.any(dist < 0):
                    best = float("inf")
                    break
                best = max(best, int(dist.max()))
            self._cache["diam"] = best
        return self._cache["diam"]

    # --- export ---------------------------------------------------------------

    def edges(self):
        for i in range(self.n):
            r = self.row(i)
            for j in np.nonzero(r[i + 1:])[0]:
                yield i, i + 1 + int(j)

    def to_dimacs(self, name: str = "") -> str:
        """DIMACS-style edge list; vertices numbered from 1, labels in ``c v`` lines."""
        lines = [f"c generating graph {name}".rstrip(), f"c order {self.group.order}"]
        for i in range(self.n):
            lines.append(f"c v {i + 1} {self.label(i)}")
        edges = list(self.edges())
        lines.append(f"p edge {self.n} {len(edges)}")
        lines.extend(f"e {i + 1} {j + 1}" for i, j in edges)
        return "\n".join(lines) + "\n"

    def to_json(self, name: str = "") -> dict:
        """JSON form; ``edges`` are 0-based index pairs into ``vertices``."""
        diam = self.diameter()
        return {
            "format": GRAPH_FORMAT,
            "version": GRAPH_FORMAT_VERSION,
            "group": name,
            "order": self.group.order,
            "vertices": [self.label(i) for i in range(self.n)],
            "edges": [[i, j] for i, j in self.edges()],
            "isolated": [self.label(i) for i in self.isolated()],
            "components": self.components(),
            "diameter": None if diam == float("inf") else diam,
        }


def parse_dimacs(text: str) -> tuple[list[str], list[tuple[int, int]]]:
    """Vertex labels and 0-based edges from :meth:`GeneratingGraph.to_dimacs` output."""
    labels: dict[int, str] = {}
    edges = []
    n = None
    for line in text.splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "c" and len(parts) >= 4 and parts[1] == "v":
            labels[int(parts[2]) - 1] = parts[3]
        elif parts[0] == "p":
            n = int(parts[2])
        elif parts[0] == "e":
            edges.append((int(parts[1]) - 1, int(parts[2]) - 1))
    if n is None:
        raise ValueError("missing problem line")
    return [labels.get(i, str(i + 1)) for i in range(n)], edges


def generating_graph(G: PermGroup, limit: int = GRAPH_ORDER_LIMIT) -> GeneratingGraph:
    if G.order > limit:
        raise BoundExceeded("generating graph", G.order, limit)
    if "gengraph" in G._cache:
        return G._cache["gengraph"]
    ctx = GenContext.of(G)
    table = ctx.table
    verts = np.array([i for i in range(G.order) if i != table.identity], dtype=np.int64)
    n = len(verts)
    pos = np.full(G.order, -1, dtype=np.int64)
    pos[verts] = np.arange(n)
    width = (n + 7) // 8
    rows = np.zeros((n, width), dtype=np.uint8)
    cmaps = [pos[mp[verts]] for mp in table.conj_gen_maps]
    class_of_vertex = ctx.class_of[verts]
    for c in ctx.classes:
        if c.order == 1:
            continue
        # generating partners of the representative, one test per centralizer orbit
        orbits = ctx.centralizer_orbits(c.rep_index, verts)
        reps = np.array([int(o[0]) for o in orbits], dtype=np.int64)
        gen = table.generates_with(c.rep_index, reps)
        rep_row = np.zeros(n, dtype=bool)
        for o, g in zip(orbits, gen):
            if g:
                rep_row[pos[o]] = True
        done = {c.rep_index: rep_row}
        queue = [c.rep_index]
        for m in queue:
            r = done[m]
            for gi, mp in enumerate(table.conj_gen_maps):
                img = int(mp[m])
                if img not in done:
                    nr = np.zeros(n, dtype=bool)
                    nr[cmaps[gi]] = r
                    done[img] = nr
                    queue.append(img)
        for m, r in done.items():
            r[pos[m]] = False
            rows[pos[m]] = np.packbits(r, bitorder="little")
    alone = table.orders[verts] == G.order
    graph = GeneratingGraph(G, verts, rows, class_of_vertex, alone)
    G._cache["gengraph"] = graph
    return graph


@dataclass
class DichotomyResult:
    branch: str  # "isolated" or "diameter-at-most-2"
    evidence: dict


def dichotomy_check(G: PermGroup) -> DichotomyResult:
    """Which branch holds: some isolated vertex, or connected with diameter at most 2."""
    graph = generating_graph(G)
    iso = graph.isolated()
    if iso:
        return DichotomyResult("isolated", {"vertex": graph.label(iso[0]), "count": len(iso)})
    for s in graph.bfs_sources():
        dist = graph.bfs(s)
        bad = np.nonzero((dist < 0) | (dist > 2))[0]
        if len(bad):
            j = int(bad[0])
            d = int(dist[j])
            raise DichotomyViolation((graph.label(s), graph.label(j)), float("inf") if d < 0 else d)
    return DichotomyResult("diameter-at-most-2", {"diameter": graph.diameter(), "vertices": graph.n})


# --- product replacement graph ----------------------------------------------------

@dataclass
class PRGraph:
    """Generating ``k``-tuples (as element-index rows) with component labels."""

    group: PermGroup
    k: int
    tuples: np.ndarray
    labels: np.ndarray
    redundant: np.ndarray

    @property
    def components(self) -> int:
        return int(len(np.unique(self.labels))) if len(self.labels) else 0

    def redundant_components(self) -> int:
        return int(len(np.unique(self.labels[self.redundant])))


def _cayley(G: PermGroup) -> np.ndarray:
    table = G.table
    return np.stack([table.right_mul_map(g) for g in range(G.order)], axis=1)


def product_replacement_graph(G: PermGroup, k: int, limit: int = PRG_TUPLE_LIMIT) -> PRGraph:
    """Components of the graph on generating ``k``-tuples under the moves
    ``x_i -> x_i x_j^(+-1)`` and ``x_i -> x_j^(+-1) x_i`` for ``i != j``."""
    N = G.order
    if N ** k > limit:
        raise BoundExceeded("product replacement tuples", N ** k, limit)
    table = G.table
    mul = _cayley(G)  # mul[a, b] = a*b
    inv = table.inverse
    all_t = np.array(list(product(range(N), repeat=k)), dtype=np.int64)
    gen = np.array([table.generates(t) for t in all_t], dtype=bool)
    tuples = all_t[gen]
    weights = N ** np.arange(k - 1, -1, -1)
    codes = tuples @ weights
    index = np.full(N ** k, -1, dtype=np.int64)
    index[codes] = np.arange(len(tuples))
    src, dst = [], []
    for i in range(k):
        for j in range(k):
            if i == j:
                continue
            for xj in (tuples[:, j], inv[tuples[:, j]]):
                for new in (mul[tuples[:, i], xj], mul[xj, tuples[:, i]]):
                    moved = tuples.copy()
                    moved[:, i] = new
                    tgt = index[moved @ weights]
                    if np.any(tgt < 0):
                        raise RuntimeError("a move left the set of generating tuples")
                    src.append(np.arange(len(tuples)))
                    dst.append(tgt)
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components

    m = len(tuples)
    r = np.concatenate(src) if src else np.zeros(0, dtype=np.int64)
    c = np.concatenate(dst) if dst else np.zeros(0, dtype=np.int64)
    graph = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(m, m))
    labels = connected_components(graph, directed=False)[1] if m else np.zeros(0, dtype=np.int64)
    redundant = np.zeros(m, dtype=bool)
    for i in range(k):
        rest = np.delete(tuples, i, axis=1)
        redundant |= np.array([table.generates(t) for t in rest], dtype=bool)
    return PRGraph(G, k, tuples, labels, redundant)


def prg_redundant_connected(G: PermGroup, k: int, limit: int = PRG_TUPLE_LIMIT) -> bool:
    """Whether all redundant generating ``k``-tuples lie in one component."""
    if k < 3:
        raise ValueError("k must be at least 3")
    prg = product_replacement_graph(G, k, limit)
    return prg.redundant_components() <= 1


def graph_json_dumps(graph: GeneratingGraph, name: str = "") -> str:
    return json.dumps(graph.to_json(name), indent=1, sort_keys=True)


@dataclass
class ConjugateGenerationResult:
    involutions_ok: bool
    bad_involution: str | None
    conjugate_pair: tuple[str, str, str] | None  # (class label, x, y)
    elementary_abelian_pp: bool

    @property
    def holds(self) -> bool:
        pair_ok = self.conjugate_pair is not None or self.elementary_abelian_pp
        return self.involutions_ok and pair_ok


def _is_cp_squared(G: PermGroup) -> bool:
    from .fields import prime_power

    if not G.is_abelian():
        return False
    try:
        p, d = prime_power(G.order)
    except ValueError:
        return False
    if d != 2:
        return False
    return all(int(o) in (1, p) for o in G.table.orders)


def conjugate_generation_check(G: PermGroup) -> ConjugateGenerationResult:
    """Every involution in a generating pair, and a pair of conjugate generators."""
    graph = generating_graph(G)
    table = G.table
    pos = {int(v): i for i, v in enumerate(graph.vertices)}
    bad = None
    for i in graph.isolated():
        if int(table.orders[graph.vertices[i]]) == 2:
            bad = graph.label(i)
            break
    pair = None
    for c in conjugacy_classes(G):
        if c.order == 1:
            continue
        if c.order == G.order:
            pair = (c.label, str(c.representative), str(c.representative))
            break
        row = graph.row(pos[c.rep_index])
        hits = [int(m) for m in c.members if row[pos[int(m)]]]
        if hits:
            pair = (c.label, str(c.representative), str(table.perm(hits[0])))
            break
    return ConjugateGenerationResult(bad is None, bad, pair, _is_cp_squared(G))
