"""The Q(a, b, s, F_1..F_b) gadget and its explicit H-factor.

Q has a independent clusters of size s and b forest clusters, the j-th inducing the
forest F_j on 2s vertices, with every pair of vertices in different clusters adjacent.
When a + 2b = f(H), Q has an H-factor that can be written down directly: build a matrix
whose rows are permutations of an optimal acyclic partition T_0..T_{r-1} of H, split
some columns into the two colour classes of each forest block, and read each row of
the stacked matrix as one copy of H.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import ArbortileError, ArityError, ConstructionBug, NotInHtilde
from .factor import Check, HCopy, TilingCertificate, has_factor, verify_tiling
from .graph import Graph, disjoint_union, is_forest
from .invariants import (AcyclicPartition, f_value, forest_bipartition, in_Htilde,
                         vertex_arboricity)

Q_SOLVER_CAP = 60


@dataclass(frozen=True)
class Segment:
    """A stretch of a forest cluster holding one copy of H[T_block]."""
    block: int
    tag: int
    h_vertices: tuple  # sorted vertices of T_block; the i-th sits at offset start + i
    start: int


@dataclass
class QSpec:
    h: Graph
    a: int
    b: int
    s: int
    partition: AcyclicPartition  # blocks T_0..T_{r-1} in matrix order
    forests: list = field(default_factory=list)
    layouts: list = field(default_factory=list)  # per forest: list of Segment
    case: str = "even"  # "even" when f = 2r, "odd" when f = 2r - 1

    @property
    def r(self) -> int:
        return len(self.partition.blocks)

    @property
    def order(self) -> int:
        return self.s * self.a + 2 * self.s * self.b

    def problems(self) -> list[str]:
        out = []
        if len(self.forests) != self.b:
            out.append("forest-count")
        for f in self.forests:
            if f.n != 2 * self.s:
                out.append("forest-size")
            if not is_forest(f):
                out.append("forest-acyclic")
        return out


@dataclass
class QGraph:
    graph: Graph
    clusters: list  # list of sorted vertex lists U_1..U_{a+b}


def _forest_from_segments(h: Graph, segments: list[Segment]) -> Graph:
    parts = [h.induced(seg.h_vertices)[0] for seg in segments]
    return disjoint_union(*parts)


def _layout(h: Graph, blocks: tuple, pieces: list[tuple[int, int]]) -> list[Segment]:
    segs = []
    start = 0
    for k, tag in pieces:
        segs.append(Segment(k, tag, tuple(blocks[k]), start))
        start += len(blocks[k])
    return segs


def plan_q(h: Graph, a: int, b: int, partition: Optional[AcyclicPartition] = None) -> QSpec:
    """Choose s, the block order and the forests F_1..F_b for Q(a, b) built from H.

    When f(H) is odd the independent block of an H~ witness is placed first; a caller
    supplied `partition` is checked rather than trusted.
    """
    if a < 0 or b < 0:
        raise ArityError("a and b must be non-negative")
    f = f_value(h)
    if a + 2 * b != f:
        raise ArityError(f"a + 2b = {a + 2 * b} but f(H) = {f}")
    r, witness = vertex_arboricity(h)
    if f == 2 * r:
        part = partition or witness.canonical(witness.blocks)
        if len(part.blocks) != r or not part.verify(h):
            raise ArityError("partition is not an optimal acyclic partition")
        blocks = part.blocks
        pieces = [(k, tag) for k in range(r) for tag in (0, 1)]
        layouts = [_layout(h, blocks, pieces) for _ in range(b)]
        forests = [_forest_from_segments(h, lay) for lay in layouts]
        return QSpec(h, a, b, h.n, part, forests, layouts, "even")

    if partition is None:
        member, partition = in_Htilde(h)
        if not member:
            raise NotInHtilde("f(H) is odd but no witness partition was found")
    blocks = partition.blocks
    t0 = len(blocks[0])
    if (len(blocks) != r or not partition.verify(h)
            or any(h.nbr[v] & sum(1 << u for u in blocks[0]) for v in blocks[0])
            or any(len(t) != 2 * t0 for t in blocks[1:])
            or (2 * h.n) % (2 * r - 1)):
        raise NotInHtilde("partition does not witness membership in H~")
    s = 2 * h.n // (2 * r - 1)
    layouts = [_layout(h, blocks, [(r - b + i, 0), (r - b + i, 1)]) for i in range(b)]
    forests = [_forest_from_segments(h, lay) for lay in layouts]
    return QSpec(h, a, b, s, partition, forests, layouts, "odd")


def build_q(spec: QSpec) -> QGraph:
    """Vertices are numbered cluster by cluster; forest clusters follow their forest's numbering."""
    clusters = []
    edges = []
    start = 0
    for _ in range(spec.a):
        clusters.append(list(range(start, start + spec.s)))
        start += spec.s
    for f in spec.forests:
        clusters.append(list(range(start, start + f.n)))
        edges.extend((u + start, v + start) for u, v in f.edges)
        start += f.n
    for i in range(len(clusters)):
        for j in range(i + 1, len(clusters)):
            edges.extend((u, v) for u in clusters[i] for v in clusters[j])
    return QGraph(Graph.from_edges(start, edges), clusters)


def _rows(spec: QSpec) -> list[list[tuple]]:
    """Rows of the stacked matrix.  Each cell is (kind, block, detail):

    ("ind", k, half) places half `half` (0, 1, or None for the whole block) of T_k in
    an independent cluster; ("forest", k, tag) places T_k on the forest copy `tag`.
    """
    r, a, b = spec.r, spec.a, spec.b
    rows = []
    if spec.case == "even":
        half_cols = a // 2
        for swap in (0, 1):
            for i in range(r):
                row = []
                for j in range(half_cols):
                    k = (i + j + 1) % r
                    row.append(("ind", k, swap))
                    row.append(("ind", k, 1 - swap))
                for j in range(half_cols, half_cols + b):
                    row.append(("forest", (i + j + 1) % r, swap))
                rows.append(row)
    else:
        split = (a - 1) // 2
        for swap in (0, 1):
            row = [("ind", 0, None)]
            for k in range(1, split + 1):
                row.append(("ind", k, swap))
                row.append(("ind", k, 1 - swap))
            for k in range(r - b, r):
                row.append(("forest", k, swap))
            rows.append(row)
    return rows


def h_factor_in_q(h: Graph, spec: QSpec, q: Optional[QGraph] = None) -> TilingCertificate:
    """Read each row of the stacked block matrix as one explicit copy of H in Q."""
    if q is None:
        q = build_q(spec)
    blocks = spec.partition.blocks
    halves = [forest_bipartition(h, t) for t in blocks]
    fill = [0] * len(q.clusters)
    copies = []
    for row in _rows(spec):
        if len(row) != spec.a + spec.b:
            raise ConstructionBug("row length differs from cluster count")
        phi = [None] * h.n
        for col, (kind, k, detail) in enumerate(row):
            cluster = q.clusters[col]
            if kind == "ind":
                part = list(blocks[k]) if detail is None else halves[k][detail]
                for x in sorted(part):
                    if fill[col] >= len(cluster):
                        raise ConstructionBug(f"cluster {col} overfilled")
                    phi[x] = cluster[fill[col]]
                    fill[col] += 1
            else:
                layout = spec.layouts[col - spec.a]
                seg = next((sg for sg in layout if sg.block == k and sg.tag == detail), None)
                if seg is None:
                    raise ConstructionBug(f"forest cluster {col} lacks a copy of block {k}")
                for i, x in enumerate(seg.h_vertices):
                    phi[x] = cluster[seg.start + i]
        if any(p is None for p in phi):
            raise ConstructionBug("row does not cover every vertex of H")
        copies.append(HCopy(tuple(phi)))
    return TilingCertificate(copies)


def verify_q(h: Graph, spec: QSpec, solver_cap: int = Q_SOLVER_CAP) -> Check:
    """Check the matrix certificate and, for small Q, confirm with the exact solver."""
    bad = spec.problems()
    if bad:
        return Check(False, bad[0])
    try:
        q = build_q(spec)
        cert = h_factor_in_q(h, spec, q)
    except ArbortileError as exc:
        return Check(False, f"construction: {exc}")
    ok = verify_tiling(q.graph, h, cert, require_factor=True)
    if not ok:
        return ok
    if q.graph.n <= solver_cap:
        found, _ = has_factor(q.graph, h)
        if not found:
            return Check(False, "exact solver disagrees")
    return Check(True)


def admissible_pairs(h: Graph) -> list[tuple[int, int]]:
    """All (a, b) with a + 2b = f(H) and a, b >= 0."""
    f = f_value(h)
    return [(f - 2 * b, b) for b in range(f // 2 + 1)]
