"""Simple graphs on dense integer vertex ids, plus the exact small-graph invariants
every other module leans on (degree, independence number, girth, forests).

Adjacency is kept as Python ints used as bitsets; ``g.nbr[v] >> u & 1`` tests an edge.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Optional

from .errors import CapExceeded, EmptyGraphError

INFINITE = math.inf

DEFAULT_ALPHA_CAP = 80


def bits(mask: int) -> Iterator[int]:
    """Yield the positions of set bits in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset = frozenset()
    name: Optional[str] = None
    nbr: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        norm = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge {u}-{v} out of range for n={self.n}")
            norm.add((u, v) if u < v else (v, u))
        object.__setattr__(self, "edges", frozenset(norm))
        nbr = [0] * self.n
        for u, v in norm:
            nbr[u] |= 1 << v
            nbr[v] |= 1 << u
        object.__setattr__(self, "nbr", tuple(nbr))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable, name: str | None = None) -> "Graph":
        return cls(n, frozenset(tuple(e) for e in edges), name)

    @property
    def all_mask(self) -> int:
        return (1 << self.n) - 1

    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.nbr[u] >> v & 1)

    def degree(self, v: int) -> int:
        return popcount(self.nbr[v])

    def neighbors(self, v: int) -> list[int]:
        return list(bits(self.nbr[v]))

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph relabelled to 0..k-1; also returns the new->old id list."""
        order = sorted(set(vertices))
        index = {v: i for i, v in enumerate(order)}
        edges = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return Graph.from_edges(len(order), edges), order

    def relabel(self, perm: list[int]) -> "Graph":
        """Graph with vertex v renamed perm[v]."""
        return Graph.from_edges(self.n, [(perm[u], perm[v]) for u, v in self.edges], self.name)

    def edges_within(self, mask: int) -> int:
        return sum(popcount(self.nbr[v] & mask) for v in bits(mask)) // 2


def disjoint_union(*graphs: Graph) -> Graph:
    edges = []
    offset = 0
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges)
        offset += g.n
    return Graph.from_edges(offset, edges)


# ---------------------------------------------------------------- constructors

def complete_graph(r: int) -> Graph:
    return Graph.from_edges(r, combinations(range(r), 2), name=f"K{r}")


def empty_graph(r: int) -> Graph:
    return Graph(r, frozenset(), name=f"E{r}")


def cycle_graph(r: int) -> Graph:
    if r < 3:
        raise ValueError("cycles need at least 3 vertices")
    return Graph.from_edges(r, [(i, (i + 1) % r) for i in range(r)], name=f"C{r}")


def path_graph(r: int) -> Graph:
    return Graph.from_edges(r, [(i, i + 1) for i in range(r - 1)], name=f"P{r}")


def star_graph(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)], name=f"K1,{leaves}")


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner, name="Petersen")


def complete_multipartite(sizes: list[int]) -> Graph:
    if not sizes or any(s < 1 for s in sizes):
        raise ValueError("sizes must be a nonempty list of positive integers")
    part = []
    for i, s in enumerate(sizes):
        part.extend([i] * s)
    n = len(part)
    edges = [(u, v) for u, v in combinations(range(n), 2) if part[u] != part[v]]
    return Graph.from_edges(n, edges, name="K" + ",".join(map(str, sizes)))


# ---------------------------------------------------------------- invariants

def min_degree(g: Graph) -> int:
    if g.n == 0:
        raise EmptyGraphError("minimum degree of the empty graph")
    return min(popcount(x) for x in g.nbr)


def components(g: Graph, within: int | None = None) -> list[list[int]]:
    """Connected components (each sorted, listed by smallest member)."""
    rest = g.all_mask if within is None else within
    out = []
    while rest:
        comp = _component_mask(g.nbr, rest & -rest, rest)
        out.append(list(bits(comp)))
        rest &= ~comp
    return out


def _component_mask(nbr, seed: int, within: int) -> int:
    comp = seed
    frontier = seed
    while frontier:
        grow = 0
        for v in bits(frontier):
            grow |= nbr[v]
        grow &= within & ~comp
        comp |= grow
        frontier = grow
    return comp


def is_forest_mask(g: Graph, mask: int) -> bool:
    """Acyclic iff e(G[S]) = |S| - c(G[S])."""
    if not mask:
        return True
    e = g.edges_within(mask)
    size = popcount(mask)
    if e >= size:
        return False
    comps = 0
    rest = mask
    while rest:
        rest &= ~_component_mask(g.nbr, rest & -rest, rest)
        comps += 1
    return e == size - comps


def is_forest(g: Graph, s: Iterable[int] | None = None) -> bool:
    mask = g.all_mask if s is None else to_mask(s)
    if mask >> g.n:
        raise ValueError("vertex set out of range")
    return is_forest_mask(g, mask)


def girth(g: Graph) -> float | int:
    """Length of a shortest cycle; INFINITE for forests."""
    best = INFINITE
    for root in range(g.n):
        dist = {root: 0}
        parent = {root: -1}
        queue = [root]
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            if 2 * dist[u] >= best:
                break
            for w in bits(g.nbr[u]):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


def is_independent(g: Graph, vertices: Iterable[int]) -> bool:
    mask = to_mask(vertices)
    return all(not (g.nbr[v] & mask) for v in bits(mask))


# ---------------------------------------------------------------- independence number

def _clique_cover_bound(nbr, P: int) -> int:
    """Number of cliques in a greedy clique cover of G[P]; an upper bound on alpha(G[P])."""
    count = 0
    rest = P
    while rest:
        v = (rest & -rest).bit_length() - 1
        cand = nbr[v] & rest
        rest &= ~(1 << v)
        while cand:
            u = (cand & -cand).bit_length() - 1
            rest &= ~(1 << u)
            cand &= nbr[u]
        count += 1
    return count


class _MISSearch:
    def __init__(self, nbr, node_budget):
        self.nbr = nbr
        self.nodes = 0
        self.budget = node_budget

    def solve(self, P: int, lb: int) -> int:
        """Max independent set (as mask) in G[P]; a result of size <= lb means "nothing better than lb"."""
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise CapExceeded("independence search node budget exhausted")
        nbr = self.nbr
        taken = 0
        changed = True
        while changed and P:
            changed = False
            for v in bits(P):
                if not (P >> v & 1):
                    continue
                d = nbr[v] & P
                if d & (d - 1) == 0:  # degree 0 or 1: v is in some maximum independent set
                    taken |= 1 << v
                    P &= ~(d | (1 << v))
                    changed = True
        if not P:
            return taken
        k = popcount(taken)
        first = P & -P
        comp = _component_mask(nbr, first, P)
        if comp != P:
            rest = P & ~comp
            return taken | self.solve(comp, 0) | self.solve(rest, 0)
        if k + _clique_cover_bound(nbr, P) <= lb:
            return taken
        v = max(bits(P), key=lambda x: (popcount(nbr[x] & P), -x))
        with_v = (1 << v) | self.solve(P & ~(nbr[v] | (1 << v)), max(lb - k - 1, 0))
        best = with_v
        without_v = self.solve(P & ~(1 << v), max(lb - k, popcount(with_v)))
        if popcount(without_v) > popcount(best):
            best = without_v
        return taken | best


def independence_number(g: Graph, cap: int = DEFAULT_ALPHA_CAP,
                        node_budget: int | None = None) -> tuple[int, list[int]]:
    """Exact alpha(G) with a witness set, by branch-and-bound with greedy clique-cover pruning."""
    if g.n > cap:
        raise CapExceeded(f"n={g.n} exceeds exact independence cap {cap}; use independence_bounds")
    best = _MISSearch(g.nbr, node_budget).solve(g.all_mask, 0)
    return popcount(best), list(bits(best))


def greedy_independent_set(g: Graph) -> list[int]:
    P = g.all_mask
    out = 0
    while P:
        v = min(bits(P), key=lambda x: (popcount(g.nbr[x] & P), x))
        out |= 1 << v
        P &= ~(g.nbr[v] | (1 << v))
    return list(bits(out))


def independence_bounds(g: Graph) -> tuple[int, int, list[int]]:
    """Certified interval [lower, upper] for alpha(G): greedy witness and clique-cover bound."""
    witness = greedy_independent_set(g)
    upper = _clique_cover_bound(g.nbr, g.all_mask)
    return len(witness), upper, witness


def alpha_upper_bound(g: Graph, cap: int = DEFAULT_ALPHA_CAP) -> tuple[int, bool]:
    """(bound, exact). Exact value when n <= cap, otherwise the certified upper bound."""
    if g.n <= cap:
        return independence_number(g, cap)[0], True
    return independence_bounds(g)[1], False
