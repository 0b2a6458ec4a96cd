"""Exact H-tiling oracle: copy enumeration, factor decision, maximum tilings, verification.

Copies of H are explicit injections V(H) -> V(G).  Enumeration breaks the symmetry of
Aut(H) with ordering constraints phi(v) < phi(u) derived from orbits of pointwise
stabilizers, so every subgraph of G isomorphic to H is produced by exactly one map.

Factor search is an exact cover over the distinct image sets, branching on the
uncovered vertex with the fewest live candidate sets.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import CapExceeded, DivisibilityError
from .graph import Graph, bits, components, popcount, to_mask

DEFAULT_HOST_CAP = 60
DEFAULT_COPY_CAP = 10**6
DEFAULT_NODE_BUDGET = 2 * 10**6
AUT_CAP = 10


@dataclass(frozen=True)
class HCopy:
    map: tuple  # map[v] = image of pattern vertex v

    @property
    def image(self) -> frozenset:
        return frozenset(self.map)

    def mask(self) -> int:
        return to_mask(self.map)


@dataclass
class TilingCertificate:
    copies: list = field(default_factory=list)

    @property
    def covered(self) -> list[int]:
        return sorted(v for c in self.copies for v in c.map)

    def __len__(self):
        return len(self.copies)


@dataclass(frozen=True)
class Check:
    """Outcome of a verification; truthy iff ok.  `reason` names the first failure."""
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


# ---------------------------------------------------------------- automorphisms

def _extend_automorphism(h: Graph, fixed: dict) -> Optional[dict]:
    """Find one automorphism of h agreeing with the partial map `fixed`, or None."""
    n = h.n
    deg = [popcount(x) for x in h.nbr]
    order = sorted(range(n), key=lambda v: (v not in fixed, v))
    phi = dict(fixed)
    used = set(phi.values())
    for v, w in fixed.items():
        if deg[v] != deg[w]:
            return None
    for v in fixed:
        for u in fixed:
            if h.has_edge(v, u) != h.has_edge(phi[v], phi[u]):
                return None

    free = [v for v in order if v not in fixed]

    def rec(i):
        if i == len(free):
            return True
        v = free[i]
        for w in range(n):
            if w in used or deg[w] != deg[v]:
                continue
            if all(h.has_edge(v, u) == h.has_edge(w, phi[u]) for u in phi):
                phi[v] = w
                used.add(w)
                if rec(i + 1):
                    return True
                del phi[v]
                used.discard(w)
        return False

    return phi if rec(0) else None


def automorphisms(h: Graph, cap: int = AUT_CAP) -> list[tuple]:
    """All automorphisms of a small pattern as permutation tuples (brute-force search)."""
    if h.n > cap:
        raise CapExceeded(f"|V(H)|={h.n} exceeds automorphism cap {cap}")
    out = []
    n = h.n
    deg = [popcount(x) for x in h.nbr]
    phi = [None] * n
    used = [False] * n

    def rec(v):
        if v == n:
            out.append(tuple(phi))
            return
        for w in range(n):
            if used[w] or deg[w] != deg[v]:
                continue
            if all(h.has_edge(v, u) == h.has_edge(w, phi[u]) for u in range(v)):
                phi[v] = w
                used[w] = True
                rec(v + 1)
                used[w] = False
        phi[v] = None

    rec(0)
    return out


def symmetry_constraints(h: Graph) -> list[tuple[int, int]]:
    """Pairs (v, u) meaning phi(v) < phi(u), one canonical map per subgraph image.

    Repeatedly pick the smallest vertex with a nontrivial orbit under the current
    pointwise stabilizer, require it to receive the smallest image in its orbit, then
    fix it.
    """
    fixed: dict = {}
    constraints = []
    for v in range(h.n):
        orbit = [u for u in range(h.n) if u != v and u not in fixed
                 and _extend_automorphism(h, {**fixed, v: u}) is not None]
        constraints.extend((v, u) for u in orbit)
        fixed[v] = v
    return constraints


# ---------------------------------------------------------------- copy enumeration

def _search_order(h: Graph) -> list[int]:
    """Place vertices with many already-placed neighbours early (tight candidate sets)."""
    remaining = set(range(h.n))
    order = []
    placed = 0
    while remaining:
        v = max(remaining, key=lambda x: (popcount(h.nbr[x] & placed), popcount(h.nbr[x]), -x))
        order.append(v)
        placed |= 1 << v
        remaining.discard(v)
    return order


class _Stop(Exception):
    pass


def walk_copies(g: Graph, h: Graph, visit, constraints=None, within: int | None = None) -> bool:
    """Call visit(map_tuple) for every canonical copy; a truthy return stops the walk.

    Returns True if the walk was stopped early.
    """
    if h.n == 0 or h.n > g.n:
        return False
    if constraints is None:
        constraints = symmetry_constraints(h)
    order = _search_order(h)
    pos = {v: i for i, v in enumerate(order)}
    n_h = h.n
    # everything below is indexed by search position
    lower = [[] for _ in range(n_h)]  # phi at this position exceeds phi at these positions
    upper = [[] for _ in range(n_h)]
    for a, b in constraints:  # phi(a) < phi(b)
        if pos[a] < pos[b]:
            lower[pos[b]].append(pos[a])
        else:
            upper[pos[a]].append(pos[b])
    hdeg = [popcount(h.nbr[v]) for v in order]
    gdeg = [popcount(x) for x in g.nbr]
    universe = g.all_mask if within is None else within
    pool = [to_mask(x for x in bits(universe) if gdeg[x] >= d) for d in hdeg]
    earlier = [[pos[u] for u in order[:i] if h.has_edge(u, order[i])] for i in range(n_h)]
    nbr = g.nbr
    img = [0] * n_h
    inverse = [pos[v] for v in range(n_h)]

    def rec(i, used):
        cand = pool[i] & ~used
        for j in earlier[i]:
            cand &= nbr[img[j]]
        for j in lower[i]:
            cand &= ~((2 << img[j]) - 1)
        for j in upper[i]:
            cand &= (1 << img[j]) - 1
        last = i == n_h - 1
        while cand:
            low = cand & -cand
            cand ^= low
            img[i] = low.bit_length() - 1
            if last:
                if visit(tuple(img[k] for k in inverse)):
                    raise _Stop
            else:
                rec(i + 1, used | low)

    try:
        rec(0, 0)
    except _Stop:
        return True
    return False


def enumerate_copies(g: Graph, h: Graph, cap: int = DEFAULT_COPY_CAP) -> tuple[list[HCopy], bool]:
    """Canonical copies of H in G; second value is True when the list was cut off at `cap`."""
    out = []

    def visit(phi):
        if len(out) >= cap:
            return True
        out.append(HCopy(phi))
        return False

    truncated = walk_copies(g, h, visit)
    return out, truncated


def image_sets(g: Graph, h: Graph, cap: int = DEFAULT_COPY_CAP, within: int | None = None) -> dict:
    """Map from image mask to one witness copy, over all copies inside `within`."""
    seen: dict = {}
    count = [0]

    def visit(phi):
        count[0] += 1
        if count[0] > cap:
            raise CapExceeded(f"more than {cap} copies of H")
        m = 0
        for x in phi:
            m |= 1 << x
        if m not in seen:
            seen[m] = HCopy(phi)
        return False

    walk_copies(g, h, visit, within=within)
    return seen


# ---------------------------------------------------------------- exact cover

class _Cover:
    """Exact-cover / max-packing search over image masks with bitset row indices."""

    def __init__(self, rows: list[int], vertices: int, node_budget: int):
        self.rows = rows
        self.rows_of = {}
        for i, m in enumerate(rows):
            for v in bits(m):
                self.rows_of[v] = self.rows_of.get(v, 0) | (1 << i)
        self.vertices = vertices
        self.nodes = 0
        self.budget = node_budget
        self.failed: set = set()

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise CapExceeded(f"exact-cover node budget {self.budget} exhausted")

    def _kill(self, mask: int) -> int:
        k = 0
        for v in bits(mask):
            k |= self.rows_of.get(v, 0)
        return k

    def exact(self, uncovered: int, alive: int) -> Optional[list[int]]:
        if not uncovered:
            return []
        if uncovered in self.failed:
            return None
        self._tick()
        best_v, best_rows, best_c = -1, 0, None
        for v in bits(uncovered):
            r = self.rows_of.get(v, 0) & alive
            c = popcount(r)
            if best_c is None or c < best_c:
                best_v, best_rows, best_c = v, r, c
                if c == 0:
                    break
        if best_c == 0:
            self.failed.add(uncovered)
            return None
        for i in bits(best_rows):
            m = self.rows[i]
            sub = self.exact(uncovered & ~m, alive & ~self._kill(m))
            if sub is not None:
                return [i] + sub
        self.failed.add(uncovered)
        return None


def _lp_packing_bound(rows: list[int]) -> Fraction:
    """Certified upper bound on the number of disjoint rows, via a rounded LP dual.

    Solves min sum y_v s.t. sum_{v in row} y_v >= 1 numerically, rounds y to rationals,
    and rescales so every constraint holds exactly; the rescaled objective is a valid
    bound whatever the floating-point error.
    """
    if not rows:
        return Fraction(0)
    import numpy as np
    from scipy.optimize import linprog
    from scipy.sparse import lil_matrix

    verts = sorted({v for m in rows for v in bits(m)})
    idx = {v: i for i, v in enumerate(verts)}
    a = lil_matrix((len(rows), len(verts)))
    for r, m in enumerate(rows):
        for v in bits(m):
            a[r, idx[v]] = -1.0
    res = linprog(np.ones(len(verts)), A_ub=a.tocsr(), b_ub=-np.ones(len(rows)),
                  bounds=(0, None), method="highs")
    if res.status != 0:
        return Fraction(len(verts))
    y = [max(Fraction(float(x)).limit_denominator(10**6), Fraction(0)) for x in res.x]
    worst = min(sum(y[idx[v]] for v in bits(m)) for m in rows)
    if worst <= 0:
        return Fraction(len(verts))
    return sum(y) / worst


def _matching_factor(g: Graph) -> Optional[list[HCopy]]:
    import networkx as nx
    nxg = nx.Graph()
    nxg.add_nodes_from(range(g.n))
    nxg.add_edges_from(g.edges)
    mate = nx.max_weight_matching(nxg, maxcardinality=True)
    return [HCopy(tuple(sorted(e))) for e in sorted(tuple(sorted(e)) for e in mate)]


def _is_single_edge(h: Graph) -> bool:
    return h.n == 2 and h.m() == 1


def has_factor(g: Graph, h: Graph, host_cap: int = DEFAULT_HOST_CAP,
               copy_cap: int = DEFAULT_COPY_CAP,
               node_budget: int = DEFAULT_NODE_BUDGET) -> tuple[bool, Optional[TilingCertificate]]:
    """Decide whether G has an H-factor; on success also return a witness tiling."""
    if h.n == 0 or g.n % h.n:
        raise DivisibilityError(f"|V(H)|={h.n} does not divide |V(G)|={g.n}")
    if g.n == 0:
        return True, TilingCertificate([])
    if g.n > host_cap:
        raise CapExceeded(f"|V(G)|={g.n} exceeds host cap {host_cap}")
    if _is_single_edge(h):
        copies = _matching_factor(g)
        if 2 * len(copies) == g.n:
            return True, TilingCertificate(copies)
        return False, None

    connected = len(components(h)) == 1
    parts = [to_mask(c) for c in components(g)] if connected else [g.all_mask]
    if any(popcount(p) % h.n for p in parts):
        return False, None
    copies = []
    for part in parts:
        found = image_sets(g, h, cap=copy_cap, within=part)
        rows = sorted(found)
        if not rows:
            return False, None
        if _lp_packing_bound(rows) < Fraction(popcount(part), h.n):
            return False, None
        solver = _Cover(rows, part, node_budget)
        chosen = solver.exact(part, (1 << len(rows)) - 1)
        if chosen is None:
            return False, None
        copies.extend(found[rows[i]] for i in chosen)
    copies.sort(key=lambda c: min(c.map))
    return True, TilingCertificate(copies)


def max_tiling(g: Graph, h: Graph, host_cap: int = DEFAULT_HOST_CAP,
               copy_cap: int = DEFAULT_COPY_CAP,
               node_budget: int = DEFAULT_NODE_BUDGET) -> TilingCertificate:
    """A maximum-cardinality H-tiling, by branch and bound with LP-dual pruning."""
    if g.n > host_cap:
        raise CapExceeded(f"|V(G)|={g.n} exceeds host cap {host_cap}")
    if h.n == 0:
        return TilingCertificate([])
    if _is_single_edge(h):
        return TilingCertificate(_matching_factor(g))
    found = image_sets(g, h, cap=copy_cap)
    rows = sorted(found)
    if not rows:
        return TilingCertificate([])
    best = _MaxPacking(rows, h.n, node_budget).solve()
    copies = sorted((found[rows[i]] for i in best), key=lambda c: min(c.map))
    return TilingCertificate(copies)


class _MaxPacking(_Cover):
    def __init__(self, rows, h, node_budget):
        super().__init__(rows, 0, node_budget)
        self.h = h
        self.best: list[int] = []
        self.lp_cache: dict = {}

    def _greedy(self, alive: int) -> list[int]:
        chosen = []
        while alive:
            # take the row whose vertices have the fewest competing rows
            i = min(bits(alive), key=lambda r: (sum(popcount(self.rows_of[v] & alive) for v in bits(self.rows[r])), r))
            chosen.append(i)
            alive &= ~self._kill(self.rows[i])
        return chosen

    def _bound(self, alive: int) -> int:
        active = 0
        for i in bits(alive):
            active |= self.rows[i]
        simple = popcount(active) // self.h
        if simple <= len(self.best):
            return simple
        key = alive
        if key not in self.lp_cache:
            self.lp_cache[key] = math.floor(_lp_packing_bound([self.rows[i] for i in bits(alive)]))
        return min(simple, self.lp_cache[key])

    def solve(self) -> list[int]:
        alive = (1 << len(self.rows)) - 1
        self.best = self._greedy(alive)
        self._rec(alive, [])
        return self.best

    def _rec(self, alive: int, chosen: list[int]):
        self._tick()
        if not alive:
            if len(chosen) > len(self.best):
                self.best = list(chosen)
            return
        if len(chosen) + self._bound(alive) <= len(self.best):
            return
        # branch on the vertex with the fewest live rows: use one of them, or none
        active = 0
        for i in bits(alive):
            active |= self.rows[i]
        v = min(bits(active), key=lambda x: (popcount(self.rows_of[x] & alive), x))
        for i in bits(self.rows_of[v] & alive):
            chosen.append(i)
            self._rec(alive & ~self._kill(self.rows[i]), chosen)
            chosen.pop()
        self._rec(alive & ~self.rows_of[v], chosen)


# ---------------------------------------------------------------- verification

def verify_copy(g: Graph, h: Graph, c: HCopy) -> Check:
    phi = c.map
    if len(phi) != h.n:
        return Check(False, "arity")
    if any(not (0 <= x < g.n) for x in phi):
        return Check(False, "range")
    if len(set(phi)) != len(phi):
        return Check(False, "injectivity")
    for u, v in h.edges:
        if not g.has_edge(phi[u], phi[v]):
            return Check(False, "edge-preservation")
    return Check(True)


def verify_tiling(g: Graph, h: Graph, cert: TilingCertificate, require_factor: bool = False) -> Check:
    """Re-check a tiling from scratch: each copy edge by edge, disjointness, coverage."""
    seen = set()
    for c in cert.copies:
        ok = verify_copy(g, h, c)
        if not ok:
            return ok
        if seen & set(c.map):
            return Check(False, "disjointness")
        seen.update(c.map)
    if require_factor and len(seen) != g.n:
        return Check(False, "coverage")
    return Check(True)
