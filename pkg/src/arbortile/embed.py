"""Constructive embeddings at desk scale.

Trees go into the minimum-degree core of the host, where a greedy extension can never
get stuck.  Q(a, b) goes into a cluster system by placing Q's clusters one at a time:
each independent cluster is a chain of vertices whose common neighbourhoods shrink the
later clusters, each forest cluster is grown inside the dense core of what is left.
The search is exhaustive underneath the heuristic ordering, so running out of options
(as opposed to running out of budget) is a genuine "no".
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import CapExceeded, ChainFail, EmbedFail, NotAForest
from .factor import HCopy
from .graph import Graph, alpha_upper_bound, bits, components, is_forest, popcount, to_mask
from .qgraph import QGraph, QSpec, build_q

DEFAULT_EMBED_BUDGET = 10**6


@dataclass
class ClusterSystem:
    host: Graph
    clusters: list  # list of sorted vertex lists V_1..V_k
    density: dict = field(init=False)

    def __post_init__(self):
        self.clusters = [sorted(c) for c in self.clusters]
        seen = set()
        for c in self.clusters:
            if not c:
                raise ValueError("clusters must be nonempty")
            if seen & set(c):
                raise ValueError("clusters must be disjoint")
            if c[-1] >= self.host.n or c[0] < 0:
                raise ValueError("cluster vertex out of range")
            seen.update(c)
        self.masks = [to_mask(c) for c in self.clusters]
        self.density = {}
        for i in range(len(self.clusters)):
            for j in range(i + 1, len(self.clusters)):
                e = sum(popcount(self.host.nbr[v] & self.masks[j]) for v in self.clusters[i])
                self.density[(i, j)] = Fraction(e, len(self.clusters[i]) * len(self.clusters[j]))

    def d(self, i: int, j: int) -> Fraction:
        return self.density[(min(i, j), max(i, j))]

    def restrict(self, indices: list[int], avoid: int = 0) -> "ClusterSystem":
        """Sub-system on the chosen clusters with the vertices in `avoid` removed."""
        return ClusterSystem(self.host, [[v for v in self.clusters[i] if not avoid >> v & 1]
                                         for i in indices])


def dense_core(g: Graph, d: int, within: Optional[int] = None) -> list[int]:
    """Largest vertex set inducing minimum degree >= d (repeatedly peel low-degree vertices)."""
    alive = g.all_mask if within is None else within
    changed = True
    while changed:
        changed = False
        for v in bits(alive):
            if popcount(g.nbr[v] & alive) < d:
                alive &= ~(1 << v)
                changed = True
    return list(bits(alive))


def _bfs_order(t: Graph) -> list[tuple[int, int]]:
    """(vertex, parent or -1) pairs, component by component, parents before children."""
    out = []
    for comp in components(t):
        root = comp[0]
        seen = {root}
        queue = [(root, -1)]
        while queue:
            v, p = queue.pop(0)
            out.append((v, p))
            for w in bits(t.nbr[v]):
                if w not in seen:
                    seen.add(w)
                    queue.append((w, v))
    return out


class _Budget:
    def __init__(self, limit):
        self.limit = limit
        self.used = 0

    def tick(self):
        self.used += 1
        if self.used > self.limit:
            raise CapExceeded("embedding node budget exhausted")


def _backtrack_embed(g: Graph, pattern: Graph, allowed: list[int], budget: _Budget) -> Optional[list[int]]:
    """Plain subgraph embedding with per-vertex candidate masks; None if none exists."""
    order = [v for v, _ in _bfs_order(pattern)]
    phi = [None] * pattern.n

    def rec(i, used):
        if i == len(order):
            return True
        v = order[i]
        cand = allowed[v] & ~used
        for u in bits(pattern.nbr[v]):
            if phi[u] is not None:
                cand &= g.nbr[phi[u]]
        for w in bits(cand):
            budget.tick()
            phi[v] = w
            if rec(i + 1, used | (1 << w)):
                return True
        phi[v] = None
        return False

    return phi if rec(0, 0) else None


def embed_tree(g: Graph, t: Graph, node_budget: int = DEFAULT_EMBED_BUDGET,
               within: Optional[int] = None) -> HCopy:
    """Embed a forest on k vertices; greedy inside the (k-1)-core, exact search otherwise."""
    if not is_forest(t):
        raise NotAForest("pattern must be a forest")
    k = t.n
    if k == 0:
        return HCopy(())
    universe = g.all_mask if within is None else within
    core = to_mask(dense_core(g, k - 1, universe))
    if core:
        phi = [None] * k
        used = 0
        for v, p in _bfs_order(t):
            if p < 0:
                cand = core & ~used
            else:
                cand = g.nbr[phi[p]] & core & ~used
            if not cand:
                break  # cannot happen in a (k-1)-core; fall through to the exact search
            w = (cand & -cand).bit_length() - 1
            phi[v] = w
            used |= 1 << w
        else:
            return HCopy(tuple(phi))
    budget = _Budget(node_budget)
    try:
        phi = _backtrack_embed(g, t, [universe] * k, budget)
    except CapExceeded:
        raise EmbedFail(_tree_fail_message(g, k), exhausted_budget=True) from None
    if phi is None:
        raise EmbedFail(_tree_fail_message(g, k), exhausted_budget=False)
    return HCopy(tuple(phi))


def _tree_fail_message(g: Graph, k: int) -> str:
    alpha, exact = alpha_upper_bound(g)
    rel = "=" if exact else "<="
    return f"no embedding of the {k}-vertex forest; alpha(G) {rel} {alpha}, alpha*k = {alpha * k} vs n = {g.n}"


def common_neighborhood_chain(g: Graph, pool, targets: list, s: int, beta,
                              node_budget: int = DEFAULT_EMBED_BUDGET) -> tuple[list[int], list[list[int]]]:
    """Pick s pool vertices whose common neighbourhood keeps every target large.

    After every pick each target S_j must keep |S_j| >= (beta/2) |original S_j|.
    Candidates are tried best-ratio first with backtracking.
    """
    if s < 1:
        raise ValueError("s must be positive")
    beta = Fraction(beta)
    pool_mask = to_mask(pool)
    tmasks = [to_mask(t) for t in targets]
    budget = _Budget(node_budget)
    chosen: list[int] = []

    floors = [beta * popcount(m) / 2 for m in tmasks]

    def ok_after(v, cur):
        new = [m & g.nbr[v] for m in cur]
        if any(popcount(m) < floor for m, floor in zip(new, floors)):
            return None
        return new

    def rec(avail, cur):
        if len(chosen) == s:
            return cur
        scored = []
        for v in bits(avail):
            new = ok_after(v, cur)
            if new is not None:
                score = min((Fraction(popcount(a), popcount(b)) for a, b in zip(new, cur) if b), default=Fraction(1))
                scored.append((-score, v, new))
        scored.sort(key=lambda x: (x[0], x[1]))
        for _, v, new in scored:
            budget.tick()
            chosen.append(v)
            res = rec(avail & ~(1 << v), new)
            if res is not None:
                return res
            chosen.pop()
        return None

    try:
        res = rec(pool_mask, tmasks)
    except CapExceeded:
        raise ChainFail("chain search budget exhausted") from None
    if res is None:
        raise ChainFail(f"no chain of {s} vertices keeps every target above beta/2 of its original size")
    return list(chosen), [list(bits(m)) for m in res]


@dataclass
class QEmbedding:
    q: QGraph
    map: list  # map[x] = host vertex for Q-vertex x
    clusters: list  # U_i as host vertex lists
    path: list  # per Q-cluster: "chain", "core", or "fallback"
    density_report: dict
    nodes: int


def density_preconditions(cs: ClusterSystem, a: int, b: int, beta) -> dict:
    """Which of the pairwise density hypotheses hold (reported, never assumed)."""
    beta = Fraction(beta)
    report = {}
    k = a + b
    for i in range(k):
        for j in range(i + 1, k):
            need = Fraction(1, 2) + beta if (i >= a and j >= a) else beta
            report[f"{i},{j}"] = {"density": cs.d(i, j), "required": need, "ok": cs.d(i, j) >= need}
    return report


def embed_q(cs: ClusterSystem, spec: QSpec, beta=Fraction(1, 10),
            node_budget: int = DEFAULT_EMBED_BUDGET, avoid: int = 0) -> QEmbedding:
    """Find a copy of Q(a, b) in the host with U_i inside V_i, avoiding `avoid`."""
    a, b = spec.a, spec.b
    if len(cs.clusters) != a + b:
        raise ValueError(f"need {a + b} clusters, got {len(cs.clusters)}")
    q = build_q(spec)
    report = density_preconditions(cs, a, b, beta)
    g = cs.host
    nbr = g.nbr
    beta = Fraction(beta)

    # per Q-cluster: the Q vertices in placement order and, for forests, in-cluster parents
    plan = []
    for c, members in enumerate(q.clusters):
        if c < a:
            plan.append([(x, []) for x in members])
            continue
        base = members[0]
        inside = to_mask(members)
        placed = set()
        order = []
        for v, _ in _bfs_order(spec.forests[c - a]):
            x = base + v
            order.append((x, [y for y in bits(q.graph.nbr[x] & inside) if y in placed]))
            placed.add(x)
        plan.append(order)
    steps = [(c, x, parents) for c, cl in enumerate(plan) for x, parents in cl]
    need_after = []  # need_after[i][c] = Q-vertices of cluster c still to place after step i
    remaining = [len(cl) for cl in plan]
    for c, _, _ in steps:
        remaining[c] -= 1
        need_after.append(list(remaining))

    budget = _Budget(node_budget)
    phi: dict = {}
    path = ["chain" if c < a else "core" for c in range(a + b)]
    deepest = [0]
    core_cache: dict = {}

    def forest_core(c, cand_mask):
        key = (c, cand_mask)
        if key not in core_cache:
            core_cache[key] = to_mask(dense_core(g, 2 * spec.s - 1, cand_mask))
        return core_cache[key]

    def rec(i, targets, used):
        if i == len(steps):
            return True
        c, x, parents = steps[i]
        deepest[0] = max(deepest[0], c)
        cand = targets[c] & ~used
        for y in parents:
            cand &= nbr[phi[y]]
        if not cand:
            return False
        later = range(c + 1, a + b)
        scored = []
        tier_mask = forest_core(c, targets[c] & ~used) if c >= a else 0
        for v in bits(cand):
            new_t = list(targets)
            fine = True
            for c2 in later:
                new_t[c2] = targets[c2] & nbr[v]
                if popcount(new_t[c2] & ~used & ~(1 << v)) < need_after[i][c2]:
                    fine = False
                    break
            if not fine:
                continue
            if need_after[i][c] > popcount(targets[c] & ~used & ~(1 << v)):
                continue
            ratio = min((Fraction(popcount(new_t[c2]), popcount(targets[c2])) for c2 in later
                         if targets[c2]), default=Fraction(1))
            chain_ok = all(2 * popcount(new_t[c2]) >= beta * popcount(targets[c2]) for c2 in later)
            in_core = bool(tier_mask >> v & 1) if c >= a else True
            scored.append((not chain_ok, not in_core, -ratio, v, new_t))
        scored.sort(key=lambda z: z[:4])
        for not_chain, not_core, _, v, new_t in scored:
            budget.tick()
            phi[x] = v
            if c >= a and not_core:
                path[c] = "fallback"
            if rec(i + 1, new_t, used | (1 << v)):
                return True
            del phi[x]
        return False

    start = [m & ~avoid for m in cs.masks]
    try:
        found = rec(0, start, avoid)
    except CapExceeded:
        raise EmbedFail("Q embedding budget exhausted", exhausted_budget=True, depth=deepest[0]) from None
    if not found:
        raise EmbedFail("no copy of Q respects the clusters", exhausted_budget=False, depth=deepest[0])
    mapping = [phi[x] for x in range(q.graph.n)]
    emb = QEmbedding(q, mapping, [sorted(mapping[x] for x in cl) for cl in q.clusters],
                     path, report, budget.used)
    problems = verify_q_embedding(cs, emb)
    if problems:
        raise EmbedFail(f"embedding failed re-verification: {problems[0]}", depth=deepest[0])
    return emb


def verify_q_embedding(cs: ClusterSystem, emb: QEmbedding) -> list[str]:
    """Edge preservation, injectivity and U_i inside V_i, checked from scratch."""
    out = []
    m = emb.map
    if len(set(m)) != len(m):
        out.append("injectivity")
    for u, v in emb.q.graph.edges:
        if not cs.host.has_edge(m[u], m[v]):
            out.append("edge-preservation")
            break
    for i, cl in enumerate(emb.q.clusters):
        if any(not (cs.masks[i] >> m[x] & 1) for x in cl):
            out.append("cluster-containment")
            break
    return out
