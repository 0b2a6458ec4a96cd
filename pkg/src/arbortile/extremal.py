"""Graphs with high minimum degree and small independence number but no H-factor.

Four families:

* ``g0``: two disjoint cliques whose orders are not both divisible by hcf2(H);
* ``two-part`` and ``multi-part``: ar(H) blocks, complete between blocks, sparse
  high-girth interiors, with block sizes whose difference is not a multiple of hcf1;
* ``space-barrier``: the same shape but with a first block too small to meet every
  copy of H in sigma(H) vertices.

Block interiors come from a sample-and-delete generator with girth and independence
checked afterwards, never assumed.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import (BadN, CapExceeded, DivisibilityError, GenFail, NotApplicable,
                     PremiseViolated)
from .factor import has_factor
from .graph import (DEFAULT_ALPHA_CAP, INFINITE, Graph, bits, complete_graph,
                    disjoint_union, girth, independence_bounds, independence_number,
                    min_degree, popcount, to_mask)
from .invariants import hcf_report, sigma_and_critical, vertex_arboricity

SOLVER_CAP = 60
FAMILIES = ("g0", "two-part", "multi-part", "space-barrier")


@dataclass
class ExtremalInstance:
    graph: Graph
    blocks: list
    family: str
    params: dict = field(default_factory=dict)


@dataclass
class NoFactorCertificate:
    kind: str  # divisibility-mod-hcf2 | difference-mod-hcf1 | size-counting
    modulus: object = None
    bound: Optional[int] = None
    premises: dict = field(default_factory=dict)
    solver: Optional[str] = None  # "agrees", "skipped: ..." ; disagreement raises


# ---------------------------------------------------------------- block interiors

def _find_short_cycle_vertex(nbr: list, alive: int, g_min: int) -> Optional[int]:
    """A vertex on some cycle of length <= g_min inside `alive`, or None."""
    for root in bits(alive):
        dist = {root: 0}
        parent = {root: -1}
        queue = [root]
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            if 2 * dist[u] + 1 > g_min:
                break
            for w in bits(nbr[u] & alive):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w and dist[u] + dist[w] + 1 <= g_min:
                    return u
    return None


def _ball(nbr: list, x: int, radius: int) -> int:
    seen = frontier = 1 << x
    for _ in range(radius):
        grow = 0
        for v in bits(frontier):
            grow |= nbr[v]
        frontier = grow & ~seen
        if not frontier:
            break
        seen |= frontier
    return seen


def _alpha_check(g: Graph, limit, exact: bool, cap: int = DEFAULT_ALPHA_CAP) -> tuple:
    """(value, mode, ok) for the claim alpha(g) <= limit."""
    lo, hi, _ = independence_bounds(g)
    if not exact and hi <= limit:
        return hi, "upper-bound", True
    if g.n <= cap:
        value = independence_number(g, cap)[0]
        return value, "exact", value <= limit
    return hi, "upper-bound", hi <= limit


def gen_high_girth_low_alpha(n: int, g_min: int, alpha_frac, seed: int,
                             retries: int = 30, exact_alpha: bool = True) -> Graph:
    """Graph on n vertices with girth > g_min and alpha <= alpha_frac * n.

    Each attempt samples G(N, c/N) on a few spare vertices, deletes one vertex from
    every cycle of length <= g_min, keeps n survivors, then adds random edges whose
    endpoints are at distance >= g_min (which cannot create a short cycle).  Girth and
    alpha are re-measured on the result.
    """
    limit = Fraction(alpha_frac) * n
    if n <= 0:
        raise ValueError("n must be positive")
    if g_min >= n and limit < math.ceil(n / 2):
        raise GenFail(f"girth > {g_min} on {n} vertices forces a forest, so alpha >= {math.ceil(n / 2)}",
                      best_girth=INFINITE, best_alpha=math.ceil(n / 2))
    rng = random.Random(seed)
    best = (None, None)
    for attempt in range(retries):
        spare = n // 3 + 2
        size = n + spare
        c = 1.5 + (attempt % 6) * 0.75
        nbr = [0] * size
        for u in range(size):
            for v in range(u + 1, size):
                if rng.random() < c / size:
                    nbr[u] |= 1 << v
                    nbr[v] |= 1 << u
        alive = (1 << size) - 1
        while True:
            v = _find_short_cycle_vertex(nbr, alive, g_min)
            if v is None:
                break
            alive &= ~(1 << v)
        keep = sorted(rng.sample(list(bits(alive)), n)) if popcount(alive) >= n else None
        if keep is None:
            continue
        index = {v: i for i, v in enumerate(keep)}
        mask = to_mask(keep)
        new = [0] * n
        for v in keep:
            for w in bits(nbr[v] & mask):
                new[index[v]] |= 1 << index[w]
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n) if not new[u] >> v & 1]
        rng.shuffle(pairs)
        for u, v in pairs:
            if not _ball(new, u, g_min - 1) >> v & 1:
                new[u] |= 1 << v
                new[v] |= 1 << u
        g = Graph.from_edges(n, [(u, v) for u in range(n) for v in bits(new[u]) if v > u])
        gi = girth(g)
        value, _, ok = _alpha_check(g, limit, exact_alpha)
        if best[1] is None or value < best[1]:
            best = (gi, value)
        if gi > g_min and ok:
            return g
    raise GenFail(f"no graph with girth > {g_min} and alpha <= {limit} after {retries} attempts",
                  best_girth=best[0], best_alpha=best[1])


def _multipartite_with_interiors(sizes: list[int], g_min: int, alpha_limit, seed: int,
                                 exact_alpha: bool) -> tuple[Graph, list]:
    rng = random.Random(seed)
    parts = []
    for i, size in enumerate(sizes):
        frac = Fraction(alpha_limit) / size
        parts.append(gen_high_girth_low_alpha(size, g_min, frac, rng.getrandbits(63), exact_alpha=exact_alpha))
    g = disjoint_union(*parts)
    blocks = []
    start = 0
    for size in sizes:
        blocks.append(list(range(start, start + size)))
        start += size
    edges = set(g.edges)
    for i in range(len(blocks)):
        for j in range(i + 1, len(blocks)):
            edges.update((u, v) for u in blocks[i] for v in blocks[j])
    return Graph.from_edges(start, edges), blocks


# ---------------------------------------------------------------- constructions

def construct_g0(n: int, h: Graph) -> ExtremalInstance:
    _, hcf2, _ = hcf_report(h)
    if hcf2 == 1:
        raise NotApplicable("hcf2(H) = 1")
    if n < 4:
        raise BadN("n must be at least 4")
    p = next(p for p in (n // 2, n // 2 + 1) if p % hcf2)
    g = disjoint_union(complete_graph(p), complete_graph(n - p))
    return ExtremalInstance(g, [list(range(p)), list(range(p, n))], "g0",
                            {"p": p, "hcf2": hcf2, "h": h.n, "n": n})


def construct_two_part(n: int, h: Graph, seed: int, alpha_frac=Fraction(1, 2),
                       exact_alpha: bool = True) -> ExtremalInstance:
    ell, _ = vertex_arboricity(h)
    hcf1, hcf2, _ = hcf_report(h)
    if ell != 2 or hcf2 != 1 or hcf1 < 3:
        raise NotApplicable(f"needs ar(H)=2, hcf2=1, hcf1>=3; got {ell}, {hcf2}, {hcf1}")
    sizes = [n // 2 + 1, -(-n // 2) - 1]
    g, blocks = _multipartite_with_interiors(sizes, h.n, Fraction(alpha_frac) * n, seed, exact_alpha)
    return ExtremalInstance(g, blocks, "two-part",
                            {"ell": 2, "hcf1": hcf1, "hcf2": hcf2, "h": h.n, "n": n, "seed": seed,
                             "alpha": Fraction(alpha_frac)})


def construct_multi_part(n: int, h: Graph, seed: int, alpha_frac=Fraction(1, 2),
                         exact_alpha: bool = True) -> ExtremalInstance:
    ell, _ = vertex_arboricity(h)
    hcf1, hcf2, _ = hcf_report(h)
    if ell < 3 or hcf1 == 1:
        raise NotApplicable(f"needs ar(H)>=3 and hcf1 != 1; got {ell}, {hcf1}")
    base = n // ell
    rest = n - (2 * base + 1)
    others = [rest // (ell - 2) + (1 if i < rest % (ell - 2) else 0) for i in range(ell - 2)]
    sizes = [base + 1, base] + others
    if any(not (base - 1 <= s <= -(-n // ell)) for s in others):
        raise BadN(f"n = {n} does not admit the near-equal block sizes")
    g, blocks = _multipartite_with_interiors(sizes, h.n, Fraction(alpha_frac) * n, seed, exact_alpha)
    return ExtremalInstance(g, blocks, "multi-part",
                            {"ell": ell, "hcf1": hcf1, "hcf2": hcf2, "h": h.n, "n": n, "seed": seed,
                             "alpha": Fraction(alpha_frac)})


def space_barrier_sizes(n: int, h: Graph) -> list[int]:
    ell, _ = vertex_arboricity(h)
    if ell < 2:
        raise NotApplicable("space barrier needs ar(H) >= 2")
    sigma, _ = sigma_and_critical(h)
    if (sigma * n) % h.n:
        raise BadN(f"sigma(H) n / h = {sigma}*{n}/{h.n} is not an integer")
    x = Fraction((h.n - sigma) * n, (ell - 1) * h.n)
    v1 = sigma * n // h.n - 1
    v2 = math.ceil(x) + 1
    rest = n - v1 - v2
    if ell == 2:
        if rest:
            raise BadN("block sizes do not add up to n")
        return [v1, v2]
    others = [rest // (ell - 2) + (1 if i < rest % (ell - 2) else 0) for i in range(ell - 2)]
    if any(not (math.floor(x) <= s <= math.ceil(x)) for s in others):
        raise BadN(f"n = {n} does not admit the prescribed block sizes")
    return [v1, v2] + others


def construct_space_barrier(n: int, h: Graph, seed: int, alpha_frac=Fraction(1, 2),
                            exact_alpha: bool = True) -> ExtremalInstance:
    sizes = space_barrier_sizes(n, h)
    ell = len(sizes)
    sigma, ar_cr = sigma_and_critical(h)
    g, blocks = _multipartite_with_interiors(sizes, h.n, Fraction(alpha_frac) * n, seed, exact_alpha)
    return ExtremalInstance(g, blocks, "space-barrier",
                            {"ell": ell, "sigma": sigma, "ar_cr": ar_cr, "h": h.n, "n": n,
                             "seed": seed, "alpha": Fraction(alpha_frac)})


def construct(family: str, n: int, h: Graph, seed: int = 0, alpha_frac=Fraction(1, 2),
              exact_alpha: bool = True) -> ExtremalInstance:
    if family == "g0":
        return construct_g0(n, h)
    makers = {"two-part": construct_two_part, "multi-part": construct_multi_part,
              "space-barrier": construct_space_barrier}
    if family not in makers:
        raise ValueError(f"unknown family {family!r}")
    return makers[family](n, h, seed, alpha_frac, exact_alpha)


# ---------------------------------------------------------------- certificates

def _cross_edges(g: Graph, blocks: list) -> int:
    masks = [to_mask(b) for b in blocks]
    total = 0
    for i, b in enumerate(blocks):
        others = 0
        for j, m in enumerate(masks):
            if j != i:
                others |= m
        total += sum(popcount(g.nbr[v] & others) for v in b)
    return total // 2


def _block_girths(g: Graph, blocks: list) -> list:
    return [girth(g.induced(b)[0]) for b in blocks]


def _require(premises: dict, name: str, ok: bool, detail: str = ""):
    premises[name] = bool(ok)
    if not ok:
        raise PremiseViolated(name, detail)


def certify_no_factor(inst: ExtremalInstance, h: Graph, solver_cap: int = SOLVER_CAP) -> NoFactorCertificate:
    """Re-check the family's premises on the actual graph and emit the matching certificate."""
    g, blocks = inst.graph, inst.blocks
    premises: dict = {}
    covered = sorted(v for b in blocks for v in b)
    _require(premises, "blocks-partition", covered == list(range(g.n)))
    hcf1, hcf2, _ = hcf_report(h)
    ell, _ = vertex_arboricity(h)

    if inst.family == "g0":
        _require(premises, "disconnected", _cross_edges(g, blocks) == 0, "an edge joins the two blocks")
        p = len(blocks[0])
        _require(premises, "hcf2>=2", hcf2 >= 2)
        _require(premises, "p-not-divisible", p % hcf2 != 0, f"p = {p}, hcf2 = {hcf2}")
        cert = NoFactorCertificate("divisibility-mod-hcf2", modulus=hcf2, premises=premises)
    elif inst.family in ("two-part", "multi-part", "space-barrier"):
        _require(premises, "block-count", len(blocks) == ell, f"{len(blocks)} blocks but ar(H) = {ell}")
        girths = _block_girths(g, blocks)
        _require(premises, "girth>h", all(x > h.n for x in girths), f"block girths {girths}")
        if inst.family == "space-barrier":
            sigma, _ = sigma_and_critical(h)
            bound = len(blocks[0]) // sigma
            _require(premises, "counting", bound * h.n < g.n,
                     f"floor(|V1|/sigma) = {bound} copies could cover n = {g.n}")
            cert = NoFactorCertificate("size-counting", bound=bound, premises=premises)
        else:
            diff = len(blocks[0]) - len(blocks[1])
            if hcf1 == INFINITE:
                ok = diff != 0
            else:
                ok = hcf1 >= 2 and diff % hcf1 != 0
            _require(premises, "difference-residue", ok, f"|V1|-|V2| = {diff}, hcf1 = {hcf1}")
            cert = NoFactorCertificate("difference-mod-hcf1", modulus=hcf1, premises=premises)
    else:
        raise ValueError(f"unknown family {inst.family!r}")

    if g.n > solver_cap:
        cert.solver = f"skipped: n = {g.n} above solver cap {solver_cap}"
    elif g.n % h.n:
        cert.solver = "skipped: h does not divide n"
    else:
        try:
            found, _ = has_factor(g, h)
        except (CapExceeded, DivisibilityError) as exc:
            cert.solver = f"skipped: {exc}"
        else:
            if found:
                raise PremiseViolated("solver", "exact solver found an H-factor")
            cert.solver = "agrees"
    return cert


def claimed_degree_bound(inst: ExtremalInstance, h: Graph) -> Fraction:
    n = inst.graph.n
    if inst.family == "g0":
        return Fraction(n, 2) - 2
    if inst.family == "two-part":
        return Fraction(n, 2) - 1
    if inst.family == "multi-part":
        ell = len(inst.blocks)
        return (1 - Fraction(1, ell)) * n - 1
    _, ar_cr = sigma_and_critical(h)
    return (1 - 1 / ar_cr) * n - 1


def verify_claims(inst: ExtremalInstance, h: Graph, alpha_frac, exact: bool = True) -> dict:
    """Recompute delta(G) and certify alpha(G) <= alpha_frac * n; one verdict per claim."""
    g = inst.graph
    report = {}
    delta = min_degree(g)
    bound = claimed_degree_bound(inst, h)
    report["min_degree"] = {"value": delta, "bound": bound, "ok": delta >= bound}
    limit = Fraction(alpha_frac) * g.n
    cross = _cross_edges(g, inst.blocks)
    full = sum(len(a) * len(b) for i, a in enumerate(inst.blocks) for b in inst.blocks[i + 1:])
    if g.n <= DEFAULT_ALPHA_CAP:
        value, mode, ok = _alpha_check(g, limit, exact)
    elif cross in (0, full):
        # independent sets live in one block (complete join) or split across blocks (no edges)
        parts = [_alpha_check(g.induced(b)[0], limit, exact) for b in inst.blocks]
        value = max(p[0] for p in parts) if cross == full else sum(p[0] for p in parts)
        mode = "blockwise-" + ("exact" if all(p[1] == "exact" for p in parts) else "upper-bound")
        ok = value <= limit
    else:
        value, mode, ok = _alpha_check(g, limit, exact)
    report["alpha"] = {"value": value, "bound": limit, "mode": mode, "ok": ok}
    return report
