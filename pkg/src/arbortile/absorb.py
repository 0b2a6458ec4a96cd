"""Absorption toolkit at desk scale: connectors, absorbers, index vectors, robust vectors,
transferrals and integer-lattice membership.

Reachability in full generality quantifies over every forbidden set W; here searches
take an explicit `avoid` set instead, and robustness is certified by the sufficient
condition of floor(mu n) + 1 pairwise disjoint copies (any W of size <= mu n misses one).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional

from .errors import CapExceeded
from .factor import HCopy, _MaxPacking, has_factor, image_sets
from .graph import Graph, bits, popcount, to_mask

CONNECTOR_CAP = 10**5


@dataclass(frozen=True)
class IndexVector:
    coords: tuple

    def __sub__(self, other: "IndexVector") -> tuple:
        return tuple(a - b for a, b in zip(self.coords, other.coords))


@dataclass
class Connector:
    s_set: list
    pair: tuple
    t: int


@dataclass
class RobustVector:
    vector: IndexVector
    copies: list  # pairwise disjoint HCopy objects realizing the vector


def index_vector(s, p) -> IndexVector:
    """Per-block intersection sizes of s with the blocks of partition p."""
    members = set(s)
    return IndexVector(tuple(len(members.intersection(block)) for block in p))


def _factor_on(g: Graph, h: Graph, vertices) -> bool:
    sub, _ = g.induced(vertices)
    if sub.n % h.n:
        return False
    return has_factor(sub, h)[0]


def find_connector(g: Graph, h: Graph, u: int, v: int, t: int, avoid=(),
                   cap: int = CONNECTOR_CAP) -> Optional[Connector]:
    """Smallest-j search (j = 1..t) for S of size h*j - 1 outside avoid with H-factors on S+u and S+v.

    Candidates are (a copy through u, minus u) plus j - 1 further disjoint copies, which
    enumerates every S for which S+u has an H-factor.  Returns None once the candidate
    space is exhausted; raises CapExceeded if `cap` candidates were tried first.
    """
    if u == v:
        raise ValueError("u and v must differ")
    forbidden = to_mask(avoid) | (1 << v)
    usable = g.all_mask & ~forbidden
    sets = image_sets(g, h, within=usable)
    through_u = sorted(m for m in sets if m >> u & 1)
    others = sorted(m for m in sets if not m >> u & 1)
    tried = 0
    for j in range(1, t + 1):
        for first in through_u:
            base = first & ~(1 << u)
            for extra in _disjoint_unions(others, j - 1, first):
                tried += 1
                if tried > cap:
                    raise CapExceeded(f"connector search tried {cap} candidate sets")
                s_mask = base | extra
                if _factor_on(g, h, list(bits(s_mask | (1 << v)))):
                    s_set = sorted(bits(s_mask))
                    if _factor_on(g, h, s_set + [u]):
                        return Connector(s_set, (u, v), t)
    return None


def _disjoint_unions(rows: list[int], count: int, taken: int):
    """Unions of `count` pairwise disjoint rows avoiding `taken`, each set once (increasing order)."""
    if count == 0:
        yield 0
        return

    def rec(start, left, used, acc):
        if left == 0:
            yield acc
            return
        for i in range(start, len(rows)):
            m = rows[i]
            if not m & used:
                yield from rec(i + 1, left - 1, used | m, acc | m)

    yield from rec(0, count, taken, 0)


def verify_absorber(g: Graph, h: Graph, s, a, t: int) -> bool:
    s, a = sorted(set(s)), sorted(set(a))
    if len(s) != h.n or len(a) != h.n * t:
        return False
    if set(s) & set(a):
        return False
    return _factor_on(g, h, a) and _factor_on(g, h, a + s)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def robust_vectors(g: Graph, h: Graph, p, mu, node_budget: int = 10**5) -> list[RobustVector]:
    """h-vectors certified robust by floor(mu n) + 1 pairwise disjoint copies realizing them."""
    need = int(Fraction(mu) * g.n) + 1
    if need * h.n > g.n:
        return []
    sets = image_sets(g, h)
    by_vector: dict = {}
    for m, c in sets.items():
        by_vector.setdefault(index_vector(c.map, p).coords, []).append(m)
    out = []
    for coords in _compositions(h.n, len(p)):
        rows = sorted(by_vector.get(coords, []))
        if len(rows) < need:
            continue
        packer = _MaxPacking(rows, h.n, node_budget)
        chosen = packer._greedy((1 << len(rows)) - 1)
        if len(chosen) < need:
            try:
                chosen = packer.solve()
            except CapExceeded:
                continue
        if len(chosen) >= need:
            out.append(RobustVector(IndexVector(coords), [sets[rows[i]] for i in chosen[:need]]))
    return out


def check_robust(g: Graph, h: Graph, p, mu, rv: RobustVector) -> bool:
    """Independent re-check of a robust-vector certificate."""
    from .factor import verify_copy
    need = int(Fraction(mu) * g.n) + 1
    if len(rv.copies) < need:
        return False
    seen = set()
    for c in rv.copies:
        if not verify_copy(g, h, c) or index_vector(c.map, p) != rv.vector or seen & set(c.map):
            return False
        seen.update(c.map)
    return True


def _unit_difference(d: tuple) -> Optional[tuple]:
    plus = [i for i, x in enumerate(d) if x == 1]
    minus = [i for i, x in enumerate(d) if x == -1]
    if len(plus) == 1 and len(minus) == 1 and sum(1 for x in d if x) == 2:
        return plus[0], minus[0]
    return None


def transferral(iset) -> Optional[tuple]:
    """First pair (in input order) whose difference is u_i - u_j; returns (i, j, s, t) with i < j.

    Coordinates are 0-based and s - t = u_i - u_j.
    """
    vecs = [tuple(v.coords if isinstance(v, IndexVector) else v) for v in iset]
    if len({len(v) for v in vecs}) > 1:
        raise ValueError("index vectors must share one arity")
    for a, b in combinations(range(len(vecs)), 2):
        s, t = vecs[a], vecs[b]
        hit = _unit_difference(tuple(x - y for x, y in zip(s, t)))
        if hit is None:
            continue
        i, j = hit
        if i > j:
            s, t, i, j = t, s, j, i
        return i, j, s, t
    return None


def hermite_basis(rows) -> list[list[int]]:
    """Row-style Hermite normal form basis of the integer lattice spanned by `rows`."""
    mat = [list(map(int, r)) for r in rows if any(r)]
    if not mat:
        return []
    width = len(mat[0])
    basis = []
    col = 0
    while mat and col < width:
        nz = [r for r in mat if r[col]]
        zero = [r for r in mat if not r[col]]
        if not nz:
            col += 1
            continue
        # Euclid on column `col` until one row holds the gcd
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            pivot = nz[0]
            rest = []
            for r in nz[1:]:
                q = r[col] // pivot[col]
                r = [x - q * y for x, y in zip(r, pivot)]
                (rest if r[col] else zero).append(r)
            nz = [pivot] + rest
        pivot = nz[0]
        if pivot[col] < 0:
            pivot = [-x for x in pivot]
        basis.append(pivot)
        mat = [r for r in zero if any(r)]
        col += 1
    # reduce entries above each pivot into [0, pivot)
    for i in range(len(basis)):
        c = next(k for k, x in enumerate(basis[i]) if x)
        for j in range(i):
            q = basis[j][c] // basis[i][c]
            if q:
                basis[j] = [x - q * y for x, y in zip(basis[j], basis[i])]
    return basis


def lattice_member(generators, target) -> bool:
    """Is `target` an integer combination of `generators`?"""
    target = list(map(int, target))
    basis = hermite_basis(generators)
    if basis and len(basis[0]) != len(target):
        raise ValueError("generators and target differ in arity")
    residue = list(target)
    for row in basis:
        c = next(k for k, x in enumerate(row) if x)
        if residue[c] % row[c]:
            return False
        q = residue[c] // row[c]
        residue = [x - q * y for x, y in zip(residue, row)]
    return not any(residue)
