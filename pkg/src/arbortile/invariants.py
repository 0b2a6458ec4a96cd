"""Acyclic-partition invariants of a pattern graph H.

Vertex arboricity, the optimal acyclic partitions, the smallest part size over them,
critical arboricity, membership in the family used to define f(H), f(H) itself, and the
highest-common-factor bookkeeping that decides when the degree threshold is tight.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Optional

from .errors import CapExceeded, NotAForest
from .graph import INFINITE, Graph, bits, components, is_forest_mask, to_mask

EXACT_CAP = 14
BRANCH_CAP = 40


@dataclass(frozen=True)
class AcyclicPartition:
    blocks: tuple  # tuple of sorted tuples, ordered by minimum element

    @classmethod
    def canonical(cls, blocks) -> "AcyclicPartition":
        cleaned = [tuple(sorted(b)) for b in blocks if b]
        cleaned.sort(key=lambda b: b[0])
        return cls(tuple(cleaned))

    @property
    def sizes(self) -> tuple:
        return tuple(sorted(len(b) for b in self.blocks))

    def __len__(self):
        return len(self.blocks)

    def verify(self, h: Graph) -> bool:
        seen = [v for b in self.blocks for v in b]
        if sorted(seen) != list(range(h.n)):
            return False
        return all(is_forest_mask(h, to_mask(b)) for b in self.blocks)


# ---------------------------------------------------------------- partition search

def _assign(h: Graph, r: int, exactly: bool, first_only: bool):
    """Enumerate partitions of V(H) into <= r (or exactly r) forest-inducing blocks.

    Vertices are placed in increasing order and a vertex may open at most one new
    block, so each unordered partition appears once (restricted growth strings).
    """
    n = h.n
    blocks = []
    out = []

    def rec(v):
        if v == n:
            if not exactly or len(blocks) == r:
                out.append(AcyclicPartition.canonical([list(bits(m)) for m in blocks]))
                return first_only
            return False
        if exactly and len(blocks) + (n - v) < r:
            return False
        bit = 1 << v
        for i in range(len(blocks)):
            m = blocks[i] | bit
            if is_forest_mask(h, m):
                blocks[i] = m
                if rec(v + 1):
                    return True
                blocks[i] = m ^ bit
        if len(blocks) < r:
            blocks.append(bit)
            if rec(v + 1):
                return True
            blocks.pop()
        return False

    rec(0)
    return out


def vertex_arboricity(h: Graph, cap: int = BRANCH_CAP) -> tuple[int, AcyclicPartition]:
    """Minimum number of forest-inducing blocks, with a witness, by iterative deepening."""
    if h.n > cap:
        raise CapExceeded(f"|V(H)|={h.n} exceeds arboricity cap {cap}")
    if h.n == 0:
        return 0, AcyclicPartition(())
    r = 1
    while True:
        found = _assign(h, r, exactly=False, first_only=True)
        if found:
            return r, found[0]
        r += 1


@lru_cache(maxsize=512)
def _optimal(h: Graph) -> tuple:
    r, _ = vertex_arboricity(h)
    return tuple(sorted(set(_assign(h, r, exactly=True, first_only=False)), key=lambda p: p.blocks))


def optimal_acyclic_partitions(h: Graph, cap: int = EXACT_CAP) -> list[AcyclicPartition]:
    """All partitions into exactly ar(H) forest-inducing blocks, in canonical form."""
    if h.n > cap:
        raise CapExceeded(f"|V(H)|={h.n} exceeds enumeration cap {cap}")
    return list(_optimal(h))


def sigma_and_critical(h: Graph) -> tuple[int, Fraction]:
    """sigma(H) and ar_cr(H) = (ar-1)h / (h - sigma); forests get ar_cr := 1."""
    parts = optimal_acyclic_partitions(h)
    ar = len(parts[0])
    sigma = min(min(p.sizes) for p in parts)
    if ar == 1:
        return sigma, Fraction(1)
    return sigma, Fraction((ar - 1) * h.n, h.n - sigma)


def _htilde_witness(h: Graph, part: AcyclicPartition) -> Optional[AcyclicPartition]:
    """Reorder `part` so block 0 is independent and every other block is twice its size."""
    for i, t1 in enumerate(part.blocks):
        mask = to_mask(t1)
        if any(h.nbr[v] & mask for v in t1):
            continue
        if all(len(b) == 2 * len(t1) for j, b in enumerate(part.blocks) if j != i):
            rest = [b for j, b in enumerate(part.blocks) if j != i]
            return AcyclicPartition((t1, *rest))
    return None


def in_Htilde(h: Graph) -> tuple[bool, Optional[AcyclicPartition]]:
    """Witness partition has the independent block first (not in canonical order)."""
    for part in optimal_acyclic_partitions(h):
        w = _htilde_witness(h, part)
        if w is not None:
            return True, w
    return False, None


def f_value(h: Graph) -> int:
    ar, _ = vertex_arboricity(h)
    member, _ = in_Htilde(h)
    return 2 * ar - 1 if member else 2 * ar


def _gcd_or_inf(values):
    nonzero = [v for v in values if v]
    if not nonzero:
        return INFINITE
    return reduce(math.gcd, nonzero)


def hcf_report(h: Graph) -> tuple:
    """(hcf1, hcf2, hcf_is_one) over the optimal acyclic partitions of H.

    hcf1 is the gcd of the nonzero consecutive differences of sorted block sizes
    (INFINITE when there are none); hcf2 is the gcd of component orders.
    """
    parts = optimal_acyclic_partitions(h)
    ell = len(parts[0])
    diffs = set()
    for p in parts:
        xs = p.sizes
        diffs.update(xs[i + 1] - xs[i] for i in range(len(xs) - 1))
    hcf1 = _gcd_or_inf(diffs)
    hcf2 = reduce(math.gcd, (len(c) for c in components(h)))
    if ell == 1:
        one = hcf2 == 1
    elif ell == 2:
        one = hcf2 == 1 and hcf1 <= 2
    else:
        one = hcf1 == 1
    return hcf1, hcf2, one


def forest_bipartition(f: Graph, within=None) -> tuple[list[int], list[int]]:
    """2-colour a forest (or the forest induced on `within`); each component's smallest vertex goes left."""
    mask = f.all_mask if within is None else to_mask(within)
    if not is_forest_mask(f, mask):
        raise NotAForest("input contains a cycle")
    side = {}
    for comp in components(f, mask):
        root = comp[0]
        side[root] = 0
        stack = [root]
        while stack:
            u = stack.pop()
            for w in bits(f.nbr[u] & mask):
                if w not in side:
                    side[w] = 1 - side[u]
                    stack.append(w)
    left = sorted(v for v, s in side.items() if s == 0)
    right = sorted(v for v, s in side.items() if s == 1)
    return left, right


def degree_threshold(h: Graph, n: int, mu) -> Fraction:
    f = f_value(h)
    mu = Fraction(mu)
    return max((1 - Fraction(2, f) + mu) * n, (Fraction(1, 2) + mu) * n)


@dataclass
class InvariantReport:
    ar: int
    sigma: int
    ar_cr: Fraction
    f: int
    in_Htilde: bool
    witness: Optional[AcyclicPartition]
    hcf1: object
    hcf2: int
    hcf_is_one: bool
    ar_cr_by_convention: bool = False
    optimal_partitions: list = field(default_factory=list)

    def check(self) -> list[str]:
        """Internal-consistency violations (empty list when all invariants hold)."""
        bad = []
        if self.ar >= 2 and not (self.ar - 1 < self.ar_cr <= self.ar):
            bad.append("ar-1 < ar_cr <= ar")
        if self.f not in (2 * self.ar - 1, 2 * self.ar):
            bad.append("f in {2ar-1, 2ar}")
        if (self.f == 2 * self.ar - 1) != self.in_Htilde:
            bad.append("f = 2ar-1 iff in H~")
        return bad


def invariant_report(h: Graph) -> InvariantReport:
    parts = optimal_acyclic_partitions(h)
    ar = len(parts[0])
    sigma, ar_cr = sigma_and_critical(h)
    member, witness = in_Htilde(h)
    hcf1, hcf2, one = hcf_report(h)
    return InvariantReport(
        ar=ar, sigma=sigma, ar_cr=ar_cr, f=2 * ar - 1 if member else 2 * ar,
        in_Htilde=member, witness=witness, hcf1=hcf1, hcf2=hcf2, hcf_is_one=one,
        ar_cr_by_convention=(ar == 1), optimal_partitions=parts,
    )
