"""Reduced multigraphs over clusters, K_r-embeddable structures and fractional tilings.

A cluster pair gets a double edge when its density is at least 1/2 + beta and a single
edge when it is at least beta.  A K_r-embeddable structure assigns multiplicity 1 or 2
to a set of clusters (summing to r) such that every pair of support clusters is joined
and every two doubled clusters are joined by a double edge.  Fractional tilings put
non-negative weights on structures so that no cluster carries load above 1.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional

from .errors import ClusterSizeError, NotDoubleEdge, ParseError, UnknownCase
from .exactlp import solve_packing_lp


class CounterexampleWarning(UserWarning):
    """A structure search failed even though its degree premise held."""


@dataclass(frozen=True)
class Thresholds:
    beta: Fraction
    epsilon: Fraction
    mu: Fraction
    eta: Fraction

    def __post_init__(self):
        for name in ("beta", "epsilon", "mu", "eta"):
            v = Fraction(getattr(self, name))
            object.__setattr__(self, name, v)
            if not 0 < v < 1:
                raise ValueError(f"{name} must lie in (0, 1)")


@dataclass
class Multigraph2:
    k: int
    mult: dict = field(default_factory=dict)  # (i, j) with i < j -> 1 or 2

    def __post_init__(self):
        clean = {}
        for (i, j), m in self.mult.items():
            if i == j:
                raise ValueError("no self-pairs in a reduced multigraph")
            if not (0 <= i < self.k and 0 <= j < self.k):
                raise ValueError("cluster index out of range")
            if m not in (0, 1, 2):
                raise ValueError("multiplicity must be 0, 1 or 2")
            if m:
                clean[(min(i, j), max(i, j))] = m
        self.mult = clean

    def m(self, i: int, j: int) -> int:
        if i == j:
            return 0
        return self.mult.get((min(i, j), max(i, j)), 0)

    def degree(self, i: int) -> int:
        return sum(self.m(i, j) for j in range(self.k))

    def min_degree(self) -> int:
        return min(self.degree(i) for i in range(self.k)) if self.k else 0

    @classmethod
    def complete(cls, k: int, m: int = 2) -> "Multigraph2":
        return cls(k, {(i, j): m for i, j in combinations(range(k), 2)})


def parse_multigraph(text: str) -> Multigraph2:
    k = None
    mult = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            nums = [int(x) for x in line.split()]
        except ValueError:
            raise ParseError(f"non-integer token in {raw!r}", line=lineno) from None
        if k is None:
            if len(nums) != 1:
                raise ParseError("first line must be the cluster count", line=lineno)
            k = nums[0]
            continue
        if len(nums) != 3:
            raise ParseError("expected 'i j mult'", line=lineno)
        i, j, m = nums
        try:
            Multigraph2(k, {(i, j): m})
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from None
        mult[(i, j)] = m
    if k is None:
        raise ParseError("missing cluster count", line=1)
    return Multigraph2(k, mult)


def emit_multigraph(r: Multigraph2) -> str:
    lines = [str(r.k)] + [f"{i} {j} {m}" for (i, j), m in sorted(r.mult.items())]
    return "\n".join(lines) + "\n"


def build_reduced(cs, th: Thresholds) -> Multigraph2:
    """Reduced multigraph of a cluster system; all comparisons in exact rationals."""
    sizes = {len(c) for c in cs.clusters}
    if len(sizes) > 1:
        raise ClusterSizeError(f"clusters have sizes {sorted(sizes)}")
    mult = {}
    for i, j in combinations(range(len(cs.clusters)), 2):
        d = cs.d(i, j)
        if d >= Fraction(1, 2) + th.beta:
            mult[(i, j)] = 2
        elif d >= th.beta:
            mult[(i, j)] = 1
    return Multigraph2(len(cs.clusters), mult)


def check_degree_bound(r: Multigraph2, f: int, mu) -> bool:
    """Every cluster has degree (double edges counted twice) >= 2(1 - 2/f + mu/2)k."""
    bound = 2 * (1 - Fraction(2, f) + Fraction(mu) / 2) * r.k
    return all(r.degree(i) >= bound for i in range(r.k))


# ---------------------------------------------------------------- structures

@dataclass(frozen=True, order=True)
class EmbStructure:
    assign: tuple  # ((cluster, multiplicity), ...) sorted by cluster

    @classmethod
    def of(cls, mapping: dict) -> "EmbStructure":
        return cls(tuple(sorted((c, m) for c, m in mapping.items() if m)))

    @property
    def support(self) -> tuple:
        return tuple(c for c, _ in self.assign)

    @property
    def r(self) -> int:
        return sum(m for _, m in self.assign)

    def i(self, v: int) -> int:
        for c, m in self.assign:
            if c == v:
                return m
        return 0

    @property
    def shape(self) -> tuple:
        return tuple(sorted(m for _, m in self.assign))

    def problems(self, r: Multigraph2) -> list[str]:
        out = []
        if any(m not in (1, 2) for _, m in self.assign):
            out.append("multiplicity")
        for (u, mu), (v, mv) in combinations(self.assign, 2):
            need = 2 if mu == 2 and mv == 2 else 1
            if r.m(u, v) < need:
                out.append(f"pair {u},{v} needs multiplicity {need}")
        return out


def enumerate_structures(r: Multigraph2, rr: int) -> list[EmbStructure]:
    """All K_rr-embeddable structures of R, in lexicographic order."""
    if rr < 2:
        raise ValueError("rr must be at least 2")
    out = set()
    for b in range(rr // 2 + 1):
        a = rr - 2 * b
        if a + b > r.k:
            continue
        for doubled in combinations(range(r.k), b):
            if any(r.m(u, v) < 2 for u, v in combinations(doubled, 2)):
                continue
            rest = [v for v in range(r.k) if v not in doubled
                    and all(r.m(v, d) >= 1 for d in doubled)]
            for singles in combinations(rest, a):
                if any(r.m(u, v) < 1 for u, v in combinations(singles, 2)):
                    continue
                out.add(EmbStructure.of({**{d: 2 for d in doubled}, **{s: 1 for s in singles}}))
    return sorted(out)


# ---------------------------------------------------------------- fractional tilings

@dataclass
class FractionalTiling:
    rr: int
    weights: dict = field(default_factory=dict)  # EmbStructure -> Fraction

    def loads(self, k: int) -> list[Fraction]:
        out = [Fraction(0)] * k
        for s, w in self.weights.items():
            for c, m in s.assign:
                out[c] += m * w
        return out

    def total(self) -> Fraction:
        return sum((w * s.r for s, w in self.weights.items()), Fraction(0))

    def problems(self, r: Multigraph2) -> list[str]:
        out = []
        for s, w in self.weights.items():
            if w < 0:
                out.append("negative weight")
            if s.r != self.rr:
                out.append(f"structure of order {s.r} in an F(R,{self.rr}) tiling")
            out.extend(s.problems(r))
        if any(load > 1 for load in self.loads(r.k)):
            out.append("cluster load above 1")
        return out

    def scaled(self, factor) -> "FractionalTiling":
        factor = Fraction(factor)
        return FractionalTiling(self.rr, {s: w * factor for s, w in self.weights.items()})


@dataclass
class LPTiling:
    tiling: FractionalTiling
    value: Fraction
    dual: list  # per-cluster dual prices
    structures: list
    certificate_problems: list


def fractional_tiling(r: Multigraph2, rr: int) -> LPTiling:
    """Maximum-weight fractional F(R, rr)-tiling by exact simplex, with a dual certificate."""
    structs = enumerate_structures(r, rr)
    if not structs or r.k == 0:
        return LPTiling(FractionalTiling(rr), Fraction(0), [Fraction(0)] * r.k, structs, [])
    a = [[s.i(v) for s in structs] for v in range(r.k)]
    b = [1] * r.k
    c = [rr] * len(structs)
    res = solve_packing_lp(a, b, c)
    weights = {s: x for s, x in zip(structs, res.x) if x}
    return LPTiling(FractionalTiling(rr, weights), res.value, res.y, structs,
                    res.certificate_problems(a, b, c))


def _add(weights: dict, s: EmbStructure, w: Fraction):
    if w:
        weights[s] = weights.get(s, Fraction(0)) + w


def convert_4_to_3(omega: FractionalTiling) -> FractionalTiling:
    """Rewrite an F(R,4)-tiling as an F(R,3)-tiling with the same cluster loads."""
    out: dict = {}
    third = Fraction(1, 3)
    for s, w in omega.weights.items():
        shape = s.shape
        if s.r != 4 or shape not in ((1, 1, 1, 1), (1, 1, 2), (2, 2)):
            raise UnknownCase(f"structure {s.assign} is not a K_4-embeddable shape")
        if shape == (1, 1, 1, 1):
            for tri in combinations(s.support, 3):
                _add(out, EmbStructure.of({c: 1 for c in tri}), w * third)
        elif shape == (1, 1, 2):
            (x, _), (y, _) = [p for p in s.assign if p[1] == 1]
            z = next(c for c, m in s.assign if m == 2)
            _add(out, EmbStructure.of({x: 1, z: 2}), w * third)
            _add(out, EmbStructure.of({y: 1, z: 2}), w * third)
            _add(out, EmbStructure.of({x: 1, y: 1, z: 1}), 2 * w * third)
        else:
            x, y = s.support
            _add(out, EmbStructure.of({x: 1, y: 2}), 2 * w * third)
            _add(out, EmbStructure.of({x: 2, y: 1}), 2 * w * third)
    return FractionalTiling(3, out)


def convert_4_to_2(omega: FractionalTiling, k: Optional[int] = None) -> FractionalTiling:
    """Singleton doubled structure on each cluster, weighted half its load (load-preserving)."""
    if k is None:
        k = 1 + max((c for s in omega.weights for c in s.support), default=-1)
    out: dict = {}
    for v, load in enumerate(omega.loads(k)):
        _add(out, EmbStructure.of({v: 2}), load / 2)
    return FractionalTiling(2, out)


# ---------------------------------------------------------------- structure searches

def double_edge_premise(r: Multigraph2, rr: int) -> bool:
    """delta(R) > (1 - 2/rr) 2k, the degree condition under which every double edge
    should lie in a K_{rr+1}-embeddable structure (only meaningful for rr >= 4)."""
    return rr >= 4 and r.k > 0 and r.min_degree() > (1 - Fraction(2, rr)) * 2 * r.k


def structure_containing_double_edge(r: Multigraph2, rr: int, pair) -> Optional[EmbStructure]:
    u, v = pair
    if r.m(u, v) != 2:
        raise NotDoubleEdge(f"pair {u},{v} has multiplicity {r.m(u, v)}")
    for s in enumerate_structures(r, rr + 1):
        if s.i(u) == 2 and s.i(v) == 2:
            return s
    if double_edge_premise(r, rr):
        warnings.warn(f"double edge {u},{v} lies in no K_{rr + 1}-embeddable structure although "
                      f"the minimum-degree premise holds", CounterexampleWarning, stacklevel=2)
    return None


def crossing_structure(r: Multigraph2, rr: int, blocks) -> Optional[EmbStructure]:
    """A K_rr-embeddable structure whose support meets at least two blocks."""
    if len(blocks) < 2:
        raise ValueError("need at least two blocks")
    where = {}
    for idx, blk in enumerate(blocks):
        for c in blk:
            where[c] = idx
    for s in enumerate_structures(r, rr):
        if len({where.get(c) for c in s.support}) >= 2:
            return s
    return None


def vertex_structure(r: Multigraph2, rr: int, q_v) -> Optional[EmbStructure]:
    """A K_rr-embeddable structure sending at most one clique vertex outside q_v."""
    inside = set(q_v)
    for s in enumerate_structures(r, rr):
        if sum(m for c, m in s.assign if c not in inside) <= 1:
            return s
    return None
