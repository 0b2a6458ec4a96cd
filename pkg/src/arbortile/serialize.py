"""Deterministic JSON encoding for certificates and reports.

Rationals become "p/q" strings (integers stay integers), infinity becomes "inf", graphs
become {"n", "edges"} with sorted edges, and dictionaries are emitted with sorted keys.
Floats other than infinity are rejected so that no certificate silently loses exactness.
"""
from __future__ import annotations

import dataclasses
import json
import math
from fractions import Fraction

from .factor import HCopy, TilingCertificate
from .graph import Graph
from .invariants import AcyclicPartition
from .reduced import EmbStructure, FractionalTiling, Multigraph2


def rational(x) -> str | int:
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(text) -> Fraction:
    return Fraction(str(text))


def _key(k) -> str:
    if isinstance(k, tuple):
        return ",".join(str(_key(x)) for x in k)
    if isinstance(k, EmbStructure):
        return " ".join(f"{c}:{m}" for c, m in k.assign)
    return str(k)


def to_jsonable(obj):
    if obj is None or isinstance(obj, (bool, str, int)):
        return obj
    if isinstance(obj, float):
        if math.isinf(obj) and obj > 0:
            return "inf"
        raise TypeError(f"refusing to serialize float {obj!r}; use Fraction")
    if isinstance(obj, Fraction):
        return rational(obj)
    if isinstance(obj, Graph):
        out = {"n": obj.n, "edges": [list(e) for e in obj.sorted_edges()]}
        if obj.name:
            out["name"] = obj.name
        return out
    if isinstance(obj, AcyclicPartition):
        return [list(b) for b in obj.blocks]
    if isinstance(obj, HCopy):
        return list(obj.map)
    if isinstance(obj, TilingCertificate):
        return {"copies": [list(c.map) for c in obj.copies], "count": len(obj.copies)}
    if isinstance(obj, EmbStructure):
        return {str(c): m for c, m in obj.assign}
    if isinstance(obj, Multigraph2):
        return {"k": obj.k, "edges": [[i, j, m] for (i, j), m in sorted(obj.mult.items())]}
    if isinstance(obj, FractionalTiling):
        return {"r": obj.rr,
                "weights": [{"structure": to_jsonable(s), "weight": rational(w)}
                            for s, w in sorted(obj.weights.items())]}
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {_key(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return [to_jsonable(x) for x in sorted(obj)]
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2) + "\n"
