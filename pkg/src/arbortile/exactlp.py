"""Exact rational simplex for packing LPs: maximize c.x subject to A x <= b, x >= 0, b >= 0.

Dense tableau over Fractions with Bland's rule, so it always terminates.  The slack
basis is feasible because b >= 0, so no phase one is needed.  The optimal dual is read
off the slack columns of the final objective row.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass
class LPResult:
    x: list
    value: Fraction
    y: list  # dual, one entry per constraint row
    pivots: int

    def certificate_problems(self, a, b, c) -> list[str]:
        """Independent optimality checks: feasibility, strong duality, complementary slackness."""
        return check_packing_certificate(a, b, c, self.x, self.y)


def check_packing_certificate(a, b, c, x, y) -> list[str]:
    out = []
    m, n = len(a), len(c)
    if any(v < 0 for v in x):
        out.append("primal sign")
    if any(v < 0 for v in y):
        out.append("dual sign")
    rows = [sum(a[i][j] * x[j] for j in range(n)) for i in range(m)]
    if any(rows[i] > b[i] for i in range(m)):
        out.append("primal feasibility")
    cols = [sum(a[i][j] * y[i] for i in range(m)) for j in range(n)]
    if any(cols[j] < c[j] for j in range(n)):
        out.append("dual feasibility")
    primal = sum(c[j] * x[j] for j in range(n))
    dual = sum(b[i] * y[i] for i in range(m))
    if primal != dual:
        out.append("strong duality")
    if any(x[j] and cols[j] != c[j] for j in range(n)):
        out.append("complementary slackness (columns)")
    if any(y[i] and rows[i] != b[i] for i in range(m)):
        out.append("complementary slackness (rows)")
    return out


def solve_packing_lp(a, b, c) -> LPResult:
    m, n = len(a), len(c)
    if any(v < 0 for v in b):
        raise ValueError("right-hand side must be non-negative")
    # tableau rows: [A | I | b]; objective row holds reduced costs (negated c)
    width = n + m + 1
    t = []
    for i in range(m):
        row = [Fraction(v) for v in a[i]] + [Fraction(0)] * m + [Fraction(b[i])]
        row[n + i] = Fraction(1)
        t.append(row)
    obj = [Fraction(-v) for v in c] + [Fraction(0)] * m + [Fraction(0)]
    basis = [n + i for i in range(m)]
    pivots = 0
    while True:
        enter = next((j for j in range(n + m) if obj[j] < 0), None)  # Bland: smallest index
        if enter is None:
            break
        best = None
        for i in range(m):
            if t[i][enter] > 0:
                ratio = t[i][-1] / t[i][enter]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            raise ValueError("unbounded LP")
        r = best[1]
        piv = t[r][enter]
        t[r] = [v / piv for v in t[r]]
        for i in range(m):
            if i != r and t[i][enter]:
                factor = t[i][enter]
                ti, tr = t[i], t[r]
                t[i] = [ti[k] - factor * tr[k] for k in range(width)]
        if obj[enter]:
            factor = obj[enter]
            obj = [obj[k] - factor * t[r][k] for k in range(width)]
        basis[r] = enter
        pivots += 1
    x = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = t[i][-1]
    y = [obj[n + i] for i in range(m)]
    return LPResult(x, obj[-1], y, pivots)
