"""Almost-perfect H-tiling from a cluster system.

Reduce the clusters to a multigraph, solve the fractional F(R, f(H))-tiling LP, shrink
the weights by (1 - eta), and for each structure K extract disjoint copies of the
matching Q(a, b) gadget while K uses at most i_K(V) * w(K) * m vertices of each
cluster V (m is the cluster size).  Each embedded gadget contributes its explicit
H-factor.  Failures at any stage are recorded and the partial tiling is kept.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .embed import ClusterSystem, embed_q
from .errors import ArbortileError, EmbedFail
from .factor import HCopy, TilingCertificate, verify_tiling
from .graph import Graph
from .invariants import f_value
from .qgraph import h_factor_in_q, plan_q
from .reduced import Thresholds, build_reduced, fractional_tiling


@dataclass
class StructureAccount:
    assign: tuple
    weight: Fraction
    quotas: dict  # cluster -> vertex quota
    planned: int  # gadgets allowed by the quotas
    embedded: int = 0
    copies: int = 0
    note: str = ""


@dataclass
class PipelineReport:
    lp_value: Fraction
    scaled_value: Fraction
    covered: int
    n: int
    structures: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)
    verified: bool = False

    @property
    def coverage(self) -> Fraction:
        return Fraction(self.covered, self.n) if self.n else Fraction(0)


def almost_tiling_pipeline(g: Graph, cs: ClusterSystem, h: Graph, th: Thresholds,
                           node_budget: int = 10**5) -> tuple[TilingCertificate, PipelineReport]:
    if cs.host is not g:
        cs = ClusterSystem(g, cs.clusters)
    cert = TilingCertificate([])
    report = PipelineReport(Fraction(0), Fraction(0), 0, g.n)
    try:
        r = build_reduced(cs, th)
        f = f_value(h)
        lp = fractional_tiling(r, f)
    except ArbortileError as exc:
        report.diagnostics.append(f"setup: {exc}")
        return cert, report
    if lp.certificate_problems:
        report.diagnostics.append(f"lp certificate: {lp.certificate_problems}")
    report.lp_value = lp.value
    scaled = lp.tiling.scaled(1 - th.eta)
    report.scaled_value = scaled.total()
    m = len(cs.clusters[0])
    used = 0
    for struct in sorted(scaled.weights):
        w = scaled.weights[struct]
        singles = [c for c, k in struct.assign if k == 1]
        doubles = [c for c, k in struct.assign if k == 2]
        quotas = {c: math.floor(k * w * m) for c, k in struct.assign}
        try:
            spec = plan_q(h, len(singles), len(doubles))
        except ArbortileError as exc:
            report.structures.append(StructureAccount(struct.assign, w, quotas, 0, note=f"plan: {exc}"))
            continue
        planned = min(quotas[c] // (spec.s * k) for c, k in struct.assign)
        acct = StructureAccount(struct.assign, w, quotas, planned)
        report.structures.append(acct)
        sub = ClusterSystem(g, [cs.clusters[c] for c in singles + doubles])
        for _ in range(planned):
            try:
                emb = embed_q(sub, spec, beta=th.beta, node_budget=node_budget, avoid=used)
            except EmbedFail as exc:
                acct.note = f"embed: {exc} (depth {exc.depth}, budget {'hit' if exc.exhausted_budget else 'not hit'})"
                break
            for c in h_factor_in_q(h, spec, emb.q).copies:
                cert.copies.append(HCopy(tuple(emb.map[x] for x in c.map)))
                acct.copies += 1
            for x in emb.map:
                used |= 1 << x
            acct.embedded += 1
    check = verify_tiling(g, h, cert)
    report.verified = bool(check)
    if not check:
        report.diagnostics.append(f"verification failed: {check.reason}")
        cert = TilingCertificate([])
    report.covered = len(cert.covered)
    return cert, report
