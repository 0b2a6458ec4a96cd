"""Command-line entry point: one subcommand per module, JSON (or flat text) on output.

Exit codes: 0 success, 1 a verified negative answer (no factor, no connector, not in
the lattice, ...), 2 usage errors and failures.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import ArbortileError, EmbedFail
from .graph import Graph

DEFAULT_CAPS = {
    "host": 60,           # factor-engine host order
    "copies": 10**6,      # enumerated pattern copies
    "nodes": 2 * 10**6,   # exact-cover search nodes
    "embed_nodes": 10**6, # embedder backtracking nodes
    "connector": 10**5,   # connector candidate sets
}

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR = 0, 1, 2


class _Negative(Exception):
    """Carries a payload for a mathematically negative answer."""

    def __init__(self, payload):
        super().__init__("negative")
        self.payload = payload


def load_caps(env=None) -> dict:
    """Default caps overridden by ARBORTILE_CAPS (JSON object or 'name=value,...')."""
    caps = dict(DEFAULT_CAPS)
    raw = (os.environ if env is None else env).get("ARBORTILE_CAPS", "").strip()
    if not raw:
        return caps
    if raw.startswith("{"):
        pairs = json.loads(raw).items()
    else:
        pairs = [item.split("=", 1) for item in raw.split(",") if item.strip()]
    for name, value in pairs:
        name = name.strip()
        if name not in caps:
            raise ValueError(f"unknown cap {name!r} in ARBORTILE_CAPS")
        caps[name] = int(value)
    return caps


def _graph(path) -> Graph:
    from .graphio import read_graph
    return read_graph(path)


def _clusters(path) -> list[list[int]]:
    data = json.loads(Path(path).read_text())
    if not isinstance(data, list) or not all(isinstance(c, list) for c in data):
        raise ValueError("cluster file must hold a JSON list of vertex lists")
    return [[int(v) for v in c] for c in data]


def _thresholds(args):
    from .reduced import Thresholds
    return Thresholds(Fraction(args.beta), Fraction(args.epsilon), Fraction(args.mu), Fraction(args.eta))


# ---------------------------------------------------------------- subcommands

def cmd_invariants(args, caps):
    from .invariants import degree_threshold, invariant_report
    h = _graph(args.graph)
    rep = invariant_report(h)
    out = {"report": rep, "problems": rep.check()}
    if args.n is not None:
        out["degree_threshold"] = degree_threshold(h, args.n, Fraction(args.mu))
    return out


def cmd_factor(args, caps):
    from .factor import has_factor, max_tiling, verify_tiling
    g, h = _graph(args.host), _graph(args.pattern)
    if args.max:
        cert = max_tiling(g, h, host_cap=caps["host"], copy_cap=caps["copies"], node_budget=caps["nodes"])
        return {"max_tiling": cert, "covered": len(cert.covered), "verified": bool(verify_tiling(g, h, cert))}
    ok, cert = has_factor(g, h, host_cap=caps["host"], copy_cap=caps["copies"], node_budget=caps["nodes"])
    if not ok:
        raise _Negative({"has_factor": False})
    return {"has_factor": True, "certificate": cert,
            "verified": bool(verify_tiling(g, h, cert, require_factor=True))}


def cmd_qbuild(args, caps):
    from .graphio import write_graph
    from .qgraph import admissible_pairs, build_q, h_factor_in_q, plan_q, verify_q
    h = _graph(args.pattern)
    if args.a is None or args.b is None:
        return {"admissible_pairs": admissible_pairs(h)}
    spec = plan_q(h, args.a, args.b)
    q = build_q(spec)
    check = verify_q(h, spec, solver_cap=caps["host"])
    if args.write_q:
        write_graph(q.graph, args.write_q)
    return {"a": spec.a, "b": spec.b, "s": spec.s, "case": spec.case, "partition": spec.partition,
            "q": q.graph, "clusters": q.clusters, "factor": h_factor_in_q(h, spec, q),
            "verified": bool(check), "reason": check.reason}


def cmd_embed_q(args, caps):
    from .embed import ClusterSystem, density_preconditions, embed_q, verify_q_embedding
    from .qgraph import plan_q
    g, h = _graph(args.host), _graph(args.pattern)
    cs = ClusterSystem(g, _clusters(args.clusters))
    spec = plan_q(h, args.a, args.b)
    beta = Fraction(args.beta)
    try:
        emb = embed_q(cs, spec, beta=beta, node_budget=caps["embed_nodes"])
    except EmbedFail as exc:
        if exc.exhausted_budget:
            raise
        raise _Negative({"embedded": False, "reason": str(exc), "depth": exc.depth,
                         "density": density_preconditions(cs, args.a, args.b, beta)}) from None
    return {"embedded": True, "map": emb.map, "clusters": emb.clusters, "path": emb.path,
            "density": emb.density_report, "problems": verify_q_embedding(cs, emb)}


def cmd_reduce(args, caps):
    from .embed import ClusterSystem
    from .reduced import build_reduced, check_degree_bound, emit_multigraph
    g = _graph(args.host)
    cs = ClusterSystem(g, _clusters(args.clusters))
    r = build_reduced(cs, _thresholds(args))
    if args.write_r:
        Path(args.write_r).write_text(emit_multigraph(r))
    out = {"reduced": r, "min_degree": r.min_degree()}
    if args.f is not None:
        out["degree_bound_ok"] = check_degree_bound(r, args.f, Fraction(args.mu))
    return out


def cmd_fractile(args, caps):
    from .reduced import convert_4_to_2, convert_4_to_3, fractional_tiling, parse_multigraph
    r = parse_multigraph(Path(args.multigraph).read_text())
    lp = fractional_tiling(r, args.r)
    out = {"value": lp.value, "tiling": lp.tiling, "dual": lp.dual,
           "certificate_problems": lp.certificate_problems,
           "perfect": lp.value == r.k}
    if args.convert and args.r == 4:
        out["as_3"] = convert_4_to_3(lp.tiling)
        out["as_2"] = convert_4_to_2(lp.tiling, r.k)
    return out


def cmd_pipeline(args, caps):
    from .embed import ClusterSystem
    from .pipeline import almost_tiling_pipeline
    g, h = _graph(args.host), _graph(args.pattern)
    cs = ClusterSystem(g, _clusters(args.clusters))
    cert, rep = almost_tiling_pipeline(g, cs, h, _thresholds(args), node_budget=caps["embed_nodes"])
    return {"tiling": cert, "report": rep, "coverage": rep.coverage}


def cmd_extremal(args, caps):
    from .extremal import certify_no_factor, claimed_degree_bound, construct, verify_claims
    from .graphio import write_graph
    h = _graph(args.pattern)
    alpha = Fraction(args.alpha)
    inst = construct(args.family, args.n, h, seed=args.seed, alpha_frac=alpha)
    cert = certify_no_factor(inst, h, solver_cap=caps["host"])
    if args.write_g:
        write_graph(inst.graph, args.write_g)
    return {"family": inst.family, "blocks": inst.blocks, "params": inst.params,
            "graph": inst.graph, "certificate": cert,
            "degree_bound": claimed_degree_bound(inst, h),
            "claims": verify_claims(inst, h, alpha, exact=not args.interval_alpha)}


def cmd_absorb(args, caps):
    from .absorb import find_connector, lattice_member, robust_vectors, transferral
    if args.mode == "connector":
        g, h = _graph(args.host), _graph(args.pattern)
        con = find_connector(g, h, args.u, args.v, args.t, avoid=args.avoid or (), cap=caps["connector"])
        if con is None:
            raise _Negative({"connector": None})
        return {"connector": con}
    if args.mode == "robust":
        g, h = _graph(args.host), _graph(args.pattern)
        blocks = _clusters(args.blocks)
        return {"robust_vectors": robust_vectors(g, h, blocks, Fraction(args.mu), node_budget=caps["nodes"])}
    vectors = json.loads(args.vectors)
    if args.mode == "transferral":
        hit = transferral(vectors)
        if hit is None:
            raise _Negative({"transferral": None})
        i, j, s, t = hit
        return {"transferral": {"i": i, "j": j, "s": s, "t": t}}
    target = json.loads(args.target)
    if not lattice_member(vectors, target):
        raise _Negative({"member": False})
    return {"member": True}


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="arbortile", description="Graph tiling invariants, gadgets and certificates.")
    p.add_argument("--version", action="version", version=f"arbortile {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized generators")
    common.add_argument("--output", "-o", default=None, help="write output here instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="json")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        return sp

    def thresholds(sp):
        sp.add_argument("--beta", default="1/10")
        sp.add_argument("--epsilon", default="1/20")
        sp.add_argument("--mu", default="1/5")
        sp.add_argument("--eta", default="1/10")

    sp = add("invariants", cmd_invariants, "arboricity, f(H), hcf and related invariants")
    sp.add_argument("graph")
    sp.add_argument("--n", type=int, default=None, help="also report the degree threshold for this host order")
    sp.add_argument("--mu", default="0")

    sp = add("factor", cmd_factor, "decide whether a host has an H-factor")
    sp.add_argument("--host", required=True)
    sp.add_argument("--pattern", required=True)
    sp.add_argument("--max", action="store_true", help="report a maximum tiling instead")

    sp = add("qbuild", cmd_qbuild, "build the Q(a,b) gadget with its H-factor")
    sp.add_argument("--pattern", required=True)
    sp.add_argument("--a", type=int)
    sp.add_argument("--b", type=int)
    sp.add_argument("--write-q", default=None)

    sp = add("embed-q", cmd_embed_q, "embed Q(a,b) into a clustered host")
    sp.add_argument("--host", required=True)
    sp.add_argument("--pattern", required=True)
    sp.add_argument("--clusters", required=True, help="JSON list of vertex lists")
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    sp.add_argument("--beta", default="1/10")

    sp = add("reduce", cmd_reduce, "reduced multigraph of a clustered host")
    sp.add_argument("--host", required=True)
    sp.add_argument("--clusters", required=True)
    sp.add_argument("--f", type=int, default=None, help="check the minimum-degree bound for this f")
    sp.add_argument("--write-r", default=None)
    thresholds(sp)

    sp = add("fractile", cmd_fractile, "maximum fractional tiling of a reduced multigraph")
    sp.add_argument("multigraph")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--convert", action="store_true", help="for r = 4 also emit the r = 3 and r = 2 rewrites")

    sp = add("pipeline", cmd_pipeline, "almost-perfect tiling from a clustered host")
    sp.add_argument("--host", required=True)
    sp.add_argument("--pattern", required=True)
    sp.add_argument("--clusters", required=True)
    thresholds(sp)

    sp = add("extremal", cmd_extremal, "extremal host without an H-factor, with certificate")
    sp.add_argument("--family", required=True, choices=("g0", "two-part", "multi-part", "space-barrier"))
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--pattern", required=True)
    sp.add_argument("--alpha", default="1/2")
    sp.add_argument("--interval-alpha", action="store_true", help="certify alpha by bounds only")
    sp.add_argument("--write-g", default=None)

    sp = add("absorb", cmd_absorb, "connectors, robust vectors, transferrals, lattice membership")
    sp.add_argument("mode", choices=("connector", "robust", "transferral", "lattice"))
    sp.add_argument("--host")
    sp.add_argument("--pattern")
    sp.add_argument("--u", type=int)
    sp.add_argument("--v", type=int)
    sp.add_argument("--t", type=int, default=1)
    sp.add_argument("--avoid", type=int, nargs="*")
    sp.add_argument("--blocks", help="JSON file with the vertex partition")
    sp.add_argument("--mu", default="1/10")
    sp.add_argument("--vectors", help="JSON list of integer vectors")
    sp.add_argument("--target", help="JSON integer vector")
    return p


_REQUIRED = {
    "connector": ("host", "pattern", "u", "v"),
    "robust": ("host", "pattern", "blocks"),
    "transferral": ("vectors",),
    "lattice": ("vectors", "target"),
}


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}{k}.")
    else:
        yield f"{prefix[:-1]}: {json.dumps(obj, sort_keys=True)}"


def _render(payload, fmt) -> str:
    from .serialize import dumps, to_jsonable
    if fmt == "json":
        return dumps(payload)
    return "\n".join(_flatten(to_jsonable(payload))) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_ERROR
    if args.command == "absorb":
        missing = [name for name in _REQUIRED[args.mode] if getattr(args, name) is None]
        if missing:
            parser.print_usage(sys.stderr)
            print(f"arbortile absorb {args.mode}: missing --{', --'.join(missing)}", file=sys.stderr)
            return EXIT_ERROR
    try:
        caps = load_caps()
        body, code = args.fn(args, caps), EXIT_OK
    except _Negative as neg:
        body, code = neg.payload, EXIT_NEGATIVE
    except (ArbortileError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"arbortile {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    config = {"seed": args.seed, "caps": caps, "output": args.output, "format": args.format}
    payload = {"version": __version__, "command": args.command, "config": config, "result": body}
    text = _render(payload, args.format)
    if args.output:
        Path(args.output).write_text(text)
    else:
        try:
            sys.stdout.write(text)
            sys.stdout.flush()
        except BrokenPipeError:
            sys.stderr.close()
    return code
