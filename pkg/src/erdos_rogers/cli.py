"""Command-line entry point.

Each subcommand prints a report (JSON or CSV, one row per check) to stdout
and, with ``--out``, writes its artifact.  Exit status: 0 when no check
failed, 1 when one did (the report is still written), 2 on invalid input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import storage
from .checks import FAIL, Check, verdict
from .cliques import Graph, sampled_cover_check
from .hypergraph import Hypergraph, enumerate_dangerous, sample_hypergraph, verify_properties
from .lll import scan_threshold
from .pipeline import KS2_FREE, MODES, ConstructionConfig, checks_csv, clique_verdict, run_pipeline
from .plane import VERTICAL, build_affine_plane, truncate, uncovered_pairs
from .spartite import PartiteLineGraph, build_graph, g3_bound, ks1_counts, prune_dangerous, sparsify

EXIT_OK, EXIT_FAILED, EXIT_INVALID = 0, 1, 2


class InvalidInput(ValueError):
    pass


def _class_id(text: str):
    return text if text == VERTICAL else int(text)


def _emit(args, checks: list[Check], extra: dict | None = None) -> int:
    if args.format == "csv":
        sys.stdout.write(checks_csv(checks))
    else:
        body = {"checks": [c.as_row() for c in checks]}
        if extra:
            body.update(extra)
        sys.stdout.write(json.dumps(body, sort_keys=True, indent=2, default=str) + "\n")
    return EXIT_FAILED if any(c.verdict == FAIL for c in checks) else EXIT_OK


def _save(obj, args) -> None:
    if args.out:
        storage.save(obj, args.out)


def _load(path: str, *kinds):
    obj = storage.load(path)
    if kinds and not isinstance(obj, kinds):
        names = ", ".join(k.__name__ for k in kinds)
        raise InvalidInput(f"{path}: expected {names}, got {type(obj).__name__}")
    return obj


def _hyper_of(obj) -> Hypergraph:
    return obj.H if isinstance(obj, PartiteLineGraph) else obj


def cmd_plane(args) -> int:
    tp = truncate(build_affine_plane(args.q), _class_id(args.remove_class))
    _save(tp, args)
    q = tp.q
    unc = uncovered_pairs(tp)
    checks = [
        Check("lines", len(tp.lines), q * q, verdict(len(tp.lines) == q * q)),
        Check("uncovered_pairs", unc, q * math.comb(q, 2), verdict(unc == q * math.comb(q, 2))),
    ]
    return _emit(args, checks)


def cmd_hyper(args) -> int:
    q = args.q
    alpha = args.alpha if args.alpha is not None else math.log(q) ** 2
    p = args.keep_prob if args.keep_prob is not None else min(1.0, alpha / q)
    H = sample_hypergraph(truncate(build_affine_plane(q), _class_id(args.remove_class)), p, args.seed)
    _save(H, args)
    rep = verify_properties(H, alpha, args.sample_budget, args.seed)
    return _emit(args, rep.checks(), {"kept": len(H.kept), "keep_prob": p, "notices": rep.notices})


def cmd_build(args) -> int:
    H = _hyper_of(_load(args.inp, Hypergraph, PartiteLineGraph))
    G = build_graph(H, args.s, args.seed)
    _save(G, args)
    worst = max(ks1_counts(G).values(), default=0)
    bound = g3_bound(H, args.s)
    checks = [Check("G3_ks1_per_edge", worst, bound, verdict(worst <= bound))]
    return _emit(args, checks, {"edges": G.graph.n_edges})


def cmd_census(args) -> int:
    H = _hyper_of(_load(args.inp, Hypergraph, PartiteLineGraph))
    census = enumerate_dangerous(H)
    if args.out:
        # one [kind, vertex bitset] row per set; bit v is set iff point v belongs to it
        rows = [[kind, mask] for mask, kind in census.kind_of.items()]
        Path(args.out).write_text(json.dumps({"q": H.q, "dangerous": rows}, separators=(",", ":")) + "\n")
    kinds = {str(k): v for k, v in census.kinds().items()}
    return _emit(args, [Check("dangerous_count", len(census))], {"by_kind": kinds})


def cmd_prune(args) -> int:
    G = _load(args.inp, PartiteLineGraph)
    if G.s < 4:
        raise InvalidInput(f"prune needs s >= 4, got {G.s}")
    pr = prune_dangerous(G, enumerate_dangerous(G.H))
    _save(pr.kept_graph, args)
    kcheck, witness = clique_verdict(pr.kept_graph, G.s + 2, args.budget, args.seed, args.trials)
    checks = [Check("removed", len(pr.removed)), kcheck]
    return _emit(args, checks, {"survivors": pr.kept_graph.n_vertices, "witness": witness})


def cmd_sparsify(args) -> int:
    G = _load(args.inp, PartiteLineGraph, Graph)
    g = sparsify(G, args.edge_keep_prob, args.seed)
    _save(g, args)
    checks = [Check("edges_kept", g.n_edges)]
    if isinstance(G, PartiteLineGraph):
        kcheck, _ = clique_verdict(g, G.s + 1, args.budget, args.seed, args.trials)
        checks.append(kcheck)
    return _emit(args, checks)


def cmd_verify(args) -> int:
    obj = _load(args.inp, PartiteLineGraph, Graph)
    if isinstance(obj, PartiteLineGraph):
        g, s = obj.graph, args.s or obj.s
    else:
        if args.s is None:
            raise InvalidInput("--s is required for plain graph files")
        g, s = obj, args.s
    w = min(args.subset_size, g.n_vertices)
    est = sampled_cover_check(g, s, w, args.trials, args.seed)
    checks = [Check("cover_every_subset_has_Ks", est.hits, est.trials, verdict(est.all_hit), args.seed)]
    if args.clique_size:
        checks.append(clique_verdict(g, args.clique_size, args.budget, args.seed, args.trials)[0])
    return _emit(args, checks, {"subset_size": w, "miss_examples": est.miss_examples})


def cmd_lll(args) -> int:
    res = scan_threshold(args.s, args.q_min, args.q_max)
    body = {
        "q0": res.q0,
        "first_satisfied": res.first_satisfied,
        "blocking": res.blocking,
        "margins": res.report.table() if res.report else [],
    }
    if args.out:
        Path(args.out).write_text(json.dumps(body, sort_keys=True, indent=2) + "\n")
    checks = [Check("lll_threshold", res.q0, f"[{args.q_min}, {args.q_max}]", verdict(res.q0 is not None))]
    checks += [Check(f"lll_{m['name']}", m["margin"], 0, verdict(m["ok"])) for m in body["margins"]]
    return _emit(args, checks, body)


def cmd_pipeline(args) -> int:
    cfg = ConstructionConfig(
        n=args.n,
        s=args.s,
        mode=args.mode,
        seed=args.seed,
        subset_size=args.subset_size,
        trials=args.trials,
        budget=args.budget,
        keep_prob=args.keep_prob,
        edge_keep_prob=args.edge_keep_prob,
    )
    rep = run_pipeline(cfg, args.out)
    if args.format == "csv":
        sys.stdout.write(rep.to_csv())
    else:
        sys.stdout.write(rep.to_json())
    return EXIT_OK if rep.passed else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="artifact path (directory for 'pipeline')")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--budget", type=int, default=3000, help="exact clique search vertex budget")
    common.add_argument("--trials", type=int, default=20)

    ap = argparse.ArgumentParser(prog="erdos-rogers", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plane", parents=[common], help="truncated affine plane")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--remove-class", default=VERTICAL)
    p.set_defaults(func=cmd_plane)

    p = sub.add_parser("hyper", parents=[common], help="sample the line hypergraph and measure its properties")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--keep-prob", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--remove-class", default=VERTICAL)
    p.add_argument("--sample-budget", type=int, default=20)
    p.set_defaults(func=cmd_hyper)

    p = sub.add_parser("build", parents=[common], help="replace kept lines by random complete s-partite graphs")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("census", parents=[common], help="enumerate dangerous sets")
    p.add_argument("--in", dest="inp", required=True)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("prune", parents=[common], help="delete dangerous sets and check K_{s+2}-freeness")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_prune)

    p = sub.add_parser("sparsify", parents=[common], help="keep each edge independently")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--edge-keep-prob", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_sparsify)

    p = sub.add_parser("verify", parents=[common], help="sampled check that every w-subset contains K_s")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--subset-size", type=int, required=True)
    p.add_argument("--s", type=int)
    p.add_argument("--clique-size", type=int, help="also check K_k-freeness for this k")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("lll", parents=[common], help="scan primes for the Local Lemma threshold")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--q-min", type=int, default=3)
    p.add_argument("--q-max", type=int, required=True)
    p.set_defaults(func=cmd_lll)

    p = sub.add_parser("pipeline", parents=[common], help="end-to-end construction")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--mode", choices=MODES, default=KS2_FREE)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--subset-size", type=int)
    p.add_argument("--keep-prob", type=float)
    p.add_argument("--edge-keep-prob", type=float)
    p.set_defaults(func=cmd_pipeline)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        # FormatError, NotPrime, BadProbability and friends are ValueErrors
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
