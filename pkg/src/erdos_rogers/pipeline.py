"""End-to-end constructions of K_{s+1}-free and K_{s+2}-free graphs of order n."""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

from . import storage
from .checks import FAIL, SAMPLED, Check, verdict
from .cliques import Graph, find_clique, sampled_cover_check, to_mask
from .hypergraph import enumerate_dangerous, sample_hypergraph, verify_properties
from .numtheory import bertrand_prime
from .plane import VERTICAL, build_affine_plane, truncate
from .rng import (
    STAGE_COVER,
    STAGE_HYPERGRAPH,
    STAGE_PARTITION,
    STAGE_PROPERTIES,
    STAGE_SPARSIFY,
    derive_seed,
    sample_subset,
)
from .spartite import build_graph, g3_bound, ks1_counts, prune_dangerous, sparsify

KS1_FREE = "KS1_FREE"
KS2_FREE = "KS2_FREE"
MODES = (KS1_FREE, KS2_FREE)


class RemovalTooLarge(RuntimeError):
    pass


@dataclass
class ConstructionConfig:
    n: int
    s: int
    mode: str = KS2_FREE
    seed: int = 0
    alpha: float | None = None
    beta: float | None = None
    keep_prob: float | None = None
    edge_keep_prob: float | None = None
    subset_size: int | None = None
    trials: int = 20
    sample_budget: int = 20
    budget: int = 3000
    remove_class: int | str = VERTICAL

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.s < 3:
            raise ValueError(f"s must be >= 3, got {self.s}")
        if self.mode == KS2_FREE and self.s < 4:
            raise ValueError("KS2_FREE needs s >= 4")
        if self.trials < 1 or self.sample_budget < 1 or self.budget < 1:
            raise ValueError("trials, sample_budget and budget must be positive")

    def resolve(self, q: int) -> dict[str, float]:
        """Default parameters for order q (alpha = ln(q)^2 and friends), with overrides applied."""
        L = math.log(q)
        alpha = self.alpha if self.alpha is not None else L**2
        return {
            "alpha": alpha,
            "beta": self.beta if self.beta is not None else L ** (4 * self.s**2),
            "keep_prob": self.keep_prob if self.keep_prob is not None else min(1.0, alpha / q),
            "edge_keep_prob": self.edge_keep_prob if self.edge_keep_prob is not None else min(1.0, L**-8),
        }


def stage_seeds(master: int) -> dict[str, int]:
    return {
        "hypergraph": derive_seed(master, STAGE_HYPERGRAPH),
        "partition": derive_seed(master, STAGE_PARTITION),
        "sparsify": derive_seed(master, STAGE_SPARSIFY),
        "cover": derive_seed(master, STAGE_COVER),
        "properties": derive_seed(master, STAGE_PROPERTIES),
    }


@dataclass
class RunReport:
    config: dict[str, Any]
    q: int
    seeds: dict[str, int]
    params: dict[str, float]
    hypergraph: dict[str, Any]
    graph: dict[str, Any]
    cover: dict[str, Any]
    checks: list[Check]
    ratios: dict[str, float] = field(default_factory=dict)
    notices: list[str] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.verdict != FAIL for c in self.checks)

    def verdict_of(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)

    def to_dict(self, include_timings: bool = False) -> dict:
        d = asdict(self)
        d["checks"] = [c.as_row() for c in self.checks]
        d["passed"] = self.passed
        if not include_timings:
            del d["timings"]
        return d

    def to_json(self, include_timings: bool = False) -> str:
        return json.dumps(self.to_dict(include_timings), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        return checks_csv(self.checks)


def checks_csv(checks: list[Check]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=["name", "value", "threshold", "verdict", "seed"], lineterminator="\n")
    w.writeheader()
    for c in checks:
        w.writerow(c.as_row())
    return buf.getvalue()


def clique_verdict(g: Graph, k: int, budget: int, seed: int, trials: int) -> tuple[Check, tuple | None]:
    """K_k-freeness: exact search within the budget, sampled subsets beyond it."""
    name = f"K{k}_free"
    if g.n_vertices <= budget:
        w = find_clique(g, k)
        return Check(name, "absent" if w is None else "present", "absent", verdict(w is None)), (
            w.vertices if w else None
        )
    verts = g.vertices
    for t in range(trials):
        sub = [verts[i] for i in sample_subset(len(verts), budget, seed, t)]
        w = find_clique(g, k, to_mask(sub))
        if w is not None:
            return Check(name, "present", "absent", FAIL, seed), w.vertices
    return Check(name, "absent-in-samples", "absent", SAMPLED, seed), None


def select_survivors(removed_mask: int, q: int, n: int) -> list[int]:
    """The n smallest vertex labels outside R; raises if fewer than n remain."""
    survivors = [v for v in range(q * q) if not removed_mask >> v & 1]
    if len(survivors) < n:
        raise RemovalTooLarge(f"|R| = {q * q - len(survivors)} exceeds q^2 - n = {q * q - n}")
    return survivors[:n]


def run_pipeline(config: ConstructionConfig, out_dir: str | Path | None = None) -> RunReport:
    """Run the KS2_FREE (build, census, prune, induce) or KS1_FREE (build, sparsify) pipeline.

    The report is a pure function of the configuration; only ``timings``
    varies between runs.
    """
    timings: dict[str, float] = {}
    clock = time.perf_counter()

    def lap(stage: str) -> None:
        nonlocal clock
        now = time.perf_counter()
        timings[stage] = round(now - clock, 6)
        clock = now

    s, n = config.s, config.n
    q = bertrand_prime(n)
    seeds = stage_seeds(config.seed)
    params = config.resolve(q)
    tp = truncate(build_affine_plane(q), config.remove_class)
    H = sample_hypergraph(tp, params["keep_prob"], seeds["hypergraph"])
    lap("hypergraph")

    census = enumerate_dangerous(H) if config.mode == KS2_FREE else None
    lap("census")
    hrep = verify_properties(H, params["alpha"], config.sample_budget, seeds["properties"], census if census is not None else False)
    lap("properties")

    G = build_graph(H, s, seeds["partition"])
    counts = ks1_counts(G)
    bound = g3_bound(H, s)
    worst = max(counts.values(), default=0)
    lap("graph")

    checks = list(hrep.checks())
    checks.append(Check("G3_ks1_per_edge", worst, bound, verdict(worst <= bound)))
    gstats: dict[str, Any] = {
        "n_vertices": G.n_vertices,
        "edges": G.graph.n_edges,
        "max_ks1_per_edge": worst,
        "g3_bound": bound,
    }
    notices = list(hrep.notices)
    cover_seed = seeds["cover"]

    if config.mode == KS2_FREE:
        pr = prune_dangerous(G, census)
        gstats["dangerous_count"] = len(census)
        gstats["dangerous_by_kind"] = {str(k): v for k, v in census.kinds().items()}
        gstats["removed"] = len(pr.removed)
        room = q * q - n
        removal_ok = len(pr.removed) <= room
        checks.append(Check("removal_budget", len(pr.removed), room, verdict(removal_ok)))
        try:
            chosen = select_survivors(to_mask(pr.removed), q, n)
        except RemovalTooLarge as exc:
            notices.append(f"RemovalTooLarge: {exc}; continuing on all {q * q - len(pr.removed)} survivors")
            chosen = pr.kept_graph.vertices
        final = pr.kept_graph.induced(chosen)
        target = s + 2
        lap("prune")
    else:
        final = sparsify(G, params["edge_keep_prob"], seeds["sparsify"])
        gstats["sparsified_edges"] = final.n_edges
        target = s + 1
        lap("sparsify")

    gstats["final_vertices"] = final.n_vertices
    gstats["final_edges"] = final.n_edges
    kcheck, witness = clique_verdict(final, target, config.budget, cover_seed, config.trials)
    checks.append(kcheck)
    gstats["clique_witness"] = list(witness) if witness else None
    lap("clique_search")

    if config.subset_size is not None:
        w = config.subset_size
    elif config.mode == KS2_FREE:
        w = math.ceil(64 * s * math.sqrt(n))
    else:
        w = 64 * s * params["beta"] * q
        w = math.ceil(w) if math.isfinite(w) else q * q
    w_eff = min(w, final.n_vertices)
    if w_eff < w:
        notices.append(f"cover subset size {w} capped at {w_eff} available vertices")
    est = sampled_cover_check(final, s, w_eff, config.trials, cover_seed)
    checks.append(Check("cover_every_subset_has_Ks", est.hits, est.trials, verdict(est.all_hit and w_eff > 0), cover_seed))
    lap("cover")

    # measured only; the constants of the asymptotic bounds are never instantiated
    ratios = {"subset_over_sqrt_n": w_eff / math.sqrt(n)}
    if n >= 3 and w_eff > 0:
        ratios["subset_over_polylog_sqrt_n"] = math.exp(
            math.log(w_eff) - 4 * s * s * math.log(math.log(n)) - 0.5 * math.log(n)
        )
    report = RunReport(
        config=asdict(config),
        q=q,
        seeds=seeds,
        params=params,
        hypergraph=_hreport_dict(hrep),
        graph=gstats,
        cover={
            "subset_size": est.subset_size,
            "trials": est.trials,
            "hits": est.hits,
            "seed": est.seed,
            "misses": len(est.miss_examples),
        },
        checks=checks,
        ratios=ratios,
        notices=notices,
        timings=timings,
    )

    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        storage.save(H, out / "hypergraph.json")
        storage.save(G, out / "graph.json")
        (out / "report.json").write_text(report.to_json())
        (out / "report.csv").write_text(report.to_csv())
        if est.miss_examples:
            (out / "cover_misses.json").write_text(json.dumps({"seed": cover_seed, "subset_size": w_eff, "subsets": est.miss_examples}))
    return report


def _hreport_dict(h) -> dict:
    d = asdict(h)
    d["h5_min_sampled"] = {str(k): v for k, v in h.h5_min_sampled.items()}
    return d
