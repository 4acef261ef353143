"""Affine-plane constructions of K_{s+1}- and K_{s+2}-free graphs with small s-independence number."""

from .cliques import (
    CliqueWitness,
    CoverEstimate,
    Graph,
    count_cliques,
    enumerate_cliques,
    exact_s_independence,
    find_clique,
    sampled_cover_check,
)
from .hypergraph import (
    Census,
    DangerousSet,
    HReport,
    Hypergraph,
    complete_set,
    enumerate_dangerous,
    heavy_lines,
    lines_meeting_subset,
    max_degree,
    sample_hypergraph,
    verify_properties,
)
from .lll import LllParams, MarginReport, check_inequalities, compute_params, scan_threshold
from .numtheory import bertrand_prime, is_prime
from .pipeline import KS1_FREE, KS2_FREE, ConstructionConfig, RunReport, run_pipeline
from .plane import (
    VERTICAL,
    AffinePlane,
    Line,
    Point,
    TruncatedPlane,
    build_affine_plane,
    general_position,
    line_through,
    lines_meeting,
    truncate,
)
from .spartite import (
    KsDecomposition,
    PartiteLineGraph,
    PruneResult,
    build_graph,
    count_ks1_per_edge,
    edge_disjoint_ks,
    ks2_dangerous_audit,
    ks_witness,
    prune_dangerous,
    sparsify,
    spartite_decomposition,
)
from .storage import load, save

__version__ = "0.1.0"
