"""JSON artifacts for planes, hypergraphs and graphs.

Every file is one JSON object with ``format_version`` and ``kind`` at the
top level.  Graph files store the construction (kept line ids and per-line
labels), never the edge list, since edges are recomputable.  Output is
written with sorted keys and fixed separators so equal objects give equal
bytes.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .cliques import Graph, to_mask
from .hypergraph import Hypergraph
from .plane import TruncatedPlane, build_affine_plane, truncate
from .spartite import PartiteLineGraph

FORMAT_VERSION = 1


class FormatError(ValueError):
    pass


class UnsupportedVersion(FormatError):
    pass


def dumps(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def to_dict(obj) -> dict[str, Any]:
    head = {"format_version": FORMAT_VERSION}
    if isinstance(obj, TruncatedPlane):
        return {**head, "kind": "truncated_plane", "q": obj.q, "removed_class": obj.removed_class}
    if isinstance(obj, Hypergraph):
        return {
            **head,
            "kind": "hypergraph",
            "q": obj.q,
            "removed_class": obj.base.removed_class,
            "keep_prob": obj.keep_prob,
            "seed": obj.seed,
            "kept": list(obj.kept),
        }
    if isinstance(obj, PartiteLineGraph):
        H = obj.H
        return {
            **head,
            "kind": "partite_graph",
            "q": H.q,
            "s": obj.s,
            "removed_class": H.base.removed_class,
            "keep_prob": H.keep_prob,
            "hypergraph_seed": H.seed,
            "partition_seed": obj.seed,
            "kept": list(H.kept),
            "labels": [list(obj.labels[lid]) for lid in H.kept],
        }
    if isinstance(obj, Graph):
        return {
            **head,
            "kind": "graph",
            "n": obj.n,
            "vertices": obj.vertices,
            "edges": [list(e) for e in obj.edges()],
        }
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _field(d: dict, name: str, kind: str):
    if name not in d:
        raise FormatError(f"{kind}: missing field '{name}'")
    return d[name]


def from_dict(d: dict):
    if not isinstance(d, dict):
        raise FormatError("top level must be a JSON object")
    version = _field(d, "format_version", "artifact")
    if version != FORMAT_VERSION:
        raise UnsupportedVersion(f"format_version {version!r} unsupported (expected {FORMAT_VERSION})")
    kind = _field(d, "kind", "artifact")
    try:
        if kind == "truncated_plane":
            return truncate(build_affine_plane(_field(d, "q", kind)), _field(d, "removed_class", kind))
        if kind in ("hypergraph", "partite_graph"):
            q = _field(d, "q", kind)
            tp = truncate(build_affine_plane(q), _field(d, "removed_class", kind))
            seed_key = "seed" if kind == "hypergraph" else "hypergraph_seed"
            H = Hypergraph(tp, tuple(_field(d, "kept", kind)), _field(d, "keep_prob", kind), _field(d, seed_key, kind))
            if kind == "hypergraph":
                return H
            labels = _field(d, "labels", kind)
            if len(labels) != len(H.kept):
                raise FormatError(f"{kind}: field 'labels' has {len(labels)} rows for {len(H.kept)} kept lines")
            return PartiteLineGraph(
                H,
                _field(d, "s", kind),
                _field(d, "partition_seed", kind),
                {lid: tuple(row) for lid, row in zip(H.kept, labels)},
            )
        if kind == "graph":
            g = Graph.from_edges(_field(d, "n", kind), [tuple(e) for e in _field(d, "edges", kind)])
            return g.induced(to_mask(_field(d, "vertices", kind)))
    except FormatError:
        raise
    except (TypeError, ValueError, KeyError) as exc:
        raise FormatError(f"{kind}: invalid content: {exc}") from exc
    raise FormatError(f"unknown kind {kind!r}")


def save(obj, path: str | Path) -> None:
    Path(path).write_text(dumps(to_dict(obj)))


def loads(text: str):
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return from_dict(d)


def load(path: str | Path):
    return loads(Path(path).read_text())
