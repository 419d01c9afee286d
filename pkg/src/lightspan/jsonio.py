"""JSON file formats for graphs, traces, trees, schemes and spanners."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .charging import ChargingScheme
from .decomposition import PathDecomposition, ReductionTrace
from .graph import EdgeSubgraph, WeightedGraph
from .monotone import RootedTree


class InputError(ValueError):
    """A file could not be parsed into the expected structure."""


def dumps(data: Any) -> str:
    return json.dumps(data, indent=1) + "\n"


def write(path: str | Path, data: Any) -> None:
    Path(path).write_text(dumps(data), encoding="utf-8")


def read(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def graph_to_dict(g: WeightedGraph, pd: PathDecomposition | None = None) -> dict:
    out: dict = {"n": g.n, "edges": [{"u": u, "v": v, "w": w} for u, v, w in g.edges]}
    if pd is not None:
        out["decomposition"] = {"bags": pd.to_lists()}
    return out


def graph_from_dict(data: dict) -> tuple[WeightedGraph, PathDecomposition | None]:
    try:
        g = WeightedGraph(int(data["n"]), [(e["u"], e["v"], e["w"]) for e in data["edges"]])
        pd = None
        if data.get("decomposition") is not None:
            pd = PathDecomposition(data["decomposition"]["bags"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed graph JSON: {exc!r}") from None
    return g, pd


def load_graph(path: str | Path) -> tuple[WeightedGraph, PathDecomposition | None]:
    return graph_from_dict(read(path))


def save_graph(path: str | Path, g: WeightedGraph, pd: PathDecomposition | None = None) -> None:
    write(path, graph_to_dict(g, pd))


def load_trace(path: str | Path) -> ReductionTrace:
    try:
        return ReductionTrace.from_dict(read(path))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed trace JSON: {exc!r}") from None


def load_tree(path: str | Path) -> RootedTree:
    try:
        return RootedTree.from_dict(read(path))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed tree JSON: {exc!r}") from None


def load_scheme(path: str | Path) -> ChargingScheme:
    try:
        return ChargingScheme.from_dict(read(path))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed scheme JSON: {exc!r}") from None


def spanner_to_dict(h: EdgeSubgraph, eps: float | None = None) -> dict:
    out: dict = {"edges": [list(p) for p in h.pairs()], "weight": h.weight()}
    if eps is not None:
        out["eps"] = eps
    return out


def load_spanner(path: str | Path, host: WeightedGraph) -> EdgeSubgraph:
    data = read(path)
    try:
        return EdgeSubgraph.from_pairs(host, [(int(u), int(v)) for u, v in data["edges"]])
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed spanner JSON: {exc!r}") from None
