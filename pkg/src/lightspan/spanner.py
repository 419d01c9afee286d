"""Greedy spanners with a forced tree, stretch certification and the full
reduce / tree / scheme / greedy / lift pipeline."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .charging import ChargingScheme, build_scheme, verify_scheme
from .decomposition import (
    PathDecomposition,
    Reduction,
    lift_spanner,
    reduce,
    to_intervals,
    validate_decomposition,
)
from .graph import EdgeSubgraph, GraphError, WeightedGraph, apsp, dijkstra, leq, mst_weight, scan_order
from .monotone import RootedTree, is_monotone, lightest_monotone_tree, monotone_tree_recursive

log = logging.getLogger(__name__)

TREE_MODES = ("lightest", "lemma2")


def greedy_spanner(g: WeightedGraph, t: RootedTree | None, eps: float) -> EdgeSubgraph:
    """Greedy ``(1+eps)``-spanner that starts from the edges of ``t``.

    Remaining edges are scanned by ``(weight, u, v)`` and an edge is kept
    only if ``(1+eps) * w(e)`` is strictly less than the current distance
    between its endpoints.  With ``t`` None nothing is forced.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    chosen: set[int] = set()
    if t is not None:
        tree = t.subgraph(g)
        if len(tree) != g.n - 1 or not tree.is_spanning():
            raise GraphError("forced tree does not span the graph")
        chosen |= tree.edge_ids
    adj: list[list[tuple[int, float]]] = [[] for _ in range(g.n)]
    for i in chosen:
        u, v, w = g.edges[i]
        adj[u].append((v, w))
        adj[v].append((u, w))
    for i in scan_order(g, (i for i in range(g.m) if i not in chosen)):
        u, v, w = g.edges[i]
        cap = (1 + eps) * w
        if v in dijkstra(adj, u, v, cap=cap):
            continue
        chosen.add(i)
        adj[u].append((v, w))
        adj[v].append((u, w))
    return EdgeSubgraph(g, chosen)


def _stretch(dg: np.ndarray, dh: np.ndarray, mask: np.ndarray | None = None) -> float:
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(dg > 0, dh / np.where(dg > 0, dg, 1.0), np.where(dh > 0, np.inf, 1.0))
    if mask is not None:
        ratio = ratio[mask]
    return float(ratio.max()) if ratio.size else 1.0


def verify_stretch(g: WeightedGraph, h: EdgeSubgraph, eps: float | None = None, edges_only: bool = False) -> float:
    """Largest ``d_H(u,v) / d_G(u,v)`` over all pairs (or over edges of ``g``).

    Pairs at distance zero count as stretch 1 when ``H`` also joins them at
    zero cost.  With ``eps`` given, a stretch above ``1+eps`` (up to relative
    slack ``1e-9``) raises :class:`StretchError`.
    """
    if h.host is not g:
        h = EdgeSubgraph.from_pairs(g, h.pairs())
    if not h.is_spanning():
        raise GraphError("subgraph does not span the graph")
    dg = apsp(g)
    dh = apsp(h.as_graph())
    mask = None
    if edges_only:
        mask = np.zeros((g.n, g.n), dtype=bool)
        for u, v, _ in g.edges:
            mask[u, v] = True
        np.fill_diagonal(mask, True)
    worst = _stretch(dg, dh, mask)
    if eps is not None and not leq(worst, 1 + eps):
        raise StretchError(f"stretch {worst} exceeds 1+eps = {1 + eps}")
    return worst


class StretchError(AssertionError):
    pass


@dataclass
class SpannerResult:
    spanner: EdgeSubgraph
    eps: float
    tree: RootedTree
    max_stretch: float
    weight: float
    tree_weight: float
    mst_weight: float
    scheme_v: Fraction

    @property
    def ratio(self) -> float:
        return self.weight / self.mst_weight if self.mst_weight > 0 else 1.0

    @property
    def bound(self) -> float:
        return (1 + float(self.scheme_v) / self.eps) * self.tree_weight


@dataclass
class PipelineResult:
    """Everything produced by one pipeline run; ``checks`` holds the certificates."""

    original: WeightedGraph
    width: int
    reduction: Reduction
    tree: RootedTree
    scheme: ChargingScheme
    scheme_v: Fraction
    result: SpannerResult
    lifted: EdgeSubgraph
    lifted_stretch: float
    mst_weight: float
    checks: dict[str, bool] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    @property
    def tree_ratio(self) -> float:
        return self.tree.weight / self.mst_weight if self.mst_weight > 0 else 1.0

    @property
    def spanner_ratio(self) -> float:
        return self.result.ratio

    def to_dict(self) -> dict:
        r = self.result
        return {
            "n": self.original.n,
            "k": self.width,
            "eps": r.eps,
            "reduced_n": self.reduction.graph.n,
            "reduced_m": self.reduction.graph.m,
            "mst_weight": self.mst_weight,
            "tree_weight": self.tree.weight,
            "tree_ratio": self.tree_ratio,
            "scheme_v": [self.scheme_v.numerator, self.scheme_v.denominator],
            "spanner_weight": r.weight,
            "spanner_ratio": r.ratio,
            "weight_bound": r.bound,
            "reduced_max_stretch": r.max_stretch,
            "max_stretch": self.lifted_stretch,
            "lifted_weight": self.lifted.weight(),
            "lifted_edges": [list(p) for p in self.lifted.pairs()],
            "checks": dict(sorted(self.checks.items())),
            "failures": list(self.failures),
        }


def build_tree(g: WeightedGraph, pd: PathDecomposition, mode: str = "lightest") -> RootedTree:
    if mode == "lightest":
        return lightest_monotone_tree(g, pd)
    if mode == "lemma2":
        return monotone_tree_recursive(g, to_intervals(pd))
    raise ValueError(f"unknown tree mode {mode!r}")


@dataclass
class Prepared:
    """The epsilon-independent part of a pipeline run."""

    original: WeightedGraph
    width: int
    reduction: Reduction
    tree: RootedTree
    scheme: ChargingScheme
    scheme_v: Fraction
    mst_weight: float
    checks: dict[str, bool]
    failures: list[str]


def prepare(g: WeightedGraph, pd: PathDecomposition, tree_mode: str = "lightest") -> Prepared:
    g.require_valid()
    report = validate_decomposition(g, pd)
    if not report.valid:
        raise GraphError("decomposition invalid: " + "; ".join(report.errors))
    red = reduce(g, pd)
    tree = build_tree(red.graph, red.decomposition, tree_mode)
    iv = to_intervals(red.decomposition)
    checks, failures = {}, []

    def check(name: str, ok: bool, msg: str) -> None:
        checks[name] = bool(ok)
        if not ok:
            failures.append(f"{name}: {msg}")

    check("tree_monotone", is_monotone(tree, iv), "tree is not a monotone spanning tree")
    scheme, v = build_scheme(red.graph, tree, iv)
    report = verify_scheme(red.graph, tree, scheme, acyclic=True)
    check("scheme_conditions", report.ok, "; ".join(report.violations[:3]))
    check("scheme_v_degree", v <= 2 * red.graph.max_degree(), f"v = {v} exceeds 2 * maxdeg")
    return Prepared(g, pd.width, red, tree, scheme, v, mst_weight(g), checks, failures)


def run_eps(prep: Prepared, eps: float, force_tree: bool = True) -> PipelineResult:
    red = prep.reduction
    checks, failures = dict(prep.checks), list(prep.failures)

    def check(name: str, ok: bool, msg: str) -> None:
        checks[name] = bool(ok)
        if not ok:
            failures.append(f"{name}: {msg}")

    sp = greedy_spanner(red.graph, prep.tree if force_tree else None, eps)
    reduced_stretch = verify_stretch(red.graph, sp)
    weight = sp.weight()
    result = SpannerResult(sp, eps, prep.tree, reduced_stretch, weight, prep.tree.weight, prep.mst_weight, prep.scheme_v)
    check("reduced_stretch", leq(reduced_stretch, 1 + eps), f"stretch {reduced_stretch} > {1 + eps}")
    if force_tree:
        check("tree_in_spanner", prep.tree.edge_set() <= set(sp.pairs()), "forced tree edge missing")
        check("weight_bound", leq(weight, result.bound), f"w(G') = {weight} > {result.bound}")
    lifted = lift_spanner(sp, red.trace, prep.original)
    lifted_stretch = verify_stretch(prep.original, lifted)
    check("lifted_stretch", leq(lifted_stretch, 1 + eps), f"lifted stretch {lifted_stretch} > {1 + eps}")
    check("lift_weight", leq(lifted.weight(), weight), "lifting increased the weight")
    check("lift_spanning", lifted.is_spanning(), "lifted spanner does not span")
    out = PipelineResult(
        prep.original,
        prep.width,
        red,
        prep.tree,
        prep.scheme,
        prep.scheme_v,
        result,
        lifted,
        lifted_stretch,
        prep.mst_weight,
        checks,
        failures,
    )
    if failures:
        log.warning("pipeline certification failed: %s", "; ".join(failures))
    return out


def pipeline(
    g: WeightedGraph,
    pd: PathDecomposition,
    eps: float,
    tree_mode: str = "lightest",
    force_tree: bool = True,
) -> PipelineResult:
    """Reduce, build a monotone tree and its scheme, run the greedy, lift back.

    Every certificate (tree monotonicity, scheme conditions, weight bound,
    stretch before and after lifting) is recorded in ``checks``.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    return run_eps(prepare(g, pd, tree_mode), eps, force_tree)

