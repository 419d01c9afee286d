"""Monotone spanning trees of interval graphs.

A rooted tree is monotone when every parent's interval starts strictly to the
left of its child's.  Two constructions are provided: the recursive
shortest-path construction whose weight is ``O(k^2)`` times the MST, and the
lightest monotone tree, found by a single left-to-right scan.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable

from .decomposition import IntervalRepresentation, PathDecomposition, to_intervals
from .graph import DisjointSet, EdgeSubgraph, WeightedGraph, close, dijkstra, pair, scan_order


class MonotoneError(ValueError):
    pass


@dataclass
class RootedTree:
    """A spanning tree given by parent pointers; ``parent[root]`` is None."""

    root: int
    parent: list[int | None]
    weight: float = 0.0
    notes: list[str] = field(default_factory=list)

    @classmethod
    def from_parents(cls, g: WeightedGraph, root: int, parent: list[int | None]) -> RootedTree:
        tree = cls(root, list(parent))
        tree.weight = math.fsum(g.weight(v, p) for v, p in enumerate(parent) if p is not None)
        return tree

    @property
    def n(self) -> int:
        return len(self.parent)

    def edges(self) -> list[tuple[int, int]]:
        return sorted(pair(v, p) for v, p in enumerate(self.parent) if p is not None)

    def edge_set(self) -> set[tuple[int, int]]:
        return set(self.edges())

    def subgraph(self, g: WeightedGraph) -> EdgeSubgraph:
        return EdgeSubgraph.from_pairs(g, self.edges())

    def is_spanning_tree(self) -> bool:
        if not 0 <= self.root < self.n or self.parent[self.root] is not None:
            return False
        edges = [(v, p) for v, p in enumerate(self.parent) if p is not None]
        if len(edges) != self.n - 1:
            return False
        dsu = DisjointSet(self.n)
        return all(0 <= p < self.n and dsu.union(v, p) for v, p in edges)

    def to_dict(self) -> dict:
        return {"root": self.root, "parent": list(self.parent), "weight": self.weight}

    @classmethod
    def from_dict(cls, data: dict) -> RootedTree:
        parent = [None if p is None else int(p) for p in data["parent"]]
        return cls(int(data["root"]), parent, float(data.get("weight", 0.0)))


def is_monotone(t: RootedTree, iv: IntervalRepresentation) -> bool:
    if not t.is_spanning_tree():
        return False
    return all(p is None or iv.left(p) < iv.left(v) for v, p in enumerate(t.parent))


def lightest_monotone_tree(g: WeightedGraph, pd: PathDecomposition) -> RootedTree:
    """Grow the tree bag by bag from the leftmost vertex.

    A vertex introduced by bag ``B`` is attached to its lightest neighbour in
    ``B`` that is already in the tree (ties by vertex id).  Parent choices do
    not interact, so the result is the minimum-weight monotone tree.
    """
    iv = to_intervals(pd)
    in_tree: set[int] = set()
    parent: list[int | None] = [None] * g.n
    root = iv.leftmost()
    prev: frozenset[int] = frozenset()
    for bag in pd.bags:
        for v in sorted(bag - prev, key=iv.left):
            if not in_tree:
                in_tree.add(v)
                continue
            best = None
            for u, w, _ in g.adjacency[v]:
                if u in bag and u in in_tree and (best is None or (w, u) < best):
                    best = (w, u)
            if best is None:
                raise MonotoneError(f"vertex {v} has no neighbour already in the tree")
            parent[v] = best[1]
            in_tree.add(v)
        prev = bag
    if len(in_tree) != g.n:
        raise MonotoneError("decomposition does not cover every vertex")
    return RootedTree.from_parents(g, root, parent)


def brute_force_lightest_monotone(g: WeightedGraph, iv: IntervalRepresentation) -> float:
    """Minimum monotone tree weight by enumerating every parent assignment."""
    root = iv.leftmost()
    others = [v for v in range(g.n) if v != root]
    choices = []
    for v in others:
        opts = [w for u, w, _ in g.adjacency[v] if iv.left(u) < iv.left(v)]
        if not opts:
            return math.inf
        choices.append(opts)
    return min((math.fsum(combo) for combo in itertools.product(*choices)), default=0.0)


def monotone_shortest_path(
    g: WeightedGraph, iv: IntervalRepresentation, source: int, target: int, allowed: set[int]
) -> list[int]:
    """Shortest path whose left endpoints strictly increase along the way."""
    order = sorted((v for v in allowed if iv.left(source) <= iv.left(v) <= iv.left(target)), key=iv.left)
    dist = {source: 0.0}
    back: dict[int, int] = {}
    for x in order:
        if x not in dist:
            continue
        for y, w, _ in g.adjacency[x]:
            if y in allowed and iv.left(x) < iv.left(y) <= iv.left(target):
                nd = dist[x] + w
                if nd < dist.get(y, math.inf) or (nd == dist[y] and x < back[y]):
                    dist[y] = nd
                    back[y] = x
    if target not in dist:
        raise MonotoneError(f"no monotone path from {source} to {target}")
    path = [target]
    while path[-1] != source:
        path.append(back[path[-1]])
    return path[::-1]


def monotone_tree_recursive(g: WeightedGraph, iv: IntervalRepresentation) -> RootedTree:
    """Recursive construction: a monotone shortest spine plus hanging subtrees.

    The spine runs from the leftmost to the rightmost interval.  Each
    component of ``MST - spine`` is spanned recursively and hung from its
    leftmost vertex onto the lightest spine vertex whose interval contains
    that vertex's left endpoint.
    """
    parent: list[int | None] = [None] * g.n
    notes: list[str] = []
    vertices = set(range(g.n))
    root = iv.leftmost(vertices)
    _recurse(g, iv, vertices, parent, notes)
    tree = RootedTree.from_parents(g, root, parent)
    tree.notes = notes
    return tree


def _induced_mst(g: WeightedGraph, vertices: set[int]) -> list[tuple[int, int]]:
    dsu = DisjointSet(g.n)
    chosen = []
    for i in scan_order(g, (i for i, e in enumerate(g.edges) if e[0] in vertices and e[1] in vertices)):
        u, v, _ = g.edges[i]
        if dsu.union(u, v):
            chosen.append((u, v))
    return chosen


def _components(vertices: Iterable[int], edges: Iterable[tuple[int, int]]) -> list[list[int]]:
    vertices = list(vertices)
    adj: dict[int, list[int]] = {v: [] for v in vertices}
    for u, v in edges:
        if u in adj and v in adj:
            adj[u].append(v)
            adj[v].append(u)
    seen: set[int] = set()
    comps = []
    for s in sorted(vertices):
        if s in seen:
            continue
        stack, comp = [s], []
        seen.add(s)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        comps.append(sorted(comp))
    return comps


def _recurse(g: WeightedGraph, iv: IntervalRepresentation, vertices: set[int], parent, notes) -> None:
    if len(vertices) == 1:
        return
    sub_edges = [(u, v) for u, v, _ in g.edges if u in vertices and v in vertices]
    comps = _components(vertices, sub_edges)
    if len(comps) > 1:
        notes.append(f"induced subgraph on {len(vertices)} vertices split into {len(comps)} components")
        for comp in comps:
            _recurse(g, iv, set(comp), parent, notes)
        return
    left, right = iv.leftmost(vertices), iv.rightmost(vertices)
    spine = monotone_shortest_path(g, iv, left, right, vertices)
    adj = {v: [(u, w, i) for u, w, i in g.adjacency[v] if u in vertices] for v in vertices}
    plain = dijkstra(adj, left, right).get(right, math.inf)
    spine_len = g.path_weight(spine)
    if not close(spine_len, plain):
        notes.append(f"monotone spine {left}->{right} has length {spine_len}, shortest path {plain}")
    for a, b in zip(spine, spine[1:]):
        parent[b] = a
    on_spine = set(spine)
    tree_edges = _induced_mst(g, vertices)
    for comp in _components(vertices - on_spine, tree_edges):
        c = iv.leftmost(comp)
        x = iv.left(c)
        best = None
        for u, w, _ in g.adjacency[c]:
            if u in on_spine and iv.contains(u, x) and (best is None or (w, u) < best):
                best = (w, u)
        if best is None:
            raise MonotoneError(f"no spine vertex covers the left end of vertex {c}; graph not completed?")
        _recurse(g, iv, set(comp), parent, notes)
        parent[c] = best[1]
