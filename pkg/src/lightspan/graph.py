"""Weighted undirected graphs, minimum spanning trees and shortest paths."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

Pair = tuple[int, int]

REL_TOL = 1e-9


class GraphError(ValueError):
    """Raised when a graph violates an invariant an algorithm depends on."""


def pair(u: int, v: int) -> Pair:
    return (u, v) if u < v else (v, u)


def close(a: float, b: float, rel: float = REL_TOL) -> bool:
    return math.isclose(a, b, rel_tol=rel, abs_tol=rel)


def leq(a: float, b: float, rel: float = REL_TOL) -> bool:
    """``a <= b`` up to relative slack ``rel``."""
    return a <= b + rel * max(abs(a), abs(b), 1.0)


@dataclass
class ValidationReport:
    valid: bool
    errors: list[str] = field(default_factory=list)
    connected: bool | None = None
    width: int | None = None

    def to_dict(self) -> dict:
        out: dict = {"valid": self.valid, "errors": list(self.errors)}
        if self.connected is not None:
            out["connected"] = self.connected
        if self.width is not None:
            out["width"] = self.width
        return out


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """An undirected graph on vertices ``0..n-1``.

    Edges are stored as ``(u, v, w)`` with ``u < v``; the position of an edge
    in :attr:`edges` is its index.  Construction does not reject bad input so
    that :func:`validate` can report on it; algorithms call
    :meth:`require_valid` instead.
    """

    n: int
    edges: tuple[tuple[int, int, float], ...]

    def __init__(self, n: int, edges: Iterable[Sequence]):
        norm = []
        for e in edges:
            u, v, w = int(e[0]), int(e[1]), float(e[2])
            if u > v:
                u, v = v, u
            norm.append((u, v, w))
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", tuple(norm))

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self.n}, m={len(self.edges)})"

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_index(self) -> dict[Pair, int]:
        return {(u, v): i for i, (u, v, _) in enumerate(self.edges)}

    @cached_property
    def adjacency(self) -> list[list[tuple[int, float, int]]]:
        """``adjacency[u]`` lists ``(neighbour, weight, edge index)``."""
        adj: list[list[tuple[int, float, int]]] = [[] for _ in range(self.n)]
        for i, (u, v, w) in enumerate(self.edges):
            adj[u].append((v, w, i))
            adj[v].append((u, w, i))
        return adj

    def has_edge(self, u: int, v: int) -> bool:
        return pair(u, v) in self.edge_index

    def weight(self, u: int, v: int) -> float:
        return self.edges[self.edge_index[pair(u, v)]][2]

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    def total_weight(self) -> float:
        return math.fsum(w for _, _, w in self.edges)

    def path_weight(self, path: Sequence[int]) -> float:
        return sum(self.weight(a, b) for a, b in zip(path, path[1:]))

    def with_edges(self, extra: Iterable[tuple[int, int, float]]) -> WeightedGraph:
        return WeightedGraph(self.n, [*self.edges, *extra])

    def without_edge(self, u: int, v: int) -> WeightedGraph:
        key = pair(u, v)
        return WeightedGraph(self.n, [e for e in self.edges if (e[0], e[1]) != key])

    def require_valid(self) -> None:
        report = validate(self)
        if not report.valid:
            raise GraphError("; ".join(report.errors))


def validate(g: WeightedGraph) -> ValidationReport:
    errors = []
    seen: set[Pair] = set()
    for i, (u, v, w) in enumerate(g.edges):
        if not (0 <= u < g.n and 0 <= v < g.n):
            errors.append(f"edge {i} has endpoint outside 0..{g.n - 1}")
            continue
        if u == v:
            errors.append(f"edge {i} is a self-loop at {u}")
        if (u, v) in seen:
            errors.append(f"edge {i} duplicates {{{u},{v}}}")
        seen.add((u, v))
        if not math.isfinite(w):
            errors.append(f"edge {i} has non-finite weight")
        elif w < 0:
            errors.append(f"edge {i} has negative weight {w}")
    connected = _is_connected(g.n, [(u, v) for u, v, _ in g.edges if 0 <= u < g.n and 0 <= v < g.n])
    if not connected:
        errors.append("graph is disconnected")
    return ValidationReport(valid=not errors, errors=errors, connected=connected)


def _is_connected(n: int, pairs: Iterable[Pair]) -> bool:
    if n <= 1:
        return True
    dsu = DisjointSet(n)
    comps = n
    for u, v in pairs:
        if dsu.union(u, v):
            comps -= 1
    return comps == 1


class DisjointSet:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True


@dataclass(frozen=True, eq=False)
class EdgeSubgraph:
    """A subset of a host graph's edges, identified by edge index."""

    host: WeightedGraph
    edge_ids: frozenset[int]

    def __init__(self, host: WeightedGraph, edge_ids: Iterable[int]):
        ids = frozenset(int(i) for i in edge_ids)
        if any(not 0 <= i < host.m for i in ids):
            raise GraphError("edge subgraph refers to an edge not in the host graph")
        object.__setattr__(self, "host", host)
        object.__setattr__(self, "edge_ids", ids)

    @classmethod
    def from_pairs(cls, host: WeightedGraph, pairs: Iterable[Pair]) -> EdgeSubgraph:
        try:
            return cls(host, (host.edge_index[pair(u, v)] for u, v in pairs))
        except KeyError as exc:
            raise GraphError(f"edge {exc.args[0]} is not in the host graph") from None

    def __len__(self) -> int:
        return len(self.edge_ids)

    def __contains__(self, key: Pair) -> bool:
        i = self.host.edge_index.get(pair(*key))
        return i is not None and i in self.edge_ids

    def pairs(self) -> list[Pair]:
        return sorted(self.host.edges[i][:2] for i in self.edge_ids)

    def weight(self) -> float:
        return math.fsum(self.host.edges[i][2] for i in self.edge_ids)

    def as_graph(self) -> WeightedGraph:
        return WeightedGraph(self.host.n, [self.host.edges[i] for i in sorted(self.edge_ids)])

    def is_spanning(self) -> bool:
        return _is_connected(self.host.n, (self.host.edges[i][:2] for i in self.edge_ids))


def scan_order(g: WeightedGraph, ids: Iterable[int] | None = None) -> list[int]:
    """Edge indices sorted by ``(weight, u, v)``."""
    ids = range(g.m) if ids is None else ids
    return sorted(ids, key=lambda i: (g.edges[i][2], g.edges[i][0], g.edges[i][1]))


def mst(g: WeightedGraph) -> EdgeSubgraph:
    """Kruskal's algorithm; ties are broken by ``(weight, u, v)``."""
    dsu = DisjointSet(g.n)
    chosen = []
    for i in scan_order(g):
        u, v, _ = g.edges[i]
        if dsu.union(u, v):
            chosen.append(i)
    if len(chosen) != max(g.n - 1, 0):
        raise GraphError("graph is disconnected")
    return EdgeSubgraph(g, chosen)


def mst_weight(g: WeightedGraph) -> float:
    return mst(g).weight()


def apsp(g: WeightedGraph) -> np.ndarray:
    """All-pairs shortest path lengths by Floyd-Warshall."""
    d = np.full((g.n, g.n), np.inf)
    np.fill_diagonal(d, 0.0)
    for u, v, w in g.edges:
        if w < d[u, v]:
            d[u, v] = d[v, u] = w
    for k in range(g.n):
        np.minimum(d, d[:, k, None] + d[None, k, :], out=d)
    return d


def dijkstra(
    adjacency: Sequence[Iterable[tuple[int, float, int]]] | dict,
    source: int,
    target: int | None = None,
    cap: float = math.inf,
) -> dict[int, float]:
    """Single-source shortest paths.

    Stops early once ``target`` is settled.  Distances above ``cap`` are never
    recorded, so a missing target means its distance exceeds ``cap``.
    """
    dist = {source: 0.0}
    done: set[int] = set()
    heap = [(0.0, source)]
    while heap:
        d, x = heapq.heappop(heap)
        if x in done:
            continue
        done.add(x)
        if x == target:
            break
        for y, w, *_ in adjacency[x]:
            nd = d + w
            if nd <= cap and nd < dist.get(y, math.inf):
                dist[y] = nd
                heapq.heappush(heap, (nd, y))
    return dist


def lex_shortest_path(g: WeightedGraph, source: int, target: int) -> tuple[float, list[int]]:
    """Shortest path minimising ``(length, vertex sequence)`` lexicographically."""
    best: dict[int, tuple[float, tuple[int, ...]]] = {source: (0.0, (source,))}
    done: set[int] = set()
    heap = [(0.0, (source,))]
    while heap:
        d, path = heapq.heappop(heap)
        x = path[-1]
        if x in done:
            continue
        done.add(x)
        if x == target:
            return d, list(path)
        for y, w, _ in g.adjacency[x]:
            if y in done:
                continue
            label = (d + w, path + (y,))
            if y not in best or label < best[y]:
                best[y] = label
                heapq.heappush(heap, label)
    raise GraphError(f"no path from {source} to {target}")
