"""Path decompositions, their interval layout, and the reductions that make a
bounded-pathwidth graph nice, bounded-degree and completed.

Every reduction returns enough information (a :class:`ReductionTrace`) to map
a spanner of the reduced graph back onto the input graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .graph import (
    EdgeSubgraph,
    GraphError,
    Pair,
    ValidationReport,
    WeightedGraph,
    lex_shortest_path,
    pair,
)


class DecompositionError(ValueError):
    pass


@dataclass(frozen=True)
class PathDecomposition:
    bags: tuple[frozenset[int], ...]

    def __init__(self, bags: Iterable[Iterable[int]]):
        object.__setattr__(self, "bags", tuple(frozenset(int(v) for v in b) for b in bags))

    def __len__(self) -> int:
        return len(self.bags)

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def vertices(self) -> set[int]:
        return set().union(*self.bags) if self.bags else set()

    def occurrences(self) -> dict[int, list[int]]:
        occ: dict[int, list[int]] = {}
        for i, bag in enumerate(self.bags):
            for v in bag:
                occ.setdefault(v, []).append(i)
        return occ

    def spans(self) -> dict[int, tuple[int, int]]:
        """First and last bag index of each vertex."""
        return {v: (ix[0], ix[-1]) for v, ix in self.occurrences().items()}

    def is_nice(self) -> bool:
        return all(len(a ^ b) == 1 for a, b in zip(self.bags, self.bags[1:]))

    def to_lists(self) -> list[list[int]]:
        return [sorted(b) for b in self.bags]


def validate_decomposition(g: WeightedGraph, pd: PathDecomposition) -> ValidationReport:
    errors = []
    occ = pd.occurrences()
    for v in range(g.n):
        if v not in occ:
            errors.append(f"vertex {v} is in no bag")
    for v in sorted(occ):
        if not 0 <= v < g.n:
            errors.append(f"bag vertex {v} is not a graph vertex")
            continue
        ix = occ[v]
        if ix[-1] - ix[0] + 1 != len(ix):
            errors.append(f"bags containing vertex {v} are not contiguous")
    spans = {v: s for v, s in pd.spans().items()}
    for u, v, _ in g.edges:
        if u not in spans or v not in spans:
            continue
        (a, b), (c, d) = spans[u], spans[v]
        if max(a, c) > min(b, d) or not any(u in pd.bags[i] and v in pd.bags[i] for i in range(max(a, c), min(b, d) + 1)):
            errors.append(f"edge {{{u},{v}}} is not covered by any bag")
    return ValidationReport(valid=not errors, errors=errors, width=pd.width)


def _require_valid(g: WeightedGraph, pd: PathDecomposition) -> None:
    report = validate_decomposition(g, pd)
    if not report.valid:
        raise DecompositionError("decomposition invalid: " + "; ".join(report.errors))


@dataclass(frozen=True)
class IntervalRepresentation:
    """Closed intervals with pairwise distinct rational endpoints.

    A vertex spanning bags ``i..j`` gets ``[i + r/(2N+2), j + 1 - r'/(2N+2)]``
    where ``r`` and ``r'`` are ranks of the vertex id.  Every vertex of bag
    ``i`` therefore contains the point ``i + 1/2``.
    """

    intervals: dict[int, tuple[Fraction, Fraction]]

    def left(self, v: int) -> Fraction:
        return self.intervals[v][0]

    def right(self, v: int) -> Fraction:
        return self.intervals[v][1]

    def overlap(self, u: int, v: int) -> bool:
        (a, b), (c, d) = self.intervals[u], self.intervals[v]
        return max(a, c) <= min(b, d)

    def contains(self, v: int, x: Fraction) -> bool:
        a, b = self.intervals[v]
        return a <= x <= b

    def leftmost(self, vertices: Iterable[int] | None = None) -> int:
        return min(self.intervals if vertices is None else vertices, key=self.left)

    def rightmost(self, vertices: Iterable[int] | None = None) -> int:
        return max(self.intervals if vertices is None else vertices, key=self.right)

    def max_overlap(self) -> int:
        events = []
        for a, b in self.intervals.values():
            events.append((a, 0))
            events.append((b, 1))
        best = cur = 0
        for _, kind in sorted(events):
            cur += 1 if kind == 0 else -1
            best = max(best, cur)
        return best


def to_intervals(pd: PathDecomposition) -> IntervalRepresentation:
    spans = pd.spans()
    order = sorted(spans)
    scale = 2 * (len(order) + 1)
    intervals = {}
    for rank, v in enumerate(order, start=1):
        i, j = spans[v]
        intervals[v] = (Fraction(i) + Fraction(rank, scale), Fraction(j + 1) - Fraction(rank, scale))
    return IntervalRepresentation(intervals)


def make_nice(g: WeightedGraph, pd: PathDecomposition) -> PathDecomposition:
    """Insert intermediate bags so consecutive bags differ by one vertex.

    Between two bags the departing vertices are removed first (in id order),
    then the arriving ones are inserted, so no bag grows.  Repeated identical
    bags are dropped.
    """
    _require_valid(g, pd)
    if not pd.bags:
        return pd
    out = [pd.bags[0]]
    for nxt in pd.bags[1:]:
        cur = out[-1]
        for v in sorted(cur - nxt):
            cur = cur - {v}
            out.append(cur)
        for v in sorted(nxt - cur):
            cur = cur | {v}
            out.append(cur)
    return PathDecomposition(out)


@dataclass
class ReductionTrace:
    """What is needed to lift a spanner of a reduced graph back to its source.

    ``copy_map`` sends every replacer copy to the original vertex it stands
    for, ``zero_edges`` is the set of weight-zero copy edges, and
    ``completion_edges`` maps each added edge to the shortest path (in the
    graph before completion) it replaces.
    """

    copy_map: dict[int, int] = field(default_factory=dict)
    zero_edges: list[Pair] = field(default_factory=list)
    completion_edges: dict[Pair, list[int]] = field(default_factory=dict)

    def merged(self, other: ReductionTrace) -> ReductionTrace:
        return ReductionTrace(
            copy_map={**self.copy_map, **other.copy_map},
            zero_edges=[*self.zero_edges, *other.zero_edges],
            completion_edges={**self.completion_edges, **other.completion_edges},
        )

    def original(self, v: int) -> int:
        return self.copy_map.get(v, v)

    def to_dict(self) -> dict:
        return {
            "copy_map": [[c, o] for c, o in sorted(self.copy_map.items())],
            "zero_edges": [list(e) for e in self.zero_edges],
            "completion_edges": [
                {"u": u, "v": v, "path": list(p)} for (u, v), p in sorted(self.completion_edges.items())
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> ReductionTrace:
        return cls(
            copy_map={int(c): int(o) for c, o in data.get("copy_map", [])},
            zero_edges=[pair(int(u), int(v)) for u, v in data.get("zero_edges", [])],
            completion_edges={
                pair(int(e["u"]), int(e["v"])): [int(x) for x in e["path"]]
                for e in data.get("completion_edges", [])
            },
        )


def bound_degree(g: WeightedGraph, pd: PathDecomposition) -> tuple[WeightedGraph, PathDecomposition, ReductionTrace]:
    """Replace vertices by fresh copies after every group of ``width`` bags.

    After original bag ``B`` closes a group, each ``v`` in ``B`` (by id) is
    swapped for a copy ``v'``: one bag adds ``v'`` next to ``v``, the next one
    drops ``v``.  The pair ``{v, v'}`` becomes a weight-zero edge and later
    bags use ``v'``.  This keeps the output nice at the cost of one extra unit
    of width.  Copies get ids ``n, n+1, ...`` in creation order.
    """
    _require_valid(g, pd)
    if not pd.is_nice():
        raise DecompositionError("decomposition is not nice")
    group = max(pd.width, 1)
    name = {v: v for v in range(g.n)}
    origin: dict[int, int] = {}
    zero_edges: list[Pair] = []
    out_bags: list[frozenset[int]] = []
    edge_home: dict[Pair, Pair] = {}
    next_id = g.n

    spans = pd.spans()
    by_bag: dict[int, list[Pair]] = {}
    for u, v, _ in g.edges:
        by_bag.setdefault(max(spans[u][0], spans[v][0]), []).append((u, v))
    last = len(pd.bags) - 1
    for i, bag in enumerate(pd.bags):
        cur = frozenset(name[v] for v in bag)
        out_bags.append(cur)
        for u, v in by_bag.get(i, ()):
            edge_home[(u, v)] = pair(name[u], name[v])
        if (i + 1) % group or i == last:
            continue
        for v in sorted(bag):
            old, new = name[v], next_id
            next_id += 1
            origin[new] = v
            zero_edges.append((old, new))
            cur = cur | {new}
            out_bags.append(cur)
            cur = cur - {old}
            out_bags.append(cur)
            name[v] = new

    edges = [(*edge_home[(u, v)], w) for u, v, w in g.edges]
    edges += [(a, b, 0.0) for a, b in zero_edges]
    out = WeightedGraph(next_id, edges)
    trace = ReductionTrace(copy_map=origin, zero_edges=zero_edges)
    return out, PathDecomposition(out_bags), trace


def complete(g: WeightedGraph, pd: PathDecomposition) -> tuple[WeightedGraph, ReductionTrace]:
    """Add every edge allowed by a shared bag, weighted by graph distance.

    Each added edge records the lexicographically least shortest path of the
    input graph between its endpoints.
    """
    _require_valid(g, pd)
    missing = set()
    for bag in pd.bags:
        members = sorted(bag)
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                p = (members[a], members[b])
                if p not in g.edge_index:
                    missing.add(p)
    added = []
    paths: dict[Pair, list[int]] = {}
    for u, v in sorted(missing):
        length, path = lex_shortest_path(g, u, v)
        added.append((u, v, length))
        paths[(u, v)] = path
    return g.with_edges(added), ReductionTrace(completion_edges=paths)


@dataclass
class Reduction:
    graph: WeightedGraph
    decomposition: PathDecomposition
    trace: ReductionTrace
    nice: PathDecomposition
    bounded: WeightedGraph


def reduce(g: WeightedGraph, pd: PathDecomposition) -> Reduction:
    """Nice decomposition, then bounded degree, then completion."""
    g.require_valid()
    nice = make_nice(g, pd)
    bounded, pd2, t1 = bound_degree(g, nice)
    completed, t2 = complete(bounded, pd2)
    return Reduction(completed, pd2, t1.merged(t2), nice, bounded)


def contract(g: WeightedGraph, trace: ReductionTrace, n: int) -> set[tuple[int, int, float]]:
    """Merge copies into their originals and drop the zero edges ``S``."""
    zero = set(trace.zero_edges)
    out = set()
    for u, v, w in g.edges:
        if (u, v) in zero:
            continue
        a, b = trace.original(u), trace.original(v)
        if not (0 <= a < n and 0 <= b < n):
            raise GraphError("copy map does not reach an original vertex")
        out.add((*pair(a, b), w))
    return out


def lift_spanner(spanner: EdgeSubgraph, trace: ReductionTrace, original: WeightedGraph) -> EdgeSubgraph:
    """Map a spanner of the reduced graph onto ``original``.

    Completion edges expand to their recorded paths, then copies are
    contracted into their originals; contracted zero edges disappear.
    """
    pairs: set[Pair] = set()
    for u, v in spanner.pairs():
        path = trace.completion_edges.get((u, v))
        if path is None:
            pairs.add((u, v))
        else:
            if pair(path[0], path[-1]) != (u, v):
                raise GraphError(f"trace path for {{{u},{v}}} has wrong endpoints")
            pairs.update(pair(a, b) for a, b in zip(path, path[1:]))
    lifted = set()
    for u, v in pairs:
        a, b = trace.original(u), trace.original(v)
        if a != b:
            lifted.add(pair(a, b))
    try:
        return EdgeSubgraph.from_pairs(original, lifted)
    except GraphError as exc:
        raise GraphError(f"trace does not match the original graph: {exc}") from None


def bag_pairs(bags: Sequence[Iterable[int]]) -> set[Pair]:
    out = set()
    for bag in bags:
        members = sorted(bag)
        out.update((members[a], members[b]) for a in range(len(members)) for b in range(a + 1, len(members)))
    return out
