"""Seeded random bounded-pathwidth instances and the lower-bound family on
which every monotone tree of a tree decomposition is heavy."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .decomposition import PathDecomposition
from .graph import WeightedGraph, mst_weight, pair

WEIGHT_MODES = ("uniform", "integer", "unit")
WINDOW_MODES = ("sliding", "random")


@dataclass(frozen=True)
class GenSpec:
    """Parameters of a random instance.

    ``m`` full bags of ``k+1`` vertices are chained, each followed by a bag
    with one vertex dropped (the oldest for ``window="sliding"``, a random
    one otherwise), so the decomposition is nice and has ``m + k`` vertices.
    """

    k: int
    m: int
    seed: int = 0
    weights: str = "uniform"
    max_weight: int = 10
    density: float = 0.5
    window: str = "sliding"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("width k must be at least 1")
        if self.m < 1:
            raise ValueError("bag count m must be at least 1")
        if not 0 < self.density <= 1:
            raise ValueError("density must lie in (0, 1]")
        if self.weights not in WEIGHT_MODES:
            raise ValueError(f"weights must be one of {WEIGHT_MODES}")
        if self.window not in WINDOW_MODES:
            raise ValueError(f"window must be one of {WINDOW_MODES}")
        if self.max_weight < 1:
            raise ValueError("max_weight must be at least 1")


def _weight(rng: random.Random, spec: GenSpec) -> float:
    if spec.weights == "uniform":
        return rng.random()
    if spec.weights == "integer":
        return float(rng.randint(1, spec.max_weight))
    return 1.0


def gen_random(spec: GenSpec) -> tuple[WeightedGraph, PathDecomposition]:
    rng = random.Random(spec.seed)
    bag = list(range(spec.k + 1))
    bags = [frozenset(bag)]
    edges: set[tuple[int, int]] = set()
    for a in range(len(bag)):
        if a:
            edges.add((bag[a - 1], bag[a]))
        for b in range(a + 1, len(bag)):
            if rng.random() < spec.density:
                edges.add((bag[a], bag[b]))
    nxt = spec.k + 1
    for _ in range(spec.m - 1):
        drop = 0 if spec.window == "sliding" else rng.randrange(len(bag))
        bag.pop(drop)
        bags.append(frozenset(bag))
        anchor = bag[-1] if spec.window == "sliding" else bag[rng.randrange(len(bag))]
        edges.add(pair(anchor, nxt))
        for u in bag:
            if rng.random() < spec.density:
                edges.add(pair(u, nxt))
        bag.append(nxt)
        bags.append(frozenset(bag))
        nxt += 1
    weighted = [(u, v, _weight(rng, spec)) for u, v in sorted(edges)]
    return WeightedGraph(nxt, weighted), PathDecomposition(bags)


def corpus(count: int, seed: int = 0, max_k: int = 5, max_n: int = 60) -> list[tuple[str, GenSpec]]:
    """A deterministic mix of instance specs covering every weight and window mode."""
    rng = random.Random(seed)
    specs = []
    for idx in range(count):
        k = 1 + idx % max_k
        m = rng.randint(2, max_n - k)
        specs.append(
            (
                f"rand-{idx:03d}",
                GenSpec(
                    k=k,
                    m=m,
                    seed=rng.randrange(2**31),
                    weights=WEIGHT_MODES[idx % 3],
                    max_weight=rng.choice([3, 10, 100]),
                    density=rng.choice([0.3, 0.6, 1.0]),
                    window=WINDOW_MODES[(idx // 3) % 2],
                ),
            )
        )
    return specs


@dataclass
class TreeDecomposition:
    """Bags indexed by node; ``parent[root]`` is None."""

    bags: dict[int, frozenset[int]]
    parent: dict[int, int | None]

    @property
    def root(self) -> int:
        return next(x for x, p in self.parent.items() if p is None)

    @property
    def width(self) -> int:
        return max(len(b) for b in self.bags.values()) - 1

    def depth(self, x: int) -> int:
        d = 0
        while self.parent[x] is not None:
            x, d = self.parent[x], d + 1
        return d

    def edges(self) -> list[tuple[int, int]]:
        return sorted((p, x) for x, p in self.parent.items() if p is not None)

    def top_bag(self) -> dict[int, int]:
        """For every vertex, its bag closest to the root."""
        top: dict[int, int] = {}
        for x in sorted(self.bags, key=self.depth):
            for v in self.bags[x]:
                top.setdefault(v, x)
        return top

    def to_dict(self) -> dict:
        return {
            "nodes": sorted(self.bags),
            "edges": [list(e) for e in self.edges()],
            "bags": {str(x): sorted(b) for x, b in sorted(self.bags.items())},
        }


def validate_tree_decomposition(g: WeightedGraph, td: TreeDecomposition) -> list[str]:
    errors = []
    nodes = set(td.bags)
    if set(td.parent) != nodes or sum(p is None for p in td.parent.values()) != 1:
        errors.append("decomposition tree is not a rooted tree on the bag nodes")
        return errors
    covered = set().union(*td.bags.values())
    errors += [f"vertex {v} is in no bag" for v in range(g.n) if v not in covered]
    for u, v, _ in g.edges:
        if not any(u in b and v in b for b in td.bags.values()):
            errors.append(f"edge {{{u},{v}}} is not covered by any bag")
    for v in sorted(covered):
        holders = {x for x, b in td.bags.items() if v in b}
        tops = [x for x in holders if td.parent[x] not in holders]
        if len(tops) != 1:
            errors.append(f"bags containing vertex {v} are not connected")
    return errors


@dataclass
class LowerBoundInstance:
    """A complete binary tree of bags threaded by a spine path.

    Internal bag ``B`` owns vertices ``a_B, b_B, c_B`` and leaf bags own
    ``x, y``.  The spine visits ``a_B``, the left subtree, ``b_B``, the right
    subtree, then ``c_B``; leaves contribute the unit edge ``x-y`` and every
    other spine edge weighs zero.  ``order`` ranks vertices for the monotone
    condition: by depth of the owning bag, then ``a < c < b`` (``x < y``).
    """

    graph: WeightedGraph
    td: TreeDecomposition
    spine: list[int]
    depth: int
    order: dict[int, tuple[int, int]] = field(default_factory=dict)

    @property
    def spine_weight(self) -> float:
        return self.graph.path_weight(self.spine)

    def to_dict(self) -> dict:
        return {
            "n": self.graph.n,
            "edges": [{"u": u, "v": v, "w": w} for u, v, w in self.graph.edges],
            "tree_decomposition": self.td.to_dict(),
            "spine": list(self.spine),
            "depth": self.depth,
        }


def gen_lowerbound(depth: int) -> LowerBoundInstance:
    if depth < 1:
        raise ValueError("depth must be at least 1")
    nodes = 2 ** (depth + 1) - 1
    own: dict[int, list[int]] = {}
    order: dict[int, tuple[int, int]] = {}
    parent = {x: (None if x == 0 else (x - 1) // 2) for x in range(nodes)}
    nxt = 0

    def level(x: int) -> int:
        return (x + 1).bit_length() - 1

    for x in range(nodes):
        internal = level(x) < depth
        names = ["a", "b", "c"] if internal else ["x", "y"]
        rank = {"a": 0, "c": 1, "b": 2, "x": 0, "y": 1}
        own[x] = []
        for nm in names:
            own[x].append(nxt)
            order[nxt] = (level(x), rank[nm])
            nxt += 1

    spine: list[int] = []
    unit: set[tuple[int, int]] = set()

    def thread(x: int) -> None:
        if level(x) == depth:
            u, v = own[x]
            spine.extend((u, v))
            unit.add(pair(u, v))
            return
        a, b, c = own[x]
        spine.append(a)
        thread(2 * x + 1)
        spine.append(b)
        thread(2 * x + 2)
        spine.append(c)

    thread(0)
    pos = {v: i for i, v in enumerate(spine)}
    prefix = [0.0]
    for u, v in zip(spine, spine[1:]):
        prefix.append(prefix[-1] + (1.0 if pair(u, v) in unit else 0.0))

    # each spine edge between a bag and its child is covered by pushing the
    # parent-side endpoint down into the child bag
    bags = {x: set(own[x]) for x in range(nodes)}
    home = {v: x for x, vs in own.items() for v in vs}
    for u, v in zip(spine, spine[1:]):
        hu, hv = home[u], home[v]
        if hu == hv:
            continue
        if parent[hv] == hu:
            bags[hv].add(u)
        elif parent[hu] == hv:
            bags[hu].add(v)
        else:
            raise AssertionError("spine edge joins non-adjacent bags")

    edges = {}
    for x in range(nodes):
        members = sorted(bags[x])
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                u, v = members[i], members[j]
                edges[(u, v)] = abs(prefix[pos[u]] - prefix[pos[v]])
    for u, v in zip(spine, spine[1:]):
        edges[pair(u, v)] = 1.0 if pair(u, v) in unit else 0.0
    g = WeightedGraph(nxt, [(u, v, w) for (u, v), w in sorted(edges.items())])
    td = TreeDecomposition({x: frozenset(b) for x, b in bags.items()}, parent)
    return LowerBoundInstance(g, td, spine, depth, order)


def monotone_candidates(inst: LowerBoundInstance) -> tuple[int, dict[int, list[tuple[float, int]]]]:
    """Root and, for every other vertex, its admissible ``(weight, parent)`` pairs.

    A parent must lie in the child's top bag and precede it in ``inst.order``.
    """
    td, g = inst.td, inst.graph
    top = td.top_bag()
    root = min(range(g.n), key=lambda v: (inst.order[v], v))
    options: dict[int, list[tuple[float, int]]] = {}
    for v in range(g.n):
        if v == root:
            continue
        options[v] = sorted(
            (g.weight(u, v), u)
            for u in td.bags[top[v]]
            if u != v and (inst.order[u], u) < (inst.order[v], v) and g.has_edge(u, v)
        )
    return root, options


def lightest_monotone_weight(inst: LowerBoundInstance) -> tuple[float, dict[int, int]]:
    """Minimum monotone tree weight; parent choices are independent, so this is a per-vertex argmin."""
    _, options = monotone_candidates(inst)
    parent = {}
    total = 0.0
    for v, opts in options.items():
        if not opts:
            raise ValueError(f"vertex {v} has no admissible parent")
        w, u = opts[0]
        parent[v] = u
        total += w
    return total, parent


def measure_lowerbound(inst: LowerBoundInstance) -> float:
    weight, _ = lightest_monotone_weight(inst)
    base = mst_weight(inst.graph)
    return weight / base if base > 0 else math.inf
