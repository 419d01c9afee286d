"""Charging schemes from a graph onto a spanning tree.

A detour ``(e, P)`` moves charge off edge ``e`` and onto every edge of the
path ``P``.  A scheme assigns exact nonnegative rational values to detours;
:func:`verify_scheme` checks the five scheme conditions with no tolerance.
:func:`build_scheme` produces an acyclic scheme for a completed interval
graph and a monotone tree from triangle moves read off the forest
:func:`build_t2`.
"""

from __future__ import annotations

import graphlib
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .decomposition import IntervalRepresentation
from .graph import Pair, WeightedGraph, pair
from .monotone import RootedTree


class SchemeError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Detour:
    """An edge and a path joining its endpoints, together forming a simple cycle.

    The path is stored starting at the smaller endpoint of the edge.
    """

    edge: Pair
    path: tuple[int, ...]

    def __init__(self, edge: Sequence[int], path: Sequence[int]):
        e = pair(int(edge[0]), int(edge[1]))
        p = tuple(int(x) for x in path)
        if len(p) < 3:
            raise SchemeError(f"detour path for {e} must have at least two edges")
        if len(set(p)) != len(p):
            raise SchemeError(f"detour path {p} repeats a vertex")
        if {p[0], p[-1]} != set(e) or e[0] == e[1]:
            raise SchemeError(f"detour path {p} does not join the endpoints of {e}")
        if p[0] != e[0]:
            p = p[::-1]
        object.__setattr__(self, "edge", e)
        object.__setattr__(self, "path", p)

    def path_edges(self) -> list[Pair]:
        return [pair(a, b) for a, b in zip(self.path, self.path[1:])]

    def __repr__(self) -> str:
        return f"Detour({self.edge}, {'-'.join(map(str, self.path))})"


def loop_erase(walk: Sequence[int]) -> list[int]:
    """Reduce a walk to a simple path by cutting out every closed sub-walk."""
    out: list[int] = []
    pos: dict[int, int] = {}
    for x in walk:
        if x in pos:
            cut = pos[x] + 1
            for y in out[cut:]:
                del pos[y]
            del out[cut:]
        else:
            pos[x] = len(out)
            out.append(x)
    return out


def shortcut(d1: Detour, d2: Detour) -> Detour:
    """Splice the path of ``d2`` into ``d1`` in place of the edge ``d2.edge``."""
    if d2.edge not in d1.path_edges():
        raise SchemeError(f"{d2.edge} is not on the path of {d1}")
    if d1.edge in d2.path_edges():
        raise SchemeError(f"{d1.edge} lies on the path of {d2}")
    p1 = d1.path
    i = next(i for i in range(len(p1) - 1) if pair(p1[i], p1[i + 1]) == d2.edge)
    p2 = d2.path if d2.path[0] == p1[i] else d2.path[::-1]
    walk = [*p1[:i], *p2, *p1[i + 2 :]]
    return Detour(d1.edge, loop_erase(walk))


@dataclass
class ChargingScheme:
    moves: dict[Detour, Fraction] = field(default_factory=dict)
    edge_order: list[Pair] | None = None

    def add(self, d: Detour, value: Fraction | int) -> None:
        value = Fraction(value)
        new = self.moves.get(d, Fraction(0)) + value
        if new:
            self.moves[d] = new
        else:
            self.moves.pop(d, None)

    def active(self) -> list[tuple[Detour, Fraction]]:
        return sorted((d, x) for d, x in self.moves.items() if x > 0)

    def out_charge(self) -> dict[Pair, Fraction]:
        out: dict[Pair, Fraction] = defaultdict(Fraction)
        for d, x in self.moves.items():
            out[d.edge] += x
        return out

    def in_charge(self) -> dict[Pair, Fraction]:
        inc: dict[Pair, Fraction] = defaultdict(Fraction)
        for d, x in self.moves.items():
            for e in d.path_edges():
                inc[e] += x
        return inc

    def net(self) -> dict[Pair, Fraction]:
        out, inc = self.out_charge(), self.in_charge()
        return {e: inc.get(e, Fraction(0)) - out.get(e, Fraction(0)) for e in set(out) | set(inc)}

    def copy(self) -> ChargingScheme:
        return ChargingScheme(dict(self.moves), None if self.edge_order is None else list(self.edge_order))

    def to_dict(self) -> dict:
        out = {
            "moves": [
                {"edge": list(d.edge), "path": list(d.path), "value": [x.numerator, x.denominator]}
                for d, x in sorted(self.moves.items())
            ]
        }
        if self.edge_order is not None:
            out["edge_order"] = [list(e) for e in self.edge_order]
        return out

    @classmethod
    def from_dict(cls, data: dict) -> ChargingScheme:
        scheme = cls()
        for m in data.get("moves", []):
            num, den = m["value"]
            scheme.add(Detour(m["edge"], m["path"]), Fraction(int(num), int(den)))
        if "edge_order" in data:
            scheme.edge_order = [pair(int(u), int(v)) for u, v in data["edge_order"]]
        return scheme


@dataclass
class VerificationReport:
    conditions: dict[int, bool]
    min_v: Fraction
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.conditions.values())

    def to_dict(self) -> dict:
        return {
            "conditions": {str(k): v for k, v in sorted(self.conditions.items())},
            "min_v": [self.min_v.numerator, self.min_v.denominator],
            "min_v_float": float(self.min_v),
            "violations": list(self.violations),
        }


def _tree_pairs(t: RootedTree | Iterable[Pair]) -> set[Pair]:
    if isinstance(t, RootedTree):
        return t.edge_set()
    return {pair(u, v) for u, v in t}


def verify_scheme(
    g: WeightedGraph,
    t: RootedTree | Iterable[Pair],
    s: ChargingScheme,
    v: Fraction | int | None = None,
    acyclic: bool = True,
) -> VerificationReport:
    """Check the scheme conditions exactly.

    (1) ``Out(e) >= 1`` and (2) ``Net(e) <= 0`` off the tree, (3) ``Net(e) <= v``
    on it; with ``acyclic`` also (4) only non-tree edges charge and (5) the
    "charges a path containing" relation has a topological order.  The order
    is recomputed here; ``s.edge_order`` is not trusted.  With ``v`` None,
    condition (3) holds trivially and ``min_v`` is the smallest valid value.
    """
    tree = _tree_pairs(t)
    violations: list[str] = []
    for d, x in s.moves.items():
        for e in (d.edge, *d.path_edges()):
            if e not in g.edge_index:
                raise SchemeError(f"{d} uses {e}, which is not an edge of the graph")
        if x < 0:
            raise SchemeError(f"{d} has negative value {x}")
    out, net = s.out_charge(), s.net()
    zero = Fraction(0)
    c1 = c2 = True
    for e in sorted(g.edge_index):
        if e in tree:
            continue
        if out.get(e, zero) < 1:
            c1 = False
            violations.append(f"(1) Out{e} = {out.get(e, zero)} < 1")
        if net.get(e, zero) > 0:
            c2 = False
            violations.append(f"(2) Net{e} = {net[e]} > 0")
    min_v = max((net.get(e, zero) for e in tree), default=zero)
    min_v = max(min_v, zero)
    c3 = True
    if v is not None and min_v > Fraction(v):
        c3 = False
        violations.append(f"(3) max tree Net = {min_v} > {Fraction(v)}")
    conditions = {1: c1, 2: c2, 3: c3}
    if acyclic:
        c4 = True
        for d, x in s.active():
            if d.edge in tree:
                c4 = False
                violations.append(f"(4) tree edge {d.edge} charges {d.path}")
        ts = graphlib.TopologicalSorter()
        for d, x in s.active():
            for e in d.path_edges():
                ts.add(e, d.edge)
        c5 = True
        try:
            tuple(ts.static_order())
        except graphlib.CycleError as exc:
            c5 = False
            violations.append(f"(5) charge relation has a cycle through {exc.args[1]}")
        conditions.update({4: c4, 5: c5})
    return VerificationReport(conditions, min_v, violations)


def charge_order(s: ChargingScheme) -> list[Pair]:
    """A topological order of the charge relation (raises on a cycle)."""
    ts = graphlib.TopologicalSorter()
    for d, _ in s.active():
        ts.add(d.edge)
        for e in d.path_edges():
            ts.add(e, d.edge)
    return list(ts.static_order())


def remove_edge(
    s: ChargingScheme, e: Sequence[int], g: WeightedGraph, t: RootedTree | Iterable[Pair]
) -> ChargingScheme:
    """Repair an acyclic scheme so that it no longer uses the non-tree edge ``e``.

    While something charges a path through ``e``, that charge is rerouted
    through one of ``e``'s own detours by shortcutting.  Afterwards every
    remaining move out of ``e`` is dropped.  Moves are picked in sorted order.
    """
    e = pair(*e)
    if e in _tree_pairs(t):
        raise SchemeError(f"{e} is a tree edge")
    if e not in g.edge_index:
        raise SchemeError(f"{e} is not an edge of the graph")
    s = s.copy()
    while True:
        into = [(d, x) for d, x in s.active() if e in d.path_edges()]
        if not into:
            break
        outof = [(d, x) for d, x in s.active() if d.edge == e]
        if not outof:
            raise SchemeError(f"{e} receives charge but charges nothing; scheme violates condition (2)")
        (d1, x1), (d2, x2) = into[0], outof[0]
        alpha = min(x1, x2)
        s.add(d1, -alpha)
        s.add(d2, -alpha)
        s.add(shortcut(d1, d2), alpha)
    for d in [d for d in s.moves if d.edge == e]:
        del s.moves[d]
    s.edge_order = None
    return s


@dataclass
class T2Forest:
    """Forest on the edges of a graph encoding triangle moves.

    For a non-tree edge ``{j, k}`` with ``left(j) < left(k)`` and ``i`` the
    tree parent of ``k``, the parent of ``jk`` is ``ij`` and ``triangle[jk]``
    is ``(i, j, k)``.  Tree edges are the roots.
    """

    parent: dict[Pair, Pair | None]
    triangle: dict[Pair, tuple[int, int, int]]
    key: dict[Pair, tuple]

    @property
    def roots(self) -> list[Pair]:
        return sorted(e for e, p in self.parent.items() if p is None)

    def children(self) -> dict[Pair, list[Pair]]:
        ch: dict[Pair, list[Pair]] = {e: [] for e in self.parent}
        for e, p in self.parent.items():
            if p is not None:
                ch[p].append(e)
        for kids in ch.values():
            kids.sort(key=lambda e: self.key[e])
        return ch

    def root_of(self, e: Pair) -> Pair:
        while self.parent[e] is not None:
            e = self.parent[e]
        return e


def build_t2(g: WeightedGraph, t: RootedTree, iv: IntervalRepresentation) -> T2Forest:
    tree = t.edge_set()
    parent: dict[Pair, Pair | None] = {}
    triangle: dict[Pair, tuple[int, int, int]] = {}
    key: dict[Pair, tuple] = {}
    for u, v, _ in g.edges:
        jk = (u, v)
        j, k = (u, v) if iv.left(u) < iv.left(v) else (v, u)
        key[jk] = (max(iv.left(u), iv.left(v)), jk)
        if jk in tree:
            parent[jk] = None
            continue
        i = t.parent[k]
        if i is None or not iv.left(i) < iv.left(k):
            raise SchemeError(f"tree is not monotone at vertex {k}")
        ij = pair(i, j)
        if ij not in g.edge_index or i == j:
            raise SchemeError(f"{{{i},{j},{k}}} is not a triangle; graph not completed?")
        if not max(iv.left(i), iv.left(j)) < iv.left(k):
            raise SchemeError(f"parent link {jk} -> {ij} does not move left")
        parent[jk] = ij
        triangle[jk] = (i, j, k)
    return T2Forest(parent, triangle, key)


def euler_paths(f: T2Forest) -> list[list[Pair]]:
    """Cut an Euler tour of each component at its root into directed paths.

    Each path starts at a child of the root, wanders its subtree (visiting
    vertices repeatedly) and ends at the root.
    """
    children = f.children()
    paths = []
    for r in f.roots:
        for c in children[r]:
            path: list[Pair] = []
            stack = [(c, iter(children[c]))]
            path.append(c)
            while stack:
                node, it = stack[-1]
                nxt = next(it, None)
                if nxt is None:
                    stack.pop()
                    path.append(stack[-1][0] if stack else r)
                else:
                    path.append(nxt)
                    stack.append((nxt, iter(children[nxt])))
            paths.append(path)
    return paths


def triangle_move(f: T2Forest, a: Pair, b: Pair) -> Detour:
    """The unit move for the forest step ``a -> b``.

    Going up ``jk -> ij`` the edge ``{j,k}`` charges ``j-i-k``; going down
    ``ij -> jk`` the edge ``{i,j}`` charges ``i-k-j``.
    """
    if f.parent.get(a) == b:
        i, j, k = f.triangle[a]
        return Detour((j, k), (j, i, k))
    if f.parent.get(b) == a:
        i, j, k = f.triangle[b]
        return Detour((i, j), (i, k, j))
    raise SchemeError(f"{a} and {b} are not adjacent in the forest")


def build_scheme(g: WeightedGraph, t: RootedTree, iv: IntervalRepresentation) -> tuple[ChargingScheme, Fraction]:
    """Acyclic scheme from triangle moves along the Euler paths of the forest.

    Repeat visits on a path are removed right to left by shortcutting the
    move into the repeat with the move out of it.  Returns the scheme and the
    verified value ``v``.
    """
    f = build_t2(g, t, iv)
    scheme = ChargingScheme()
    order: list[Pair] = []
    for path in euler_paths(f):
        steps = [[path[i], triangle_move(f, path[i], path[i + 1])] for i in range(len(path) - 1)]
        first = {}
        for i, node in enumerate(path[:-1]):
            first.setdefault(node, i)
        for i in range(len(steps) - 1, 0, -1):
            if first[steps[i][0]] < i:
                steps[i - 1][1] = shortcut(steps[i - 1][1], steps[i][1])
                del steps[i]
        for _, move in steps:
            scheme.add(move, 1)
        order.extend(node for node, _ in steps)
    tree = t.edge_set()
    scheme.edge_order = order + sorted(tree)
    report = verify_scheme(g, tree, scheme, acyclic=True)
    if not report.ok:
        raise SchemeError("constructed scheme fails verification: " + "; ".join(report.violations[:5]))
    return scheme, report.min_v
