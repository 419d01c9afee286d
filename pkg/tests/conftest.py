from __future__ import annotations

import math
import random

import pytest

from lightspan.decomposition import complete
from lightspan.generators import GenSpec, corpus, gen_random
from lightspan.graph import WeightedGraph
from lightspan.spanner import prepare, run_eps

CORPUS_SIZE = 200
EPSILONS = (0.1, 0.5, 1.0)


def bellman_ford(g: WeightedGraph, source: int) -> list[float]:
    """Plain edge relaxation; deliberately shares nothing with the library."""
    dist = [math.inf] * g.n
    dist[source] = 0.0
    for _ in range(g.n):
        changed = False
        for u, v, w in g.edges:
            if dist[u] + w < dist[v]:
                dist[v] = dist[u] + w
                changed = True
            if dist[v] + w < dist[u]:
                dist[u] = dist[v] + w
                changed = True
        if not changed:
            break
    return dist


def random_graph(n: int, p: float, seed: int, integer: bool = False) -> WeightedGraph:
    """Connected random graph: a random spanning path plus G(n, p) edges."""
    rng = random.Random(seed)
    perm = list(range(n))
    rng.shuffle(perm)
    pairs = {tuple(sorted((perm[i], perm[i + 1]))) for i in range(n - 1)}
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                pairs.add((u, v))

    def weight() -> float:
        return float(rng.randint(1, 9)) if integer else round(rng.uniform(0.1, 5.0), 3)

    return WeightedGraph(n, [(u, v, weight()) for u, v in sorted(pairs)])


@pytest.fixture(scope="session")
def instances():
    """The seeded benchmark corpus: ``(name, spec, graph, decomposition)``."""
    out = []
    for name, spec in corpus(CORPUS_SIZE, seed=0, max_k=5, max_n=60):
        g, pd = gen_random(spec)
        out.append((name, spec, g, pd))
    return out


@pytest.fixture(scope="session")
def prepared(instances):
    return {name: prepare(g, pd) for name, _, g, pd in instances}


@pytest.fixture(scope="session")
def runs(prepared):
    """Pipeline results keyed by ``(name, eps)``."""
    return {(name, eps): run_eps(prep, eps) for name, prep in prepared.items() for eps in EPSILONS}


@pytest.fixture(scope="session")
def small_instances():
    """Completed instances on at most nine vertices with nice decompositions."""
    out = []
    for seed in range(60):
        k = 1 + seed % 3
        m = 1 + seed % (9 - k)
        spec = GenSpec(
            k=k,
            m=m,
            seed=seed,
            weights=("uniform", "integer", "unit")[seed % 3],
            density=(0.4, 0.7, 1.0)[seed % 3],
            window=("sliding", "random")[seed % 2],
        )
        g, pd = gen_random(spec)
        cg, _ = complete(g, pd)
        out.append((f"small-{seed:02d}", cg, pd))
    return out
