import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lightspan.decomposition import (
    DecompositionError,
    PathDecomposition,
    ReductionTrace,
    bag_pairs,
    bound_degree,
    complete,
    contract,
    lift_spanner,
    make_nice,
    reduce,
    to_intervals,
    validate_decomposition,
)
from lightspan.generators import GenSpec, gen_random
from lightspan.graph import EdgeSubgraph, WeightedGraph, apsp
from lightspan.spanner import greedy_spanner, verify_stretch

A, B, C, D = 0, 1, 2, 3
PATH3 = WeightedGraph(3, [(A, B, 1.0), (B, C, 1.0)])


def coarsen(pd: PathDecomposition, seed: int) -> PathDecomposition:
    """Merge random runs of consecutive bags; the result stays valid but is rarely nice."""
    rng = random.Random(seed)
    out, i = [], 0
    while i < len(pd.bags):
        j = min(len(pd.bags), i + rng.randint(1, 4))
        out.append(frozenset().union(*pd.bags[i:j]))
        i = j
    return PathDecomposition(out)


def spec_strategy():
    return st.builds(
        GenSpec,
        k=st.integers(1, 4),
        m=st.integers(1, 25),
        seed=st.integers(0, 10**6),
        weights=st.sampled_from(["uniform", "integer", "unit"]),
        density=st.sampled_from([0.3, 0.7, 1.0]),
        window=st.sampled_from(["sliding", "random"]),
    )


class TestValidateDecomposition:
    def test_single_bag_triangle(self):
        g = WeightedGraph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
        r = validate_decomposition(g, PathDecomposition([{0, 1, 2}]))
        assert r.valid and r.width == 2

    def test_textbook_path(self):
        r = validate_decomposition(PATH3, PathDecomposition([{A, B}, {B, C}]))
        assert r.valid and r.width == 1

    def test_non_contiguous(self):
        r = validate_decomposition(PATH3, PathDecomposition([{A, B}, {C}, {B, C}]))
        assert not r.valid
        assert any("not contiguous" in e for e in r.errors)

    def test_uncovered_edge_and_missing_vertex(self):
        r = validate_decomposition(PATH3, PathDecomposition([{A}, {B}]))
        assert not r.valid
        assert any("in no bag" in e for e in r.errors)
        assert any("not covered" in e for e in r.errors)


class TestIntervals:
    def test_path_order(self):
        iv = to_intervals(PathDecomposition([{A, B}, {B, C}]))
        assert iv.left(A) < iv.left(B) < iv.left(C)
        assert not iv.overlap(A, C)

    def test_single_bag_all_overlap(self):
        iv = to_intervals(PathDecomposition([{0, 1, 2}]))
        assert all(iv.overlap(u, v) for u in range(3) for v in range(3))

    @settings(max_examples=40, deadline=None)
    @given(spec_strategy(), st.integers(0, 1000))
    def test_layout_properties(self, spec, cseed):
        g, pd = gen_random(spec)
        pd = coarsen(pd, cseed)
        iv = to_intervals(pd)
        ends = [x for ab in iv.intervals.values() for x in ab]
        assert len(set(ends)) == len(ends)
        assert iv.max_overlap() <= pd.width + 1
        assert all(iv.overlap(u, v) for u, v, _ in g.edges)
        shared = bag_pairs(pd.bags)
        for u in range(g.n):
            for v in range(u + 1, g.n):
                assert iv.overlap(u, v) == ((u, v) in shared)
        first = {v: s[0] for v, s in pd.spans().items()}
        for u in range(g.n):
            for v in range(g.n):
                if first[u] < first[v]:
                    assert iv.left(u) < iv.left(v)


class TestMakeNice:
    def test_two_disjoint_bags(self):
        g = WeightedGraph(4, [(A, B, 1), (C, D, 1)])
        out = make_nice(g, PathDecomposition([{A, B}, {C, D}]))
        assert [set(b) for b in out.bags] == [{A, B}, {B}, set(), {C}, {C, D}]

    def test_already_nice_unchanged(self):
        pd = PathDecomposition([{A, B}, {B}, {B, C}])
        assert make_nice(PATH3, pd) == pd

    def test_random_seed_3(self):
        g, pd = gen_random(GenSpec(k=3, m=20, seed=3, density=0.6, window="random"))
        rough = coarsen(pd, 3)
        assert not rough.is_nice()
        nice = make_nice(g, rough)
        assert validate_decomposition(g, nice).valid
        assert nice.is_nice()
        assert nice.width == rough.width

    @settings(max_examples=40, deadline=None)
    @given(spec_strategy(), st.integers(0, 1000))
    def test_idempotent_and_valid(self, spec, cseed):
        g, pd = gen_random(spec)
        nice = make_nice(g, coarsen(pd, cseed))
        assert nice.is_nice() and validate_decomposition(g, nice).valid
        assert make_nice(g, nice) == nice

    def test_invalid_input_rejected(self):
        with pytest.raises(DecompositionError):
            make_nice(PATH3, PathDecomposition([{A, B}, {C}, {B, C}]))


class TestBoundDegree:
    def test_short_decomposition_unchanged(self):
        pd = PathDecomposition([{A, B}])
        g = WeightedGraph(2, [(A, B, 1.0)])
        g2, pd2, trace = bound_degree(g, pd)
        assert g2.edges == g.edges and pd2 == pd
        assert not trace.copy_map and not trace.zero_edges

    def test_five_path_occurrences(self):
        g = WeightedGraph(5, [(i, i + 1, 1.0) for i in range(4)])
        pd = PathDecomposition([{0, 1}, {1}, {1, 2}, {2}, {2, 3}, {3}, {3, 4}])
        g2, pd2, trace = bound_degree(g, pd)
        assert validate_decomposition(g2, pd2).valid and pd2.is_nice()
        assert max(len(ix) for ix in pd2.occurrences().values()) <= 4
        assert pd2.width <= pd.width + 1
        assert all(g2.weight(*e) == 0 for e in trace.zero_edges)

    def test_requires_nice(self):
        with pytest.raises(DecompositionError):
            bound_degree(PATH3, PathDecomposition([{A, B}, {B, C}]))

    def test_corpus_properties(self, instances):
        worst = 0.0
        for _, spec, g, pd in instances:
            g2, pd2, trace = bound_degree(g, pd)
            assert validate_decomposition(g2, pd2).valid and pd2.is_nice()
            assert pd2.width <= pd.width + 1
            assert contract(g2, trace, g.n) == set(g.edges)
            occ = max(len(ix) for ix in pd2.occurrences().values())
            assert occ <= 4 * (pd.width + 1)
            worst = max(worst, g2.max_degree() / (pd2.width + 1))
        assert worst <= 4


class TestComplete:
    def test_already_complete(self):
        g = WeightedGraph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
        g2, trace = complete(g, PathDecomposition([{0, 1, 2}]))
        assert g2.edges == g.edges and not trace.completion_edges

    def test_path_in_one_bag(self):
        g2, trace = complete(PATH3, PathDecomposition([{A, B, C}]))
        assert g2.weight(A, C) == 2
        assert trace.completion_edges == {(A, C): [A, B, C]}

    def test_corpus_distances_preserved(self, instances):
        for _, _, g, pd in instances[:80]:
            g2, trace = complete(g, pd)
            assert validate_decomposition(g2, pd).valid
            assert np.allclose(apsp(g2), apsp(g), rtol=1e-9, atol=1e-12)
            assert bag_pairs(pd.bags) <= set(g2.edge_index)
            for (u, v), path in trace.completion_edges.items():
                assert abs(g.path_weight(path) - g2.weight(u, v)) <= 1e-9 * max(1.0, g2.weight(u, v))

    def test_corpus_degree_constant(self, prepared):
        for prep in prepared.values():
            red = prep.reduction
            assert red.graph.max_degree() <= 4 * (red.decomposition.width + 1)


class TestLift:
    def test_completion_edge_expands(self):
        g2, trace = complete(PATH3, PathDecomposition([{A, B, C}]))
        sp = EdgeSubgraph.from_pairs(g2, [(A, C), (A, B)])
        lifted = lift_spanner(sp, trace, PATH3)
        assert lifted.pairs() == [(A, B), (B, C)]
        assert lifted.weight() <= sp.weight()

    def test_identity(self):
        sp = EdgeSubgraph(PATH3, [0, 1])
        lifted = lift_spanner(sp, ReductionTrace(), PATH3)
        assert lifted.pairs() == sp.pairs()

    def test_trace_round_trip(self, prepared):
        trace = next(iter(prepared.values())).reduction.trace
        assert ReductionTrace.from_dict(trace.to_dict()) == trace

    @pytest.mark.parametrize("seed", range(6))
    def test_lift_keeps_weight_and_stretch(self, seed):
        g, pd = gen_random(GenSpec(k=2 + seed % 3, m=15, seed=seed, density=0.7, window="random"))
        red = reduce(g, pd)
        sp = greedy_spanner(red.graph, None, 0.3)
        lifted = lift_spanner(sp, red.trace, g)
        assert lifted.is_spanning()
        assert lifted.weight() <= sp.weight() * (1 + 1e-9)
        assert verify_stretch(g, lifted) <= verify_stretch(red.graph, sp) * (1 + 1e-9)
