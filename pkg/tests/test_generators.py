import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lightspan import jsonio
from lightspan.decomposition import validate_decomposition
from lightspan.generators import (
    GenSpec,
    TreeDecomposition,
    corpus,
    gen_lowerbound,
    gen_random,
    lightest_monotone_weight,
    measure_lowerbound,
    monotone_candidates,
    validate_tree_decomposition,
)
from lightspan.graph import apsp, mst, validate

DEPTHS = range(1, 9)
MIN_INCREMENT = 0.5  # frozen from the first measured run


@pytest.fixture(scope="module")
def lowerbounds():
    return {d: gen_lowerbound(d) for d in DEPTHS}


class TestRandom:
    def test_width_one_full_density_is_a_path(self):
        g, pd = gen_random(GenSpec(k=1, m=12, seed=5, density=1.0))
        assert g.m == g.n - 1
        assert sorted(g.degree(v) for v in range(g.n)) == [1, 1] + [2] * (g.n - 2)

    @settings(max_examples=60, deadline=None)
    @given(
        st.integers(1, 5),
        st.integers(1, 40),
        st.integers(0, 10**6),
        st.sampled_from(["uniform", "integer", "unit"]),
        st.sampled_from([0.05, 0.5, 1.0]),
        st.sampled_from(["sliding", "random"]),
    )
    def test_valid_connected_width_k(self, k, m, seed, weights, density, window):
        spec = GenSpec(k=k, m=m, seed=seed, weights=weights, density=density, window=window)
        g, pd = gen_random(spec)
        assert validate(g).valid
        report = validate_decomposition(g, pd)
        assert report.valid and report.width <= k
        assert pd.is_nice()
        assert g.n == m + k

    def test_weight_modes(self):
        for mode, check in [
            ("unit", lambda w: w == 1.0),
            ("integer", lambda w: w == int(w) and 1 <= w <= 7),
            ("uniform", lambda w: 0 <= w < 1),
        ]:
            g, _ = gen_random(GenSpec(k=3, m=10, seed=1, weights=mode, max_weight=7))
            assert all(check(w) for _, _, w in g.edges)

    def test_deterministic_bytes(self):
        spec = GenSpec(k=3, m=30, seed=99, density=0.4, window="random")
        a = jsonio.dumps(jsonio.graph_to_dict(*gen_random(spec)))
        b = jsonio.dumps(jsonio.graph_to_dict(*gen_random(spec)))
        assert a == b

    @pytest.mark.parametrize(
        "kwargs",
        [{"k": 0, "m": 3}, {"k": 2, "m": 0}, {"k": 2, "m": 3, "density": 0}, {"k": 2, "m": 3, "weights": "x"}],
    )
    def test_bad_spec(self, kwargs):
        with pytest.raises(ValueError):
            GenSpec(**kwargs)

    def test_corpus_shape(self, instances):
        assert len(instances) >= 200
        assert instances[0][0] == "rand-000"
        assert all(g.n <= 60 and pd.width <= 5 for _, _, g, pd in instances)
        assert {spec.weights for _, spec, _, _ in instances} == {"uniform", "integer", "unit"}
        assert corpus(5, seed=1) == corpus(5, seed=1)


class TestLowerBound:
    def test_depth_one(self):
        inst = gen_lowerbound(1)
        assert len(inst.td.bags) == 3
        assert inst.graph.n == 3 + 2 + 2
        assert inst.spine_weight == 2

    def test_structure(self, lowerbounds):
        for d, inst in lowerbounds.items():
            g = inst.graph
            assert sorted(inst.spine) == list(range(g.n))
            unit = sum(1 for a, b in zip(inst.spine, inst.spine[1:]) if g.weight(a, b) == 1)
            assert unit == 2**d
            assert all(g.weight(a, b) in (0.0, 1.0) for a, b in zip(inst.spine, inst.spine[1:]))
            pos = {v: i for i, v in enumerate(inst.spine)}
            prefix = np.concatenate([[0], np.cumsum([g.weight(a, b) for a, b in zip(inst.spine, inst.spine[1:])])])
            for u, v, w in g.edges:
                assert w == abs(prefix[pos[u]] - prefix[pos[v]])

    def test_mst_is_spine(self, lowerbounds):
        for d, inst in lowerbounds.items():
            assert mst(inst.graph).weight() == inst.spine_weight == 2**d
            # spine edges are shortest paths between their endpoints
            if d > 6:
                continue
            d_all = apsp(inst.graph)
            assert all(d_all[a, b] == inst.graph.weight(a, b) for a, b in zip(inst.spine, inst.spine[1:]))

    def test_tree_decomposition(self, lowerbounds):
        for d, inst in lowerbounds.items():
            assert validate_tree_decomposition(inst.graph, inst.td) == []
            assert inst.td.width <= 4
            assert max(inst.td.depth(x) for x in inst.td.bags) == d

    def test_validator_catches_breakage(self):
        inst = gen_lowerbound(2)
        bags = dict(inst.td.bags)
        leaf = max(bags)
        bags[leaf] = frozenset(list(bags[leaf])[:1])
        assert validate_tree_decomposition(inst.graph, TreeDecomposition(bags, inst.td.parent))

    def test_argmin_matches_enumeration(self):
        inst = gen_lowerbound(1)
        root, options = monotone_candidates(inst)
        best = min(sum(w for w, _ in combo) for combo in itertools.product(*options.values()))
        assert lightest_monotone_weight(inst)[0] == best

    def test_ratio_grows(self, lowerbounds):
        ratios = [measure_lowerbound(lowerbounds[d]) for d in DEPTHS]
        assert ratios[0] > 1
        steps = np.diff(ratios)
        assert np.all(steps >= MIN_INCREMENT - 1e-12)
        slope, intercept = np.polyfit(list(DEPTHS), ratios, 1)
        residual = np.max(np.abs(np.polyval([slope, intercept], list(DEPTHS)) - ratios))
        assert slope > 0 and residual < 1e-9
        assert ratios == pytest.approx([1 + d / 2 for d in DEPTHS], abs=1e-12)

    def test_logarithmic_in_n(self, lowerbounds):
        ns = [lowerbounds[d].graph.n for d in DEPTHS]
        ratios = [measure_lowerbound(lowerbounds[d]) for d in DEPTHS]
        per_log = [r / math.log2(n) for r, n in zip(ratios, ns)]
        assert min(per_log) > 0.25

    def test_json(self):
        data = gen_lowerbound(2).to_dict()
        assert set(data["tree_decomposition"]) == {"nodes", "edges", "bags"}
        assert len(data["tree_decomposition"]["nodes"]) == 7

    def test_bad_depth(self):
        with pytest.raises(ValueError):
            gen_lowerbound(0)
