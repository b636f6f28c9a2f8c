import io
import math

import numpy as np
import pytest

from rainbowtree.graph_model import complete_graph, circulant_graph
from rainbowtree.random_model import (
    ColoredSubgraph,
    ExposureStack,
    ModelParams,
    RandomStream,
    build_exposure_stack,
    budget_threshold_log_n,
    color_uniform,
    derive_stream,
    derive_stream_id,
    flatten,
    fresh_layer_view,
    inclusion_budget,
    mix64,
    read_colored,
    sample_subgraph,
    write_colored,
)


def test_mix64_known_vector():
    # reference splitmix64 output for state 0 (first draw)
    assert mix64(0) == 0xE220A8397B1DCDAF


def test_streams_reproducible_and_distinct():
    a = RandomStream(5, 7).generator.integers(0, 1 << 62, size=4)
    b = RandomStream(5, 7).generator.integers(0, 1 << 62, size=4)
    c = RandomStream(5, 8).generator.integers(0, 1 << 62, size=4)
    assert (a == b).all()
    assert not (a == c).all()
    assert derive_stream(5, 1, 2).stream_id == derive_stream_id(1, 2)
    with pytest.raises(ValueError):
        derive_stream_id(1 << 32, 0)


def test_sample_edge_cases():
    g = complete_graph(5)
    rng = RandomStream(1)
    assert sample_subgraph(g, 0.0, rng) == []
    assert sample_subgraph(g, 1.0, rng) == list(range(10))
    with pytest.raises(ValueError):
        sample_subgraph(g, 1.5, rng)


def test_sample_binomial_moments():
    g = complete_graph(64)
    assert g.m == 2016
    rng = RandomStream(2024, 1)
    sizes = np.array([len(sample_subgraph(g, 0.5, rng)) for _ in range(10_000)])
    sigma = math.sqrt(2016 * 0.25)
    assert abs(sizes.mean() - 1008) <= 3 * sigma
    # per-edge marginals are uniform too
    rng = RandomStream(2024, 2)
    hits = np.zeros(g.m)
    for _ in range(2000):
        hits[sample_subgraph(g, 0.5, rng)] += 1
    assert abs(hits.mean() / 2000 - 0.5) < 0.01


def test_coloring_multinomial_moments():
    g = circulant_graph(20_000, [1, 2, 3, 4, 5])
    assert g.m == 100_000
    cg = color_uniform(g, range(g.m), 7, RandomStream(77))
    counts = np.bincount(list(cg.colors.values()), minlength=8)[1:]
    bound = 4 * math.sqrt(1e5 * (1 / 7) * (6 / 7))
    assert np.all(np.abs(counts - 1e5 / 7) <= bound)
    cg.validate()


def test_params_n256_frozen():
    params = ModelParams(n=256, d=255, epsilon=0.5)
    assert params.p == pytest.approx(2.25 * math.log(256) / 255)
    assert params.p == pytest.approx(0.048928, abs=1e-6)
    assert params.t_max == 169
    assert len(params.sparse_indices()) == 168
    assert params.sparse_indices()[0] == 169 and params.sparse_indices()[-1] == 2
    stack = build_exposure_stack(complete_graph(256), params, seed=3)
    assert len(stack.layers) == 169
    assert len(set(stack.stream_ids)) == 169
    assert stack.layers[0].layer_label == "G_p"
    assert stack.layers[1].layer_label == "G_s169"


def test_coeff_override_midpoint():
    params = ModelParams(n=100, d=99, coeff=3.0)
    assert params.dense_coefficient == 2.5
    assert ModelParams(n=100, d=99, epsilon=1.0).p == params.p


def test_infeasible_params():
    with pytest.raises(ValueError):
        ModelParams(n=8, d=2, epsilon=0.5).check()


def test_budget_bound_fails_small_n_holds_eventually():
    dense, sparse, bound = inclusion_budget(math.log(256), 0.5)
    assert dense + sparse > bound
    L0 = budget_threshold_log_n(0.5)
    d2, s2, b2 = inclusion_budget(L0 * 1.01, 0.5)
    assert d2 + s2 < b2


def test_flatten_precedence_exhaustive():
    g = complete_graph(8)
    params = ModelParams(n=8, d=7, epsilon=0.5)
    for seed in range(20):
        stack = build_exposure_stack(g, params, seed)
        stack.layers = stack.layers[:3]
        stack._source = None
        flat = flatten(stack)
        for e in range(g.m):
            owners = [layer.colors[e] for layer in stack.layers if e in layer.colors]
            if owners:
                assert flat.colors[e] == owners[0]
            else:
                assert e not in flat.colors


def test_flatten_dense_layer_first():
    g = complete_graph(6)
    a = ColoredSubgraph(g, {0: 1, 1: 2}, 5)
    b = ColoredSubgraph(g, {1: 3, 2: 4}, 5)
    params = ModelParams(n=6, d=5)
    stack = ExposureStack(g, params, [a, b], [2], [0, 1])
    assert flatten(stack).colors == {0: 1, 1: 2, 2: 4}


def test_fresh_layer_view_exhaustive():
    g = complete_graph(10)
    params = ModelParams(n=10, d=9, epsilon=0.5)
    for seed in range(10):
        stack = build_exposure_stack(g, params, seed)
        src = stack.source()
        for t in stack.sparse_index:
            pos = stack.layer_position(t)
            view = fresh_layer_view(stack, t)
            expected = [(e, stack.layers[pos].colors[e]) for e in sorted(stack.layers[pos].colors) if src[e] == pos]
            assert view == expected
            earlier = [layer.colors.keys() for layer in stack.layers[:pos]]
            assert fresh_layer_view(stack, t, earlier) == view


def test_stack_reproducible():
    g = complete_graph(30)
    params = ModelParams(n=30, d=29)
    s1 = build_exposure_stack(g, params, 11)
    s2 = build_exposure_stack(g, params, 11)
    assert [l.colors for l in s1.layers] == [l.colors for l in s2.layers]


def test_colored_io_roundtrip():
    g = complete_graph(6)
    cg = ColoredSubgraph(g, {0: 1, 3: 2, 14: 5}, 5)
    buf = io.StringIO()
    write_colored(cg, buf)
    back = read_colored(io.StringIO(buf.getvalue()), host=g)
    assert back.colors == cg.colors and back.palette_size == 5
    loose = read_colored(io.StringIO(buf.getvalue()))
    assert sorted(loose.colors.values()) == [1, 2, 5]


def test_missing_and_isolated():
    g = complete_graph(4)
    cg = ColoredSubgraph(g, {g.edge_index(0, 1): 2}, 3)
    assert cg.missing_colors() == [1, 3]
    assert cg.isolated_vertices() == [2, 3]


def test_inclusion_mass_reported_at_n256():
    params = ModelParams(n=256, d=255, epsilon=0.5)
    direct = params.p + sum(math.sqrt(math.log(256)) / (t * 256) for t in range(2, 170))
    assert params.inclusion_mass() == pytest.approx(direct)
    assert params.inclusion_bound() == pytest.approx(2.5 * math.log(256) / 255)
    assert params.inclusion_mass() > params.inclusion_bound()
