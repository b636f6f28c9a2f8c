import random

import pytest

from rainbowtree.graph_model import Graph, complete_graph
from rainbowtree.random_model import ColoredSubgraph
from rainbowtree.rainbow_engine import (
    GuardExceeded,
    has_rainbow_spanning_tree,
    max_rainbow_forest_exact,
    schrijver_suzuki_decide,
)

from bruteforce import has_rainbow_spanning_tree_bruteforce, max_rainbow_forest_bruteforce
from instances import as_triples, random_colored


def test_single_color_gives_one_edge():
    g = complete_graph(5)
    cg = ColoredSubgraph(g, {e: 1 for e in range(g.m)}, 4)
    assert len(max_rainbow_forest_exact(cg)) == 1
    assert not schrijver_suzuki_decide(cg)


def test_proper_coloring_k4():
    # 1-factorization of K4: opposite edges share a color
    g = complete_graph(4)
    col = {}
    for a, b, c in [(0, 1, 1), (2, 3, 1), (0, 2, 2), (1, 3, 2), (0, 3, 3), (1, 2, 3)]:
        col[g.edge_index(a, b)] = c
    cg = ColoredSubgraph(g, col, 3)
    assert has_rainbow_spanning_tree_bruteforce(4, as_triples(cg))
    assert len(max_rainbow_forest_exact(cg)) == 3
    assert has_rainbow_spanning_tree(cg)


def test_schrijver_examples():
    k3 = complete_graph(3)
    assert schrijver_suzuki_decide(ColoredSubgraph(k3, {0: 1, 1: 2, 2: 3}, 3))
    path = Graph(3, [(0, 1), (1, 2)])
    assert not schrijver_suzuki_decide(ColoredSubgraph(path, {0: 1, 1: 1}, 2))


def test_schrijver_guard():
    g = complete_graph(9)
    cg = ColoredSubgraph(g, {e: e + 1 for e in range(g.m)}, g.m)
    with pytest.raises(GuardExceeded):
        schrijver_suzuki_decide(cg)


def test_exact_size_matches_bruteforce():
    rnd = random.Random(12)
    for _ in range(200):
        cg = random_colored(rnd, n_lo=2, n_hi=7, palette_hi=6)
        f = max_rainbow_forest_exact(cg)
        f.check()
        assert all(cg.colors[e] == c for e, c in f.colors.items())
        assert len(f) == max_rainbow_forest_bruteforce(cg.n, as_triples(cg))


def test_pool_interface_and_start():
    g = complete_graph(5)
    pool = {e: (e % 4) + 1 for e in range(g.m)}
    a = max_rainbow_forest_exact(host=g, pool=pool)
    b = max_rainbow_forest_exact(ColoredSubgraph(g, pool, 4))
    assert len(a) == len(b) == 4
    with pytest.raises(TypeError):
        max_rainbow_forest_exact()


def test_disconnected_shortcut():
    g = Graph(4, [(0, 1), (2, 3)])
    assert not has_rainbow_spanning_tree(ColoredSubgraph(g, {0: 1, 1: 2}, 3))
