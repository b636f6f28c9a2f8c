import math
import random

import pytest

from rainbowtree.graph_model import Graph, circulant_graph, complete_graph
from rainbowtree.random_model import ColoredSubgraph, ModelParams, RandomStream, build_exposure_stack
from rainbowtree.rainbow_engine import build_initial_forest
from rainbowtree.lemma_checks import (
    CheckReport,
    check_color_hit,
    check_cut_sparsity,
    check_straddle,
    color_hit_count,
)


def test_cuts_empty_kept():
    g = complete_graph(6)
    rep = check_cut_sparsity(g, [])
    assert rep.violations == 0
    assert rep.instances_checked == 2 ** 5 - 1
    assert rep.worst_margin == 2.5  # smallest cut of K6 is a star of 5 edges


def test_cuts_all_kept_violates_everything():
    g = complete_graph(6)
    rep = check_cut_sparsity(g, range(g.m))
    assert rep.violations == rep.instances_checked == 31


def test_cuts_exhaustive_guard_and_policy():
    with pytest.raises(ValueError):
        check_cut_sparsity(complete_graph(21), [])
    with pytest.raises(ValueError):
        check_cut_sparsity(complete_graph(5), [], policy="sampled")
    with pytest.raises(ValueError):
        check_cut_sparsity(complete_graph(5), [], policy="bogus")


def test_cuts_sampled_counts_and_hypothesis():
    g = complete_graph(12)
    rep = check_cut_sparsity(g, [], "sampled", 50, RandomStream(1), include_singletons=True, p=0.1)
    assert rep.instances_checked == 62
    assert rep.hypothesis_held is True


def test_cuts_circulant16_monte_carlo():
    g = circulant_graph(16, [1, 2, 3, 4])
    params = ModelParams(n=16, d=8, epsilon=0.5)
    total = CheckReport("cuts")
    for seed in range(100):
        stack = build_exposure_stack(g, params, seed)
        kept = list(stack.layers[0].colors)
        total = total.merge(check_cut_sparsity(g, kept, "sampled", 1000, RandomStream(seed, 99)))
    assert total.instances_checked == 100_000
    # reported, not asserted as a bound: at n=16 the a.a.s. claim has no force
    assert 0.0 <= total.violation_rate <= 1.0


def test_straddle_examples():
    k8 = complete_graph(8)
    halves = [0] * 4 + [1] * 4
    rep = check_straddle(k8, [], halves)
    assert rep.violations == 0
    assert rep.worst_margin == 16 - 7 * 2 / 4
    single = check_straddle(k8, [], list(range(8)))
    assert single.worst_margin == 28 - 7 * 8 / 4
    with pytest.raises(ValueError):
        check_straddle(k8, [], [0] * 8)


def test_straddle_hypothesis_flag():
    k4 = complete_graph(4)
    rep = check_straddle(k4, range(k4.m), [0, 0, 1, 1])
    assert rep.hypothesis_held is False
    assert rep.violations == 1


def test_straddle_on_driver_forest_components():
    g = complete_graph(64)
    params = ModelParams(n=64, d=63)
    violations = 0
    for seed in range(20):
        stack = build_exposure_stack(g, params, seed)
        f = build_initial_forest(stack.layers[0])
        if f.n_components < 2:
            continue
        rep = check_straddle(g, [], f.component_labels(), 63)
        violations += rep.violations
    assert violations == 0


def test_color_hit_examples():
    g = complete_graph(8)
    cg = ColoredSubgraph(g, {e: (e % 3) + 1 for e in range(g.m)}, 4)
    all_present = sorted(cg.present_colors())
    assert color_hit_count(cg, all_present) == 8
    rep = check_color_hit(cg, [4], 0.5)
    assert rep.violations == 1
    assert rep.worst_margin == pytest.approx(-math.log(8) / 0.5)
    with pytest.raises(ValueError):
        check_color_hit(cg, [1, 2, 3], 3.0)


def test_checkers_do_not_mutate():
    g = complete_graph(6)
    kept = [0, 3, 7]
    labels = [0, 0, 1, 1, 2, 2]
    check_cut_sparsity(g, kept)
    check_straddle(g, kept, labels)
    assert kept == [0, 3, 7] and labels == [0, 0, 1, 1, 2, 2]


def test_report_merge_and_csv():
    a = CheckReport("x", 3, 1, 0.5, True)
    b = CheckReport("x", 2, 0, -1.0, None)
    m = a.merge(b)
    assert (m.instances_checked, m.violations, m.worst_margin, m.hypothesis_held) == (5, 1, -1.0, True)
    assert m.csv_row() == "x,5,1,-1"
    assert m.violation_rate == 0.2


def test_straddle_hypothesis_matches_naive():
    rnd = random.Random(5)
    g = complete_graph(9)
    for _ in range(200):
        labels = [rnd.randint(0, 3) for _ in range(9)]
        if len(set(labels)) < 2:
            continue
        excluded = [e for e in range(g.m) if rnd.random() < 0.4]
        ex = set(excluded)
        naive = True
        for b in set(labels):
            boundary = [e for e, (a, c) in enumerate(g.edges) if (labels[a] == b) != (labels[c] == b)]
            if sum(e in ex for e in boundary) > len(boundary) / 2:
                naive = False
        assert check_straddle(g, excluded, labels, 8).hypothesis_held == naive


def test_cut_counts_match_direct_enumeration():
    rnd = random.Random(2)
    for _ in range(50):
        n = rnd.randint(2, 9)
        g = Graph(n, [(a, b) for a in range(n) for b in range(a + 1, n) if rnd.random() < 0.6])
        kept = {e for e in range(g.m) if rnd.random() < 0.3}
        rep = check_cut_sparsity(g, sorted(kept))
        worst, violations = math.inf, 0
        for mask in range(1, 1 << (n - 1)):
            side = [(mask >> i) & 1 for i in range(n - 1)] + [0]
            cut = [e for e, (a, b) in enumerate(g.edges) if side[a] != side[b]]
            hit = sum(e in kept for e in cut)
            worst = min(worst, len(cut) / 2 - hit)
            violations += hit > len(cut) / 2
        assert rep.violations == violations
        assert rep.worst_margin == worst
