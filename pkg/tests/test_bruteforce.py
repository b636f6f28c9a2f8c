"""Self-checks for the reference oracles used elsewhere in the suite."""

import random
from itertools import combinations

from bruteforce import (
    count_components,
    has_rainbow_spanning_tree_bruteforce,
    min_cut_bruteforce,
    spanning_trees,
)


def test_cayley_formula():
    for n in range(2, 7):
        edges = list(combinations(range(n), 2))
        assert sum(1 for _ in spanning_trees(n, edges)) == n ** (n - 2)


def test_backtracking_matches_plain_enumeration():
    rnd = random.Random(1)
    for _ in range(300):
        n = rnd.randint(2, 6)
        edges = [e for e in combinations(range(n), 2) if rnd.random() < 0.7]
        palette = rnd.randint(1, 6)
        colored = [(a, b, rnd.randint(1, palette)) for a, b in edges]
        plain = any(
            len({colored[i][2] for i in t}) == n - 1 for t in spanning_trees(n, edges)
        )
        assert has_rainbow_spanning_tree_bruteforce(n, colored) == plain


def test_small_reference_values():
    assert min_cut_bruteforce(4, list(combinations(range(4), 2))) == 3
    assert count_components(5, [(0, 1), (2, 3)]) == 3
