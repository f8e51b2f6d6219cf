"""
Tests for König branches, greedy monochromatic cliques, 3-term progressions
and the coloring file readers.
Run with: pytest test_ramsey.py
"""
import itertools
import random
import sys
from pathlib import Path

import numpy as np
import pytest

# Ensure the project root is on sys.path
PROJECT_ROOT = Path(__file__).resolve().parent
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

import config
from modules import prcalc, ramsey
from modules.errors import InvalidInputError, PreconditionError, ResourceLimitExceeded, SpecSyntaxError

SCHUR = prcalc.Linear((1, 1, -1))
THREE_AP = prcalc.Linear((1, -2, 1))


def naive_3ap(colors):
    N = len(colors)
    for a in range(1, N + 1):
        for d in range(1, N):
            if a + 2 * d > N:
                break
            if colors[a - 1] == colors[a + d - 1] == colors[a + 2 * d - 1]:
                return a, d
    return None


# -------------------------- König --------------------------- #

def test_koenig_path():
    t = ramsey.LevelTree(((1,), (2,), (3,)), {2: 1, 3: 2})
    assert ramsey.koenig_branch(t) == [1, 2, 3]


def test_koenig_binary_tree():
    levels = (("0", "1"), ("00", "01", "10", "11"), ("000", "001", "010", "011", "100", "101", "110", "111"))
    parent = {node: node[:-1] for level in levels[1:] for node in level}
    assert ramsey.koenig_branch(ramsey.LevelTree(levels, parent)) == ["0", "00", "000"]


def test_koenig_comb_follows_the_spine():
    levels = (("s1",), ("t1", "s2"), ("s3",))
    parent = {"t1": "s1", "s2": "s1", "s3": "s2"}
    assert ramsey.koenig_branch(ramsey.LevelTree(levels, parent)) == ["s1", "s2", "s3"]


def test_koenig_rejects_bad_trees():
    with pytest.raises(PreconditionError):
        ramsey.koenig_branch(ramsey.LevelTree(((1,), ()), {}))
    with pytest.raises(PreconditionError):
        ramsey.koenig_branch(ramsey.LevelTree((), {}))
    with pytest.raises(InvalidInputError):
        ramsey.LevelTree(((1,), (2,)), {2: 7})


def test_avoidance_tree_schur():
    t = ramsey.avoidance_tree(SCHUR, 2, 6)
    assert t.depth == 4
    branch = ramsey.koenig_branch(t)
    assert branch == [(1,), (1, 2), (1, 2, 2), (1, 2, 2, 1)]
    assert branch[-1] == prcalc.search_avoiding_coloring(SCHUR, 2, 4).assign


def test_avoidance_tree_progressions():
    t = ramsey.avoidance_tree(THREE_AP, 2, 12, injective=True)
    assert t.depth == 8
    longest = prcalc.Coloring.of(ramsey.koenig_branch(t)[-1], 2)
    assert ramsey.find_mono_3ap(longest) is None
    for level in t.levels:
        for node in level:
            assert naive_3ap(node) is None


def test_avoidance_tree_node_cap():
    with pytest.raises(ResourceLimitExceeded):
        ramsey.avoidance_tree(THREE_AP, 2, 8, True, config.load_limits(max_search_nodes=10))


# -------------------------- Greedy cliques --------------------------- #

def test_greedy_constant_coloring():
    pc = ramsey.PairColoring.from_function(8, 2, lambda i, j: 1)
    H, color = ramsey.ramsey_greedy(pc)
    assert color == 1 and len(H) >= 4
    assert ramsey.is_monochromatic(pc, H)


def test_greedy_parity_coloring():
    pc = ramsey.PairColoring.from_function(16, 2, lambda i, j: 1 if (i - j) % 2 == 0 else 2)
    H, color = ramsey.ramsey_greedy(pc)
    assert H == [2, 4, 6, 8, 10, 12, 14, 16] and color == 1
    assert ramsey.is_monochromatic(pc, H)


def test_greedy_two_points():
    pc = ramsey.PairColoring.from_triples(2, 2, [(1, 2, 2)])
    assert ramsey.ramsey_greedy(pc) == ([1, 2], 2)


def test_greedy_on_random_colorings():
    rng = np.random.default_rng(1024)
    for _ in range(200):
        N = 1024
        upper = np.triu(rng.integers(1, 3, size=(N + 1, N + 1)), 1)
        pc = ramsey.PairColoring(N, 2, upper + upper.T)
        H, color = ramsey.ramsey_greedy(pc)
        assert len(H) >= 5
        assert ramsey.is_monochromatic(pc, H)
        assert all(pc.color(a, b) == color for a, b in itertools.combinations(H, 2))


def test_pair_coloring_validation():
    with pytest.raises(PreconditionError):
        ramsey.PairColoring(1, 2, np.zeros((2, 2), dtype=int))
    with pytest.raises(InvalidInputError):
        ramsey.PairColoring.from_triples(3, 2, [(1, 2, 1), (1, 3, 1)])
    with pytest.raises(InvalidInputError):
        ramsey.PairColoring.from_triples(3, 2, [(1, 2, 1), (1, 3, 3), (2, 3, 1)])
    pc = ramsey.PairColoring.from_triples(3, 2, [(1, 2, 1), (1, 3, 2), (2, 3, 1)])
    with pytest.raises(InvalidInputError):
        pc.color(2, 2)
    with pytest.raises(ValueError):
        pc.matrix[1, 2] = 2


# -------------------------- 3-term progressions --------------------------- #

def test_find_mono_3ap_examples():
    assert ramsey.find_mono_3ap(prcalc.Coloring.of([1, 1, 1])) == (1, 1)
    assert ramsey.find_mono_3ap(prcalc.Coloring.of([1, 2, 1, 2, 1])) == (1, 2)
    assert ramsey.find_mono_3ap(prcalc.Coloring.of([1, 1, 2, 2, 1, 1, 2, 2])) is None
    assert ramsey.find_mono_3ap(prcalc.Coloring.of([1, 2])) is None


def test_every_two_coloring_of_nine_has_a_progression():
    for colors in itertools.product((1, 2), repeat=9):
        assert ramsey.find_mono_3ap(prcalc.Coloring.of(colors, 2)) is not None
    assert any(ramsey.find_mono_3ap(prcalc.Coloring.of(colors, 2)) is None
               for colors in itertools.product((1, 2), repeat=8))


def test_find_mono_3ap_matches_naive_and_equation_search():
    rng = random.Random(3)
    for _ in range(500):
        N = rng.randint(1, 20)
        col = prcalc.Coloring.of([rng.randint(1, 3) for _ in range(N)], 3)
        found = ramsey.find_mono_3ap(col)
        assert found == naive_3ap(col.assign)
        solution = prcalc.find_mono_solution(THREE_AP, col, injective=True)
        if found is None:
            assert solution is None
        else:
            a, d = found
            assert solution == (a, a + d, a + 2 * d)


# -------------------------- Coloring files --------------------------- #

def test_read_coloring():
    col = ramsey.read_coloring("# RBBR\n1\n2\n\n2  # third\n1\n")
    assert col.assign == (1, 2, 2, 1) and col.r == 2
    assert ramsey.read_coloring(["1", "1"], r=3).r == 3
    with pytest.raises(SpecSyntaxError):
        ramsey.read_coloring("1\nx\n")
    with pytest.raises(SpecSyntaxError):
        ramsey.read_coloring("# nothing\n")


def test_read_pair_coloring():
    pc = ramsey.read_pair_coloring("1 2 1\n1 3 2\n# comment\n2 3 1\n")
    assert pc.N == 3 and pc.r == 2
    assert pc.color(3, 1) == 2
    with pytest.raises(SpecSyntaxError):
        ramsey.read_pair_coloring("1 2\n")
    with pytest.raises(SpecSyntaxError):
        ramsey.read_pair_coloring("1 2 b\n")
    with pytest.raises(InvalidInputError):
        ramsey.read_pair_coloring("1 2 1\n2 3 1\n")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
