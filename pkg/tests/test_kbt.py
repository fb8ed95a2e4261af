"""
K-Best Tree 테스트
"""

import itertools
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.solver import (
    Deadline,
    SolveStatus,
    TopKList,
    best_tree,
    k_best_trees,
    merge_product,
    merge_sum,
    top_k_lists,
)
from src.solver.kbt import backtrack
from src.spn import brute_force_max, count_parse_trees, enumerate_parse_trees, random_spn


def _random_list(rng, size):
    values = sorted((float(v) for v in rng.uniform(0.0, 1.0, size=size)), reverse=True)
    return TopKList(values, [None] * size)


class TestMerges:
    """TopKList 병합 테스트"""

    @pytest.mark.parametrize("seed", range(10))
    def test_merge_sum_matches_sort(self, seed):
        rng = np.random.default_rng(seed)
        lists = [_random_list(rng, int(rng.integers(1, 6))) for _ in range(4)]
        weights = [float(w) for w in rng.uniform(0.0, 1.0, size=4)]
        k = int(rng.integers(1, 10))

        merged = merge_sum(lists, weights, k)
        naive = sorted((w * v for l, w in zip(lists, weights) for v in l.values), reverse=True)[:k]
        assert merged.values == pytest.approx(naive)

    @pytest.mark.parametrize("seed", range(10))
    def test_merge_product_matches_sort(self, seed):
        rng = np.random.default_rng(seed)
        lists = [_random_list(rng, int(rng.integers(1, 5))) for _ in range(3)]
        k = int(rng.integers(1, 12))

        merged = merge_product(lists, k)
        products = [a * b * c for a, b, c in itertools.product(*(l.values for l in lists))]
        assert merged.values == pytest.approx(sorted(products, reverse=True)[:k])
        for value, ranks in zip(merged.values, merged.provenance):
            expected = 1.0
            for child, rank in zip(lists, ranks):
                expected *= child.values[rank]
            assert value == pytest.approx(expected)

    def test_merge_sum_keeps_duplicates(self):
        """다중집합: 같은 값도 모두 남긴다"""
        lists = [TopKList([0.5], [None]), TopKList([0.5], [None])]
        merged = merge_sum(lists, [1.0, 1.0], 3)
        assert merged.values == [0.5, 0.5]
        assert merged.provenance == [(0, 0), (1, 0)]

    def test_leaf(self):
        leaf = TopKList.leaf()
        assert leaf.values == [1.0]
        assert len(leaf) == 1


class TestKBestTrees:
    """KBT 솔버 테스트"""

    def test_spn_a_k2(self, spn_a):
        lists = top_k_lists(spn_a, 2)
        assert lists[spn_a.root].values == pytest.approx([0.288, 0.21])
        assert [backtrack(spn_a, lists, rank) for rank in range(2)] == [(1, 0), (0, 1)]

        result = k_best_trees(spn_a, 2)
        assert result.assignment == (1, 0)
        assert result.score == pytest.approx(0.378)
        assert result.stats.candidates == 2

    def test_spn_a_saturated(self, spn_a):
        result = k_best_trees(spn_a, 8)
        assert result.score == pytest.approx(brute_force_max(spn_a).score)

    def test_k1_equals_best_tree(self, spn_a):
        kbt, bt = k_best_trees(spn_a, 1), best_tree(spn_a)
        assert kbt.assignment == bt.assignment
        assert kbt.score == bt.score

    def test_single_indicator(self, single_indicator):
        assert k_best_trees(single_indicator, 3).score == 1.0

    def test_invalid_k(self, spn_a):
        with pytest.raises(ValueError):
            k_best_trees(spn_a, 0)

    def test_expired_deadline(self, spn_a):
        result = k_best_trees(spn_a, 4, Deadline(0))
        assert result.status is SolveStatus.TIMEOUT_NO_RESULT
        assert result.score == float("-inf")

    @pytest.mark.parametrize("seed", range(8))
    def test_root_list_matches_enumeration(self, seed):
        spn = random_spn(5, seed=seed)
        k = 6
        expected = sorted((t.value for t in enumerate_parse_trees(spn)), reverse=True)[:k]
        assert top_k_lists(spn, k)[spn.root].values == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("seed", range(8))
    def test_monotone_in_k(self, seed):
        """K가 커지면 후보가 늘기만 하므로 점수가 줄지 않는다"""
        spn = random_spn(8, seed=seed)
        scores = [k_best_trees(spn, k).score for k in (1, 2, 5, 10, 50)]
        assert scores == sorted(scores)
        assert scores[0] == best_tree(spn).score

    @pytest.mark.parametrize("seed", range(5))
    def test_candidates_are_prefix(self, seed):
        spn = random_spn(7, seed=seed)
        small, large = top_k_lists(spn, 3), top_k_lists(spn, 9)
        small_trees = [backtrack(spn, small, r) for r in range(len(small[spn.root]))]
        large_trees = [backtrack(spn, large, r) for r in range(len(large[spn.root]))]
        assert large_trees[:len(small_trees)] == small_trees

    @pytest.mark.parametrize("seed", range(50))
    def test_exact_at_saturation(self, seed):
        spn = random_spn(5, seed=seed)
        result = k_best_trees(spn, count_parse_trees(spn))
        assert result.score == pytest.approx(brute_force_max(spn).score, rel=1e-12)
