"""
근사 솔버 테스트 (BT, NG, AMAP, BS)
"""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.reduce import MapProblem, bn_to_spn, map_to_max, random_tree_bn
from src.solver import (
    BeamSearch,
    Deadline,
    SolveStatus,
    argmax_product,
    beam_search,
    best_tree,
    best_tree_value,
    k_best_trees,
    normalized_greedy,
)
from src.spn import brute_force_max, enumerate_parse_trees, parse_spn, random_spn, score
from tests.conftest import SPN_A_TEXT


class TestBestTree:
    """Best Tree 테스트"""

    def test_spn_a(self, spn_a):
        result = best_tree(spn_a)
        assert result.assignment == (1, 0)
        assert best_tree_value(spn_a) == pytest.approx(0.288)
        assert result.score == pytest.approx(0.378)
        assert result.status is SolveStatus.FINISHED

    def test_single_indicator(self, single_indicator):
        assert best_tree(single_indicator).score == 1.0

    def test_selective_chain(self, chain_bn):
        spn = bn_to_spn(chain_bn)
        assert best_tree(spn).score == brute_force_max(spn).score

    @pytest.mark.parametrize("seed", range(6))
    def test_tree_value_is_max(self, seed):
        """BT 트리 값 = 모든 파스 트리 값의 최댓값"""
        spn = random_spn(5, seed=seed)
        trees = enumerate_parse_trees(spn)
        assert best_tree_value(spn) == pytest.approx(max(t.value for t in trees), rel=1e-12)


class TestNormalizedGreedy:
    """Normalized Greedy 테스트"""

    def test_spn_a(self, spn_a):
        result = normalized_greedy(spn_a)
        assert result.assignment == (0, 1)
        assert result.score == pytest.approx(0.218)

    def test_single_indicator(self, single_indicator):
        assert normalized_greedy(single_indicator).score == 1.0

    def test_swapped_root_weights(self):
        spn = parse_spn(SPN_A_TEXT.replace("S 8 0.4 9 0.6", "S 8 0.7 9 0.3"))
        result = normalized_greedy(spn)
        assert result.assignment == (1, 0)
        assert result.score == score(spn, (1, 0))

    def test_zero_weight_sum(self):
        spn = parse_spn("SPN 1\nL 0 0\nL 0 1\nS 0 0.0 1 0.0\n")
        result = normalized_greedy(spn)
        assert result.assignment == (0,)
        assert result.score == 0.0
        assert result.zero_mass
        assert result.stats.zero_weight_sums == 1


class TestArgmaxProduct:
    """AMAP 테스트"""

    def test_spn_a(self, spn_a):
        result = argmax_product(spn_a)
        assert result.assignment == (1, 0)
        assert result.score == pytest.approx(0.378)

    def test_single_indicator(self, single_indicator):
        assert argmax_product(single_indicator).score == 1.0

    def test_selective_chain(self, chain_bn, chain3_bn):
        for bn in (chain_bn, chain3_bn):
            spn = bn_to_spn(bn)
            assert argmax_product(spn).score == pytest.approx(brute_force_max(spn).score)

    def test_defaults_out_of_scope_variables(self, spn_a):
        reduced = map_to_max(spn_a, MapProblem.create([1], {0: 1}))
        result = argmax_product(reduced)
        assert result.assignment == (0, 0)
        assert result.stats.defaulted_variables == 1
        assert result.score == pytest.approx(0.378)

    def test_expired_deadline(self, spn_a):
        result = argmax_product(spn_a, Deadline(0))
        assert result.status is SolveStatus.TIMEOUT_NO_RESULT
        assert result.assignment is None


class TestBeamSearch:
    """빔 탐색 테스트"""

    def test_spn_a_k1_from_zero(self, spn_a):
        """(0,0) → (1,0) 후 개선 없음"""
        result = beam_search(spn_a, 1, initial=[(0, 0)])
        assert result.assignment == (1, 0)
        assert result.score == pytest.approx(0.378)
        assert result.stats.rounds == 2

    def test_mutation_scores(self, spn_a):
        """한 라운드의 이웃 점수는 도함수 테이블 값"""
        search = BeamSearch(spn_a, 4)
        state = search.step(search.initial_state(None, "random", initial=[(0, 0)]))
        scores = dict(state.members)
        assert scores[(1, 0)] == pytest.approx(0.378)
        assert scores[(0, 1)] == pytest.approx(0.218)
        assert state.assignments[0] == (1, 0)

    def test_large_beam(self, spn_a):
        result = beam_search(spn_a, 4, seed=0)
        assert result.score == pytest.approx(0.378)

    def test_one_variable(self):
        spn = parse_spn("SPN 1\nL 0 0\nL 0 1\nS 0 0.2 1 0.8\n")
        for k in (1, 2, 5):
            result = beam_search(spn, k, initial=[(0,)])
            assert result.assignment == (1,)
            # 첫 라운드에서 최적, 두 번째 라운드는 종료 확인
            assert result.stats.rounds == 2

    def test_ng_init(self, spn_a):
        result = beam_search(spn_a, 1, init="ng", seed=0)
        assert result.score >= normalized_greedy(spn_a).score

    @pytest.mark.parametrize("seed", range(8))
    @pytest.mark.parametrize("k", [1, 3])
    def test_ng_assignment_in_initial_beam(self, seed, k):
        """NG 할당은 무작위 할당보다 점수가 낮아도 초기 빔에 남는다"""
        spn = random_spn(8, seed=seed)
        greedy = normalized_greedy(spn).assignment
        state = BeamSearch(spn, k).initial_state(seed, "ng")
        assert greedy in state.assignments
        assert len(state.members) <= k
        if k == 1:
            assert state.best[0] == greedy

    @pytest.mark.parametrize("seed", range(8))
    def test_ng_init_zero_budget(self, seed):
        spn = random_spn(8, seed=seed)
        greedy = normalized_greedy(spn)
        result = beam_search(spn, 1, seed=seed, init="ng", deadline=Deadline(0))
        assert result.status is SolveStatus.TIMEOUT_WITH_RESULT
        assert result.assignment == greedy.assignment
        assert result.score == pytest.approx(greedy.score, rel=1e-12)

    def test_same_seed_same_result(self):
        spn = random_spn(10, seed=3)
        first = beam_search(spn, 3, seed=11)
        second = beam_search(spn, 3, seed=11)
        assert first.assignment == second.assignment
        assert first.score == second.score

    def test_invalid_beam(self, spn_a):
        with pytest.raises(ValueError):
            beam_search(spn_a, 0)
        with pytest.raises(ValueError):
            beam_search(spn_a, 1, initial=[])

    def test_timeout_keeps_result(self, spn_a):
        result = beam_search(spn_a, 2, seed=0, deadline=Deadline(0))
        assert result.status is SolveStatus.TIMEOUT_WITH_RESULT
        assert result.has_result

    @pytest.mark.parametrize("seed", range(6))
    def test_never_worse_than_initial(self, seed):
        spn = random_spn(8, seed=seed)
        initial = (0,) * 8
        result = beam_search(spn, 2, initial=[initial])
        assert result.score >= score(spn, initial)
        assert result.stats.rounds <= 2 ** 8


class TestApproximateBounds:
    """모든 근사 솔버 공통 성질"""

    @pytest.mark.parametrize("seed", range(10))
    def test_scores_bounded_and_consistent(self, seed):
        spn = random_spn(8, seed=seed)
        optimum = brute_force_max(spn).score
        results = [
            best_tree(spn),
            normalized_greedy(spn),
            argmax_product(spn),
            beam_search(spn, 3, seed=seed),
            k_best_trees(spn, 5),
        ]
        for result in results:
            assert result.score <= optimum * (1 + 1e-12)
            assert result.score == score(spn, result.assignment)

    @pytest.mark.parametrize("seed", range(50))
    def test_selective_exactness(self, seed):
        """파스 트리가 할당마다 하나인 변수 4~8개 SPN에서 BT, AMAP, KBT1은 정확"""
        spn = bn_to_spn(random_tree_bn(4 + seed % 5, seed=seed))
        optimum = brute_force_max(spn).score
        assert best_tree(spn).score == pytest.approx(optimum, rel=1e-12)
        assert argmax_product(spn).score == pytest.approx(optimum, rel=1e-12)
        assert k_best_trees(spn, 1).score == pytest.approx(optimum, rel=1e-12)
