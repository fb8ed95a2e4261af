"""
정확한 MAX 솔버 테스트 (MC, FC, 순서 휴리스틱, 축소)
"""

import sys
from pathlib import Path

import pytest
from pydantic import ValidationError

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.reduce import MapProblem, map_to_max
from src.solver import (
    ExactSolver,
    SearchConfig,
    SolveStatus,
    best_tree,
    choose_variable,
    forward_checking,
    forward_checking_table,
    marginal_checking,
    max_exact,
    order_values,
    stage_reduce,
)
from src.spn import PartialEvidence, brute_force_max, evaluate, parse_spn, random_spn, score

CONFIGS = [
    SearchConfig(pruning="mc"),
    SearchConfig(pruning="fc"),
    SearchConfig(pruning="fc", ordering=True),
    SearchConfig(pruning="fc", ordering=True, staging=True),
]


def _space(spn, allowed):
    return PartialEvidence.from_values(spn.variables, allowed)


class TestPruning:
    """가지치기 검사기 테스트"""

    def test_marginal_keeps(self, spn_a):
        space = _space(spn_a, {0: [0]})
        assert marginal_checking(spn_a, space, 0.378) == space

    def test_marginal_prunes(self, spn_a):
        space = _space(spn_a, {0: [1], 1: [1]})
        assert marginal_checking(spn_a, space, 0.378).is_empty

    def test_marginal_minus_infinity(self, spn_a):
        space = PartialEvidence.full(spn_a.variables)
        assert marginal_checking(spn_a, space, float("-inf")) == space

    def test_forward_prunes_to_empty(self, spn_a):
        """X1=1 (0.218) 제거 후 X1=0 (0.242) 제거"""
        space = _space(spn_a, {0: [0]})
        assert forward_checking(spn_a, space, 0.378).is_empty

    def test_forward_keeps_full_space(self, spn_a):
        space = PartialEvidence.full(spn_a.variables)
        assert forward_checking(spn_a, space, 0.378) == space

    def test_forward_minus_infinity(self, spn_a):
        space = PartialEvidence.full(spn_a.variables)
        assert forward_checking(spn_a, space, float("-inf")) == space

    def test_equality_handling(self):
        """MC는 S > best일 때만 유지, FC는 best ≥ D_x이면 제거"""
        spn = parse_spn("SPN 1\nL 0 0\nL 0 1\nS 0 0.25 1 0.75\n")
        space = PartialEvidence.full(spn.variables)
        assert forward_checking(spn, space, 0.25).values(0) == [1]
        assert marginal_checking(spn, space, 1.0).is_empty

    def test_tie_kept_only_below_incumbent(self):
        """동점 공간은 사전순으로 더 작은 할당을 담을 때만 남는다"""
        spn = parse_spn("SPN 1\nL 0 0\nL 0 1\nS 0 0.5 1 0.5\n")
        space = PartialEvidence.full(spn.variables)
        assert forward_checking_table(spn, space, 0.5, incumbent=(1,))[0].values(0) == [0]
        assert forward_checking_table(spn, space, 0.5, incumbent=(0,))[0].is_empty
        only_one = _space(spn, {0: [1]})
        assert marginal_checking(spn, only_one, 0.5, incumbent=(0,)).is_empty
        assert marginal_checking(spn, _space(spn, {0: [0]}), 0.5, incumbent=(1,)).values(0) == [0]

    @pytest.mark.parametrize("seed", range(6))
    def test_forward_never_removes_better_values(self, seed):
        """최고 점수보다 엄격히 좋은 할당을 가진 값은 남는다"""
        spn = random_spn(6, seed=seed)
        best = brute_force_max(spn)
        threshold = best.score * 0.9
        pruned = forward_checking(spn, PartialEvidence.full(spn.variables), threshold)
        assert pruned.contains(best.assignment)


class TestOrdering:
    """변수/값 순서 휴리스틱 테스트"""

    def test_choose_variable_skips_determined(self, spn_a):
        space = _space(spn_a, {1: [0]})
        assert choose_variable(space) == 0

    def test_choose_variable_fewest_values(self):
        spn = parse_spn("SPN 2\nCARD 0 3\nL 0 0\nL 0 1\nL 0 2\nS 0 0.2 1 0.3 2 0.5\nL 1 0\nL 1 1\nS 4 0.5 5 0.5\nP 3 6\n")
        assert choose_variable(PartialEvidence.full(spn.variables)) == 1

    def test_choose_variable_all_determined(self, spn_a):
        with pytest.raises(ValueError):
            choose_variable(PartialEvidence.from_assignment(spn_a.variables, (1, 0)))

    def test_order_values(self, spn_a):
        assert order_values(spn_a, PartialEvidence.full(spn_a.variables), 1) == [0, 1]
        assert order_values(spn_a, PartialEvidence.full(spn_a.variables), 0) == [1, 0]

    def test_order_values_tie(self):
        spn = parse_spn("SPN 1\nL 0 0\nL 0 1\nS 0 0.5 1 0.5\n")
        assert order_values(spn, PartialEvidence.full(spn.variables), 0) == [0, 1]


class TestStaging:
    """축소 테스트"""

    def test_stage_reduce_matches_map_to_max(self, spn_a):
        staged = stage_reduce(spn_a, {0: 1})
        reduced = map_to_max(spn_a, MapProblem.create([1], {0: 1}))
        assert staged == reduced
        assert len(staged) == len(spn_a) - 4
        for x1 in (0, 1):
            full = evaluate(spn_a, _space(spn_a, {0: [1], 1: [x1]}))
            assert score(staged, (1, x1)) == pytest.approx(full)

    def test_stage_reduce_requires_determined(self, spn_a):
        with pytest.raises(ValueError):
            stage_reduce(spn_a, {})

    @pytest.mark.parametrize("seed", range(10))
    def test_staged_equals_unstaged(self, seed):
        spn = random_spn(10, seed=seed)
        plain = max_exact(spn, SearchConfig(pruning="fc", ordering=True))
        staged = max_exact(spn, SearchConfig(pruning="fc", ordering=True, staging=True, stage_interval=2))
        assert staged.score == pytest.approx(plain.score, rel=1e-12)

    def test_staging_happens(self):
        reductions = 0
        for seed in range(3):
            spn = random_spn(10, seed=seed)
            config = SearchConfig(ordering=True, staging=True, stage_interval=1, initializer="first")
            reductions += max_exact(spn, config).stats.stage_reductions
        assert reductions > 0


class TestMaxExact:
    """정확한 솔버 종단 테스트"""

    @pytest.mark.parametrize("config", CONFIGS, ids=lambda c: c.label)
    def test_spn_a(self, spn_a, config):
        result = max_exact(spn_a, config)
        assert result.status is SolveStatus.FINISHED
        assert result.assignment == (1, 0)
        assert result.score == pytest.approx(0.378)

    @pytest.mark.parametrize("config", CONFIGS, ids=lambda c: c.label)
    def test_single_indicator(self, single_indicator, config):
        result = max_exact(single_indicator, config)
        assert result.assignment == (0,)
        assert result.score == 1.0

    @pytest.mark.parametrize("initializer", ["first", "random", "bt"])
    def test_initializers(self, spn_a, initializer):
        result = max_exact(spn_a, SearchConfig(initializer=initializer, seed=3))
        assert result.score == pytest.approx(0.378)

    def test_zero_budget_returns_initializer(self, spn_a):
        """예산 0이면 초기화 할당만 반환"""
        result = max_exact(spn_a, SearchConfig(budget=0))
        assert result.status is SolveStatus.TIMEOUT_WITH_RESULT
        assert result.assignment == best_tree(spn_a).assignment == (1, 0)
        assert result.score == pytest.approx(0.378)

    @pytest.mark.parametrize("seed", range(200))
    def test_matches_brute_force(self, seed):
        """변수 6~12개 무작위 SPN 200개에서 모든 구성이 전수 탐색과 같은 할당"""
        spn = random_spn(6 + seed % 7, seed=seed)
        expected = brute_force_max(spn)
        for config in CONFIGS:
            result = max_exact(spn, config)
            assert result.finished
            assert result.score == pytest.approx(expected.score, rel=1e-12)
            assert result.score == score(spn, result.assignment)
            assert result.assignment == expected.assignment

    @pytest.mark.parametrize("seed", range(50))
    def test_anytime_budgets(self, seed):
        """예산 0, 10ms, 무제한 순으로 점수가 줄지 않고 무제한은 전수 탐색과 같다"""
        spn = random_spn(8 + seed % 5, seed=1000 + seed)
        config = SearchConfig(pruning="fc", ordering=True, staging=True)
        zero, short, unlimited = (
            max_exact(spn, config.model_copy(update={"budget": budget})) for budget in (0, 0.01, None)
        )
        initial = best_tree(spn)
        assert zero.status is SolveStatus.TIMEOUT_WITH_RESULT
        assert zero.assignment == initial.assignment
        assert zero.score == pytest.approx(initial.score, rel=1e-12)
        assert zero.score <= short.score <= unlimited.score * (1 + 1e-12)
        assert unlimited.finished
        assert unlimited.score == pytest.approx(brute_force_max(spn).score, rel=1e-12)

    @pytest.mark.parametrize("config", CONFIGS, ids=lambda c: c.label)
    def test_tie_picks_smallest_assignment(self, config):
        """독립된 균등 변수 둘: 네 할당이 모두 0.25"""
        spn = parse_spn("SPN 2\nL 0 1\nL 0 0\nS 0 0.5 1 0.5\nL 1 1\nL 1 0\nS 3 0.5 4 0.5\nP 2 5\n")
        result = max_exact(spn, config)
        assert result.finished
        assert result.assignment == brute_force_max(spn).assignment == (0, 0)
        assert result.score == 0.25

    @pytest.mark.parametrize("config", CONFIGS, ids=lambda c: c.label)
    def test_tie_against_initializer(self, config):
        """초기 할당 (1, 1)과 점수가 같은 (0, 0)으로 교체"""
        spn = parse_spn("SPN 2\nL 0 0\nL 1 0\nP 0 1\nL 0 1\nL 1 1\nP 3 4\nP 3 1\nS 2 0.4 5 0.4 6 0.2\n")
        solver = ExactSolver(spn, config)
        solver.initial_assignment = lambda: (1, 1)
        result = solver.solve()
        assert result.finished
        assert result.assignment == (0, 0)
        assert result.score == 0.4

    @pytest.mark.parametrize("config", CONFIGS, ids=lambda c: c.label)
    def test_zero_mass_tie(self, config):
        """모든 할당이 0이면 사전순 최소 할당"""
        spn = parse_spn("SPN 2\nL 0 0\nL 0 1\nS 0 0 1 0\nL 1 0\nL 1 1\nS 3 0 4 0\nP 2 5\n")
        result = max_exact(spn, config)
        assert result.assignment == (0, 0)
        assert result.score == 0.0
        assert result.zero_mass

    @pytest.mark.parametrize("seed", range(5))
    def test_reduced_spn(self, seed):
        """스코프 밖 변수는 0으로 고정"""
        spn = random_spn(8, seed=seed)
        reduced = map_to_max(spn, MapProblem.create([0, 1, 2], {3: 1, 4: 0}, [5, 6, 7]))
        expected = brute_force_max(reduced)
        result = max_exact(reduced, SearchConfig(ordering=True, staging=True))
        assert result.score == pytest.approx(expected.score, rel=1e-12)
        assert result.assignment[3:] == (0, 0, 0, 0, 0)
        assert result.stats.defaulted_variables == 5

    @pytest.mark.parametrize("seed", range(5))
    def test_deterministic(self, seed):
        spn = random_spn(8, seed=seed)
        config = SearchConfig(ordering=True, staging=True, initializer="random", seed=seed)
        first, second = max_exact(spn, config), max_exact(spn, config)
        assert first.assignment == second.assignment
        assert first.score == second.score
        assert first.stats == second.stats

    @pytest.mark.parametrize("seed", range(6))
    def test_fc_dominates_mc(self, seed):
        """MC가 비우는 공간은 FC도 비운다"""
        spn = random_spn(8, seed=seed)
        calls = []
        max_exact(spn, SearchConfig(pruning="mc", initializer="first"),
                  listener=lambda s, space, best: calls.append((s, space, best)))
        assert calls
        for current, space, best in calls:
            # 같은 값을 다른 순서로 더한 반올림 차이는 제외
            if evaluate(current, space) < best * (1 - 1e-9):
                assert forward_checking(current, space, best).is_empty

    def test_incumbent_not_below_initializer(self):
        spn = random_spn(12, seed=7)
        initial = best_tree(spn).score
        result = max_exact(spn, SearchConfig(budget=0.001))
        assert result.has_result
        assert result.score >= initial

    def test_solver_statistics(self, spn_a):
        solver = ExactSolver(spn_a, SearchConfig(pruning="fc", initializer="first"))
        result = solver.solve()
        assert result.stats.nodes_expanded > 0
        assert result.stats.fc_passes > 0
        assert result.stats.incumbent_updates >= 1


class TestSearchConfig:
    """구성 검증 테스트"""

    def test_labels(self):
        assert [c.label for c in CONFIGS] == ["mc", "fc", "fc+o", "fc+o+s"]

    def test_defaults(self):
        config = SearchConfig()
        assert config.pruning == "fc"
        assert config.initializer == "bt"
        assert config.stage_interval == 4

    @pytest.mark.parametrize("field,value", [
        ("stage_interval", 0),
        ("budget", -1.0),
        ("pruning", "xx"),
        ("initializer", "greedy"),
    ])
    def test_invalid(self, field, value):
        with pytest.raises(ValidationError):
            SearchConfig(**{field: value})
