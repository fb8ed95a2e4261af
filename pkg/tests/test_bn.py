"""
트리 BN 파싱과 SPN 컴파일 테스트
"""

import itertools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.errors import BnError, SpnFormatError
from src.reduce import BnCompiler, TreeBn, bn_to_spn, parse_bn, random_tree_bn, serialize_bn
from src.spn import VariableTable, count_parse_trees, score, spn_stats, validate
from tests.conftest import CHAIN_BN_TEXT


class TestParseBn:
    """BN 텍스트 포맷 테스트"""

    def test_chain(self, chain_bn):
        assert chain_bn.num_vars == 2
        assert chain_bn.root == 0
        assert chain_bn.parents == (-1, 0)
        assert chain_bn.probability(0, 1) == 0.7
        assert chain_bn.probability(1, 1, parent_value=1) == 0.2
        assert chain_bn.probability(1, 1, parent_value=0) == 0.9
        assert chain_bn.num_parameters == 6

    def test_round_trip(self, chain_bn, chain3_bn):
        for bn in (chain_bn, chain3_bn):
            assert parse_bn(serialize_bn(bn)) == bn

    def test_unnormalized_row(self):
        with pytest.raises(BnError):
            parse_bn(CHAIN_BN_TEXT.replace("0.1 0.9", "0.2 0.9"))

    def test_missing_root(self):
        with pytest.raises(BnError):
            parse_bn("BN 1\n")

    def test_missing_cpt_row(self):
        text = "BN 2\nROOT 0 0.3 0.7\nEDGE 0 1\nCPT 1 | 0 : 0.1 0.9\n"
        with pytest.raises(BnError):
            parse_bn(text)

    def test_root_with_parent(self):
        text = CHAIN_BN_TEXT + "EDGE 1 0\n"
        with pytest.raises(BnError):
            parse_bn(text)

    def test_unknown_tag(self):
        with pytest.raises(SpnFormatError) as info:
            parse_bn("BN 1\nROOT 0 0.5 0.5\nNODE 0\n")
        assert info.value.line == 3

    def test_bad_probability(self):
        with pytest.raises(SpnFormatError):
            parse_bn("BN 1\nROOT 0 0.5 half\n")

    def test_multiple_roots(self):
        with pytest.raises(BnError):
            TreeBn(VariableTable.binary(2), (-1, -1), (((0.5, 0.5),), ((0.5, 0.5),)))

    def test_cycle(self):
        row = (0.5, 0.5)
        with pytest.raises(BnError):
            TreeBn(VariableTable.binary(3), (-1, 2, 1), ((row,), (row, row), (row, row)))


class TestBnToSpn:
    """BN→SPN 컴파일 테스트"""

    def test_chain(self, chain_bn):
        spn = bn_to_spn(chain_bn)
        stats = spn_stats(spn)
        assert (stats.nodes, stats.arcs) == (9, 10)
        assert validate(spn).is_valid
        assert score(spn, (1, 1)) == pytest.approx(0.14)
        assert score(spn, (0, 0)) == pytest.approx(0.03)

    def test_single_variable(self):
        bn = parse_bn("BN 1\nROOT 0 0.3 0.7\n")
        spn = bn_to_spn(bn)
        root = spn.root_node
        assert root.is_sum
        assert [spn.nodes[c].is_leaf for c in root.children] == [True, True]
        assert root.weights == (0.3, 0.7)

    def test_chain3_cache(self, chain3_bn):
        """공유되는 (변수, 값) 부분 네트워크는 한 번만 만든다"""
        compiler = BnCompiler(chain3_bn)
        spn = compiler.compile()
        assert compiler.cache_hits > 0
        assert len(compiler.cache) == 6
        assert spn_stats(spn).products == 4
        for x in itertools.product(range(2), repeat=3):
            assert score(spn, x) == pytest.approx(chain3_bn.joint(x))

    def test_leaf_variable_is_bare_indicator(self, chain3_bn):
        """자식이 없는 변수 C의 부분 네트워크는 곱 노드 없이 지시 함수"""
        compiler = BnCompiler(chain3_bn)
        spn = compiler.compile()
        for value in range(2):
            leaf = spn.nodes[compiler.cache[(2, value)]]
            assert leaf.is_leaf
            assert (leaf.var, leaf.value) == (2, value)
            assert spn.nodes[compiler.cache[(1, value)]].is_product

    def test_compiled_spn_is_selective(self, chain3_bn):
        """할당마다 파스 트리가 정확히 하나"""
        spn = bn_to_spn(chain3_bn)
        assert count_parse_trees(spn) == 8

    @pytest.mark.parametrize("seed", range(10))
    def test_joint_matches(self, seed):
        """∀x: S(x) = P_BN(x)"""
        bn = random_tree_bn(6, seed=seed, max_card=3)
        spn = bn_to_spn(bn)
        assert validate(spn).is_valid
        ranges = [range(card) for card in bn.variables.cardinalities]
        for x in itertools.product(*ranges):
            assert score(spn, x) == pytest.approx(bn.joint(x), rel=1e-9)

    def test_size_linear_in_parameters(self):
        """크기(노드 + 아크) / 파라미터 수 비율이 BN 크기와 무관하게 유계"""
        ratios = []
        for num_vars in (2, 5, 10, 20, 40):
            for seed in range(3):
                bn = random_tree_bn(num_vars, seed=seed, max_card=3)
                ratios.append(spn_stats(bn_to_spn(bn)).size / bn.num_parameters)
        assert max(ratios) <= 4.0
