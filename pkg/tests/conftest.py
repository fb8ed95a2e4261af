"""
공용 픽스처

SPN-A: 이진 변수 2개, 노드 11개
    S(1,0)=0.378  S(1,1)=0.162  S(0,0)=0.242  S(0,1)=0.218
"""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.reduce import parse_bn
from src.spn import parse_spn

SPN_A_TEXT = """\
SPN 2
L 0 1
L 0 0
L 1 1
L 1 0
S 0 0.9 1 0.1
S 2 0.2 3 0.8
S 0 0.3 1 0.7
S 2 0.5 3 0.5
P 4 5
P 6 7
S 8 0.4 9 0.6
"""

# A→B: P(A=1)=0.7, P(B=1|A=1)=0.2, P(B=1|A=0)=0.9
CHAIN_BN_TEXT = """\
BN 2
ROOT 0 0.3 0.7
EDGE 0 1
CPT 1 | 0 : 0.1 0.9
CPT 1 | 1 : 0.8 0.2
"""

# A→B→C (이진)
CHAIN3_BN_TEXT = """\
BN 3
ROOT 0 0.4 0.6
EDGE 0 1
CPT 1 | 0 : 0.5 0.5
CPT 1 | 1 : 0.1 0.9
EDGE 1 2
CPT 2 | 0 : 0.7 0.3
CPT 2 | 1 : 0.2 0.8
"""

SPN_A_SCORES = {
    (1, 0): 0.378,
    (1, 1): 0.162,
    (0, 0): 0.242,
    (0, 1): 0.218,
}


@pytest.fixture
def spn_a():
    return parse_spn(SPN_A_TEXT)


@pytest.fixture
def single_indicator():
    return parse_spn("SPN 1\nL 0 0\n")


@pytest.fixture
def chain_bn():
    return parse_bn(CHAIN_BN_TEXT)


@pytest.fixture
def chain3_bn():
    return parse_bn(CHAIN3_BN_TEXT)


@pytest.fixture
def spn_a_file(tmp_path):
    path = tmp_path / "spn_a.spn"
    path.write_text(SPN_A_TEXT, encoding="utf-8")
    return path
