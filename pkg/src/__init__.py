"""
SpnMap - 합곱 네트워크(SPN) MAP 추론 도구

MAP→MAX 변환, 애니타임 정확 솔버, 근사 솔버, 트리 BN 컴파일러, 벤치마크 하네스
"""

__version__ = "0.1.0"
__author__ = "SpnMap Team"
