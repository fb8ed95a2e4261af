"""
테스트/실험용 입력 파일 생성 스크립트

무작위 SPN, 트리 BN과 그 컴파일 결과, 문제 파일을 시드 고정으로 만든다.

사용법:
    python scripts/make_fixtures.py
    python scripts/make_fixtures.py --out-dir fixtures --vars 12 --seeds 0 1 2
"""

import argparse
import sys
from pathlib import Path

# 프로젝트 루트를 Python path에 추가
sys.path.insert(0, str(Path(__file__).parent.parent))

import logging
logging.basicConfig(level=logging.INFO, format="%(message)s")

from src.bench import generate_problems, parse_proportions
from src.reduce import bn_to_spn, format_problems, random_tree_bn, serialize_bn
from src.spn import random_spn, save_spn, spn_stats


def main():
    parser = argparse.ArgumentParser(description="입력 파일 생성")
    parser.add_argument("--out-dir", default="fixtures", help="출력 디렉토리")
    parser.add_argument("--vars", type=int, default=12, help="변수 수")
    parser.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2], help="생성 시드")
    parser.add_argument("--problems", type=int, default=10, help="SPN별 문제 수")
    parser.add_argument("--proportions", default="0.3,0.3,0.4", help="q,e,h 비율")

    args = parser.parse_args()
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    proportion = parse_proportions(args.proportions)

    for seed in args.seeds:
        spn = random_spn(args.vars, seed=seed)
        save_spn(spn, out_dir / f"random_{args.vars}_{seed}.spn")
        suite = generate_problems(spn, proportion, args.problems, seed)
        (out_dir / f"random_{args.vars}_{seed}.problems").write_text(format_problems(suite.problems), encoding="utf-8")

        bn = random_tree_bn(args.vars, seed=seed)
        (out_dir / f"tree_{args.vars}_{seed}.bn").write_text(serialize_bn(bn), encoding="utf-8")
        compiled = bn_to_spn(bn)
        save_spn(compiled, out_dir / f"tree_{args.vars}_{seed}.spn")

        stats = spn_stats(spn)
        print(f"seed {seed}: SPN 노드 {stats.nodes}/아크 {stats.arcs}, "
              f"BN 파라미터 {bn.num_parameters} → SPN 크기 {spn_stats(compiled).size}")

    print(f"\n저장: {out_dir}")


if __name__ == "__main__":
    main()
