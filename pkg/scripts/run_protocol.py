"""
실험 프로토콜 실행 스크립트 (데스크 규모)

시드 고정 무작위 SPN 하나에 기본 Q/E/H 비율 묶음마다 문제를 만들고
솔버 라인업을 같은 예산으로 실행한다. 비율마다 CSV와 HTML 요약을 남긴다.

사용법:
    python scripts/run_protocol.py
    python scripts/run_protocol.py --vars 30 --count 20 --budget 1.0 --solvers compare
    python scripts/run_protocol.py --spn model.spn --out-dir results
"""

import argparse
import sys
from pathlib import Path

# 프로젝트 루트를 Python path에 추가
sys.path.insert(0, str(Path(__file__).parent.parent))

from dotenv import load_dotenv
load_dotenv()

import logging
logging.basicConfig(level=logging.INFO, format="%(message)s")

from src.bench import DEFAULT_PROPORTIONS, generate_problems, parse_proportions, run_benchmark, write_report
from src.reporter import ReportGenerator
from src.solver import resolve_solvers
from src.spn import load_spn, random_spn, spn_stats


def main():
    parser = argparse.ArgumentParser(description="SPN MAP 실험 프로토콜 (데스크 규모)")
    parser.add_argument("--spn", default=None, help="SPN 파일 (없으면 무작위 생성)")
    parser.add_argument("--vars", type=int, default=30, help="무작위 SPN 변수 수")
    parser.add_argument("--seed", type=int, default=0, help="SPN/문제 생성 시드")
    parser.add_argument("--count", type=int, default=20, help="비율별 문제 수")
    parser.add_argument("--budget", type=float, default=1.0, help="솔버별 예산 (초)")
    parser.add_argument("--solvers", default="compare", help="라인업 이름 또는 쉼표 목록")
    parser.add_argument("--proportions", action="append", default=None,
                        help="q,e,h 비율 (여러 번 지정 가능, 기본은 네 가지 묶음)")
    parser.add_argument("--workers", type=int, default=None, help="작업자 프로세스 수")
    parser.add_argument("--out-dir", default="results", help="결과 디렉토리")

    args = parser.parse_args()

    spn = load_spn(args.spn) if args.spn else random_spn(args.vars, seed=args.seed)
    stats = spn_stats(spn)
    solvers = resolve_solvers(args.solvers, seed=args.seed)
    proportions = [parse_proportions(text) for text in args.proportions] if args.proportions else DEFAULT_PROPORTIONS

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    generator = ReportGenerator()

    print(f"\n{'='*60}")
    print(f"SPN: 변수 {stats.num_vars}개, 노드 {stats.nodes}개, 아크 {stats.arcs}개")
    print(f"솔버: {', '.join(spec.label for spec in solvers)}")
    print(f"예산: {args.budget}초, 비율별 문제 {args.count}개")
    print(f"{'='*60}\n")

    for proportion in proportions:
        suite = generate_problems(spn, proportion, args.count, args.seed, source=args.spn or "random")
        report = run_benchmark(spn, suite, solvers, budget=args.budget, workers=args.workers)

        stem = "protocol_" + "_".join(f"{int(round(p * 100)):02d}" for p in proportion)
        write_report(report, out_dir / f"{stem}.csv")
        generator.write(report, out_dir / f"{stem}.html", suite_label=suite.label)

        print(f"\n[Q/E/H = {suite.label}]")
        print(f"  {'솔버':<10} {'승리':>6} {'완료':>6} {'평균(ms)':>10}")
        for summary in report.summaries():
            print(f"  {summary.solver:<10} {summary.wins:>6} {summary.finished:>6} {summary.mean_time * 1000:>10.1f}")
        print(f"  지배 관계 위반: {len(report.dominance_violations())}건")

    print(f"\n결과 저장: {out_dir}")


if __name__ == "__main__":
    main()
