"""
SpnMap 메인 실행 파일

SPN 검증/평가, MAP→MAX 변환, BN 컴파일, MAX/MAP 풀이, 벤치마크
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from dotenv import load_dotenv
from pydantic import ValidationError

# 프로젝트 루트를 Python path에 추가
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.config import settings
from src.errors import (
    BnError,
    OracleLimitError,
    ProblemError,
    SpnFormatError,
    SpnStructureError,
    SpnValidationError,
)
from src.spn import PartialEvidence, evaluate, load_spn, serialize_spn, spn_stats
from src.spn.result import SolveResult
from src.reduce import (
    bn_to_spn,
    load_bn,
    load_problems,
    map_to_max,
    parse_assignment,
    parse_problem,
    simplify,
)
from src.solver import SearchConfig, SolverSpec, parse_solver, resolve_solvers
from src.bench import generate_problems, parse_proportions, run_benchmark, write_report, report_to_csv
from src.bench.problems import ProblemSuite
from src.reporter import get_generator

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2


class UsageError(Exception):
    """명령줄 사용 오류 (종료 코드 2)"""


def configure_logging() -> None:
    """로깅 설정 (stderr, 설정 시 파일 추가)"""
    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if settings.log_file is not None:
        settings.log_file.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(settings.log_file, encoding="utf-8"))

    logging.basicConfig(
        level=getattr(logging, settings.log_level.upper(), logging.INFO),
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        handlers=handlers,
        force=True,
    )


# ----------------------------------------------------------------------
# 출력 형식


def format_score(value: float, digits: Optional[int] = None) -> str:
    """점수 문자열 (digits 없으면 왕복 가능한 최단 표현)"""
    digits = settings.score_digits if digits is None else digits
    if digits is None:
        return repr(float(value))
    return format(value, f".{digits}g")


def format_result(
    result: SolveResult,
    variables: Optional[Sequence[int]] = None,
    digits: Optional[int] = None
) -> str:
    """'x0=1 x1=0 score=0.378' (끝나지 않았으면 ' status=...' 추가)"""
    parts = []
    if result.assignment is not None:
        shown = range(len(result.assignment)) if variables is None else variables
        parts.extend(f"x{var}={result.assignment[var]}" for var in shown)
    parts.append(f"score={format_score(result.score, digits)}")
    if not result.finished:
        parts.append(f"status={result.status.value}")
    return " ".join(parts)


def _require_file(path: str) -> Path:
    resolved = Path(path)
    if not resolved.is_file():
        raise UsageError(f"파일이 없습니다: {path}")
    return resolved


def _write_output(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
        logger.info(f"저장: {out}")
    else:
        sys.stdout.write(text)


def _search_config(args: argparse.Namespace) -> SearchConfig:
    return SearchConfig(
        pruning=args.pruning,
        ordering=args.ordering,
        staging=args.staging,
        stage_interval=args.stage_interval if args.stage_interval is not None else settings.stage_interval,
        budget=args.budget,
        initializer=args.init,
        seed=args.seed,
    )


def _solver_spec(args: argparse.Namespace) -> SolverSpec:
    """--solver와 탐색 플래그로 SolverSpec 구성 ('exact'는 플래그 구성 그대로)"""
    config = _search_config(args)
    if args.solver == "exact":
        return SolverSpec(kind="exact", search=config)
    try:
        return parse_solver(args.solver, k=args.k, seed=args.seed, search=config, beam_init=args.beam_init)
    except ValueError as e:
        raise UsageError(str(e))


# ----------------------------------------------------------------------
# 하위 명령


def cmd_validate(args: argparse.Namespace) -> int:
    """SPN 구조 검증"""
    spn = load_spn(_require_file(args.spn))
    stats = spn_stats(spn)
    print(f"OK vars={stats.num_vars} nodes={stats.nodes} arcs={stats.arcs} "
          f"sums={stats.sums} products={stats.products} indicators={stats.indicators}")
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    """부분 증거 평가 (지정하지 않은 변수는 합산)"""
    spn = load_spn(_require_file(args.spn))
    evidence = parse_assignment(args.at or "-")
    try:
        space = PartialEvidence.from_values(spn.variables, {var: [value] for var, value in evidence.items()})
    except ValueError as e:
        raise ProblemError(str(e))
    print(format_score(evaluate(spn, space), args.digits))
    return EXIT_OK


def cmd_reduce(args: argparse.Namespace) -> int:
    """MAP 문제를 MAX SPN으로 변환해 출력"""
    spn = load_spn(_require_file(args.spn))
    problem = parse_problem(args.problem, spn)
    reduced = map_to_max(spn, problem)
    if args.simplify:
        reduced = simplify(reduced)
    _write_output(serialize_spn(reduced), args.out)
    return EXIT_OK


def cmd_bn2spn(args: argparse.Namespace) -> int:
    """트리 BN을 SPN으로 컴파일"""
    bn = load_bn(_require_file(args.bn))
    _write_output(serialize_spn(bn_to_spn(bn)), args.out)
    return EXIT_OK


def cmd_max(args: argparse.Namespace) -> int:
    """MAX 풀이"""
    spec = _solver_spec(args)
    spn = load_spn(_require_file(args.spn))
    result = spec.run(spn, args.budget)
    print(format_result(result, digits=args.digits))
    return EXIT_OK


def cmd_map(args: argparse.Namespace) -> int:
    """MAP 풀이: 변환 후 솔버 실행, Q 변수 할당과 S′ 점수 출력"""
    spec = _solver_spec(args)
    spn = load_spn(_require_file(args.spn))
    problem = parse_problem(args.problem, spn)
    reduced = map_to_max(spn, problem)
    result = spec.run(reduced, args.budget)
    print(format_result(result, variables=problem.query, digits=args.digits))
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    """벤치마크 실행 후 CSV (및 HTML) 출력"""
    try:
        specs = resolve_solvers(args.solvers, k=args.k, seed=args.seed)
    except ValueError as e:
        raise UsageError(str(e))
    proportion = None if args.problems else parse_proportions(args.proportions)

    spn_path = _require_file(args.spn)
    spn = load_spn(spn_path)
    if args.problems:
        problems = load_problems(_require_file(args.problems), spn)
        suite = ProblemSuite(source=str(spn_path), proportion=(0.0, 0.0, 0.0),
                             count=len(problems), seed=args.seed or 0, problems=problems)
        label = Path(args.problems).name
    else:
        suite = generate_problems(spn, proportion, args.count, args.seed or 0, source=str(spn_path))
        label = suite.label

    report = run_benchmark(spn, suite, specs, budget=args.budget, workers=args.workers)

    if args.out:
        write_report(report, args.out)
    else:
        sys.stdout.write(report_to_csv(report))
    if args.html:
        get_generator().write(report, args.html, suite_label=label)
    return EXIT_OK


# ----------------------------------------------------------------------
# 인자 파서


def _add_solver_flags(parser: argparse.ArgumentParser, default_solver: str) -> None:
    parser.add_argument("--solver", default=default_solver,
                        help="bt, ng, amap, bs, kbt, exact, mc, fc, fc+o, fc+o+s (bs/kbt 뒤에 K를 붙일 수 있음)")
    parser.add_argument("--k", type=int, default=None, help="빔 크기 / KBT의 K")
    parser.add_argument("--pruning", choices=["mc", "fc"], default="fc", help="정확한 솔버 가지치기")
    parser.add_argument("--ordering", action="store_true", help="변수/값 순서 휴리스틱")
    parser.add_argument("--staging", action="store_true", help="주기적 SPN 축소")
    parser.add_argument("--stage-interval", type=int, default=None, help="축소 간격 (결정된 변수 수)")
    parser.add_argument("--init", choices=["first", "random", "bt"], default="bt", help="정확한 솔버 초기화")
    parser.add_argument("--beam-init", choices=["random", "ng"], default="random", help="빔 탐색 초기화")
    parser.add_argument("--budget", type=float, default=None, help="예산 (초)")
    parser.add_argument("--seed", type=int, default=None, help="난수 시드")
    parser.add_argument("--digits", type=int, default=None, help="점수 유효숫자")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spnmap", description="SpnMap - SPN MAP 추론 도구")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="SPN 구조 검증")
    p.add_argument("--spn", required=True)
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("eval", help="부분 증거에서 SPN 평가")
    p.add_argument("--spn", required=True)
    p.add_argument("--at", default="-", help="'var=val,var=val' (생략한 변수는 합산)")
    p.add_argument("--digits", type=int, default=None)
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("reduce", help="MAP→MAX 변환")
    p.add_argument("--spn", required=True)
    p.add_argument("--problem", required=True, help="'q:.. e:.. h:..'")
    p.add_argument("--simplify", action="store_true", help="단항 노드/0 가중치 아크 정리")
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_reduce)

    p = sub.add_parser("bn2spn", help="트리 BN → SPN")
    p.add_argument("--bn", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_bn2spn)

    p = sub.add_parser("max", help="MAX 풀이")
    p.add_argument("--spn", required=True)
    _add_solver_flags(p, default_solver="exact")
    p.set_defaults(handler=cmd_max)

    p = sub.add_parser("map", help="MAP 풀이")
    p.add_argument("--spn", required=True)
    p.add_argument("--problem", required=True, help="'q:.. e:.. h:..'")
    _add_solver_flags(p, default_solver="exact")
    p.set_defaults(handler=cmd_map)

    p = sub.add_parser("bench", help="벤치마크")
    p.add_argument("--spn", required=True)
    p.add_argument("--proportions", default="0.3,0.3,0.4", help="q,e,h 비율")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--solvers", default="compare", help="쉼표 목록 또는 solvers.yaml 라인업 이름")
    p.add_argument("--k", type=int, default=None, help="이름에 K가 없는 bs/kbt의 K")
    p.add_argument("--budget", type=float, default=None, help="솔버별 예산 (초)")
    p.add_argument("--problems", default=None, help="문제 파일 (지정 시 무작위 생성 대신 사용)")
    p.add_argument("--workers", type=int, default=None, help="작업자 프로세스 수")
    p.add_argument("--out", default=None, help="CSV 경로 (기본 stdout)")
    p.add_argument("--html", default=None, help="HTML 요약 경로")
    p.set_defaults(handler=cmd_bench)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """메인 함수"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    # 환경 변수 로드
    load_dotenv()
    configure_logging()

    source = getattr(args, "spn", None) or getattr(args, "bn", None) or "-"
    try:
        return args.handler(args)
    except SpnFormatError as e:
        location = ":".join(str(part) for part in (source, e.line, e.column) if part is not None)
        print(f"{location}: {e.message}", file=sys.stderr)
        return EXIT_INVALID
    except UnicodeDecodeError as e:
        print(f"{source}: UTF-8로 읽을 수 없는 파일입니다 ({e.reason})", file=sys.stderr)
        return EXIT_INVALID
    except (SpnValidationError, SpnStructureError, ProblemError, BnError, OracleLimitError) as e:
        print(f"{source}: {e}", file=sys.stderr)
        return EXIT_INVALID
    except (UsageError, ValidationError) as e:
        print(f"사용 오류: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
