#!/usr/bin/env python
"""
PLCScope - 稳定子态的参与方局域 Clifford 等价判定与分解
统一命令行入口 (Unified Entry Point)

退出码:
    0 成功 / 等价
    1 明确的否定结论 (不等价、验证失败)
    2 inconclusive / PARTIAL / 超出预算
    3 输入错误 (解析、非法态、非法矩阵组、域不一致)
    4 不满足秩条件的矩阵组 (稳定子码情形)
    5 内部复核失败
"""
import argparse
import os
import sys

# 确保项目根目录在 path 中
PROJECT_ROOT = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, PROJECT_ROOT)

from src.errors import (
    BudgetExceededError,
    FieldMismatchError,
    InternalError,
    InvalidStateError,
    InvalidTupleError,
    ParseError,
    PLCError,
    PreconditionError,
    StabilizerCodeTupleError,
)
from src.utils import logger, set_verbose, shutdown_logger

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INCONCLUSIVE = 2
EXIT_INPUT = 3
EXIT_STABILIZER_CODE = 4
EXIT_INTERNAL = 5


def exit_code_for(error: Exception) -> int:
    """异常 -> 退出码，子类在前"""
    if isinstance(error, StabilizerCodeTupleError):
        return EXIT_STABILIZER_CODE
    if isinstance(error, BudgetExceededError):
        return EXIT_INCONCLUSIVE
    if isinstance(error, InternalError):
        return EXIT_INTERNAL
    if isinstance(error, (ParseError, InvalidStateError, InvalidTupleError, FieldMismatchError,
                          PreconditionError, ValueError)):
        return EXIT_INPUT
    return EXIT_INTERNAL


def check_environment() -> bool:
    """启动自检，确保依赖和目录可用"""
    logger.info("🔍 启动环境自检...")
    ok = True

    # 1. 依赖包
    for package in ("numpy", "pandas", "pyarrow", "networkx", "pydantic_settings", "dotenv"):
        try:
            __import__(package)
        except ImportError:
            logger.error(f"   ❌ 缺少依赖: {package}")
            ok = False
    if ok:
        logger.info("   ✅ 依赖包检查通过")

    # 2. 关键目录
    from config import CACHE_DIR, DATA_DIR, ORBIT_DB_DIR, REPORTS_DIR
    for d in (DATA_DIR, ORBIT_DB_DIR, CACHE_DIR, REPORTS_DIR):
        try:
            os.makedirs(d, exist_ok=True)
        except OSError as e:
            logger.error(f"   ❌ 无法创建目录 {d}: {e}")
            ok = False
            continue
        if not os.access(d, os.W_OK):
            logger.error(f"   ❌ 目录不可写: {d}")
            ok = False
    if ok:
        logger.info("   ✅ 基础目录检查通过")

    # 3. 配置
    from config.env_settings import effective_budgets, effective_workers, validate_config
    if validate_config():
        logger.info(f"   ✅ 预算配置: {effective_budgets()}, 进程数 {effective_workers()}")
    else:
        logger.warning("   ⚠️ 预算配置偏小，结论可能大量 inconclusive")
    return ok


# ============================================
# 公共参数
# ============================================

def _budgets(args) -> dict:
    from config.env_settings import effective_budgets
    budgets = effective_budgets()
    overrides = {
        'ring_enumeration': args.ring_budget,
        'congruence_search': args.congruence_budget,
        'graph_enumeration': args.graph_budget,
    }
    for key, value in overrides.items():
        if value is not None:
            if value <= 0:
                raise ValueError(f"预算必须为正整数: {key}={value}")
            budgets[key] = value
    return budgets


def _seed(args) -> int:
    from config.env_settings import effective_seed
    return effective_seed() if args.seed is None else args.seed


def _load(path: str, args):
    """读取态文件，--partition 优先于文件里的划分"""
    from src.data_loader import load_state
    from src.symplectic_pauli import PartyPartition
    state, partition = load_state(path, args.d)
    if args.partition:
        partition = PartyPartition.parse(args.partition, state.n)
    if partition is None:
        raise InvalidStateError(f"{path}: 未给出划分 (用 --partition 1,2|3 或在文件中写 partition)")
    return state, partition


def _emit(kind: str, data, args):
    from src.tasks.reporting import emit
    emit(kind, data, args.format, args.output)


# ============================================
# 子命令
# ============================================

def cmd_info(args) -> int:
    """态的诊断信息"""
    from src.commutation import extractable_zero_count, from_state, rank_condition
    from src.decomposition import ghz_extraction_count
    from src.field_linalg import rank
    from src.stabilizer_states import is_valid_stabilizer, local_subspace_dim, reduced_rank_exponent

    state, partition = _load(args.file, args)
    validity = is_valid_stabilizer(state)
    if not validity.valid:
        raise InvalidStateError(f"{args.file}: " + "; ".join(validity.violations))
    c = from_state(state, partition)
    data = {
        "n": state.n,
        "d": state.d,
        "valid": validity.valid,
        "violations": list(validity.violations),
        "partition": [",".join(str(s + 1) for s in party) for party in partition.parties],
        "local_ranks": list(c.ranks()),
        "local_dims": [local_subspace_dim(state, partition, a) for a in range(partition.M)],
        "reduced_rank_exponents": [reduced_rank_exponent(state, partition, a) for a in range(partition.M)],
        "rank_condition": rank_condition(c),
        "rank_sides": [2 * rank(c.concatenation()), sum(c.ranks())],
        "delta": ghz_extraction_count(state, partition),
        "extractable_zeros": extractable_zero_count(c),
        "commutation": c.to_dict(),
    }
    _emit("info", data, args)
    return EXIT_OK


def cmd_equiv(args) -> int:
    """两个态在同一划分下是否 PLC 等价"""
    from src.equivalence import Verdict, plc_equivalent

    state_a, partition = _load(args.file_a, args)
    state_b, partition_b = _load(args.file_b, args)
    if partition_b != partition:
        raise FieldMismatchError(f"两个文件的划分不一致: {partition} vs {partition_b}")
    budgets = _budgets(args)
    result = plc_equivalent(state_a, state_b, partition, budget=budgets['congruence_search'], seed=_seed(args))
    data = result.to_dict()
    data["seed"] = _seed(args)
    _emit("equivalence", data, args)
    return {
        Verdict.EQUIVALENT: EXIT_OK,
        Verdict.INEQUIVALENT: EXIT_NEGATIVE,
        Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE,
    }[result.verdict]


def cmd_decompose(args) -> int:
    """分解为不可分块；三方时附带 |0>/Bell/GHZ 计数"""
    from src.commutation import from_state
    from src.decomposition import decompose, tripartite_canonical_counts

    state, partition = _load(args.file, args)
    budgets = _budgets(args)
    seed = _seed(args)
    report = decompose(from_state(state, partition), budget=budgets['ring_enumeration'], seed=seed,
                       naming_budget=budgets['congruence_search'])
    data = report.to_dict()
    data["budget"] = budgets['ring_enumeration']
    data["seed"] = seed
    if partition.M == 3 and report.complete:
        data["tripartite"] = tripartite_canonical_counts(state, partition,
                                                         budget=budgets['ring_enumeration']).to_dict()
    _emit("decomposition", data, args)
    return EXIT_OK if report.complete else EXIT_INCONCLUSIVE


def cmd_synth(args) -> int:
    """由对易矩阵组构造稳定子态"""
    from src.commutation import synthesize_state, validate
    from src.data_loader import load_tuple, save_tableau

    c = load_tuple(args.file)
    report = validate(c, check_rank=True)
    if not report.valid:
        if report.rank_condition is False:
            raise StabilizerCodeTupleError()
        raise InvalidTupleError("; ".join(report.violations))
    result = synthesize_state(c)
    data = result.tableau.to_dict()
    data["partition"] = result.partition.to_list()
    if args.tableau:
        save_tableau(args.tableau, result.tableau, result.partition)
        logger.info(f"✅ 稳定子表已保存: {args.tableau}")
    _emit("synthesis", data, args)
    return EXIT_OK


def cmd_egs(args) -> int:
    """EGS 枚举"""
    from src.tasks.egs_search import PartyConfiguration, egs_search, egs_search_from_orbit_database

    config = PartyConfiguration.parse(args.sizes)
    budgets = _budgets(args)
    common = dict(d=args.d, budgets=budgets, seed=_seed(args), max_workers=args.workers)
    if args.keep_intra_edges:
        common["drop_intra_party_edges"] = False
    if args.database:
        report = egs_search_from_orbit_database(args.database, config, **common)
    else:
        report = egs_search(config, use_cache=not args.no_cache, **common)
    _emit("egs", report.to_dict(), args)
    return EXIT_OK if report.complete else EXIT_INCONCLUSIVE


def cmd_verify(args) -> int:
    """运行验证组"""
    from src.tasks.verifier import run_suite

    report = run_suite(args.suite, trials=args.trials, max_n=args.max, d=args.d,
                       seed=_seed(args), budgets=_budgets(args))
    data = report.to_dict()
    data.setdefault("suite", args.suite)
    _emit("verify", data, args)
    if not report.passed:
        logger.error(f"❌ 验证 {args.suite} 未通过")
        return EXIT_NEGATIVE
    return EXIT_OK


def cmd_cache(args) -> int:
    """EGS 缓存和日志管理"""
    from config import LOG
    from src.cache_manager import cache_manager
    from src.utils import clean_old_logs

    if args.clean:
        if args.all:
            removed = cache_manager.clear()
        else:
            removed = cache_manager.cleanup_old_cache(args.days)
        logs = clean_old_logs(LOG['retention_days'])
        logger.info(f"🧹 已清理 {removed} 个缓存目录, {logs} 个旧日志")
    _emit("cache", cache_manager.get_cache_stats(), args)
    return EXIT_OK


def cmd_check(args) -> int:
    return EXIT_OK if check_environment() else EXIT_NEGATIVE


def cmd_convert(args) -> int:
    """graph6 -> 轨道数据库文本"""
    from src.data_loader import convert_graph6_file
    convert_graph6_file(args.src, args.dst)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    from config import FIELD

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="输出 DEBUG 日志")
    common.add_argument("--seed", type=int, help="随机种子 (默认 PLC_SEED 或 0)")
    common.add_argument("--d", type=int, default=FIELD['default_d'], help="局域维数 (素数, 默认 2)")
    common.add_argument("--partition", help="划分, 例如 1,2|3|4 (1 起始)")
    common.add_argument("--ring-budget", type=int, help="自同态环穷举预算")
    common.add_argument("--congruence-budget", type=int, help="合同解空间穷举预算")
    common.add_argument("--graph-budget", type=int, help="图枚举预算")
    common.add_argument("--workers", type=int, help="进程池大小")
    common.add_argument("--format", choices=["json", "table"], default="json", help="输出格式")
    common.add_argument("-o", "--output", help="报告输出文件 (默认标准输出)")

    parser = argparse.ArgumentParser(
        prog="plcscope",
        description="🧮 PLCScope - 稳定子态的 PLC 等价判定、分解与 EGS 枚举",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
示例:
  python main.py info ghz3.json --partition 1|2|3
  python main.py equiv a.json b.json --partition 1|2|3
  python main.py decompose state.txt --partition 1,2|3,4|5
  python main.py egs --sizes 2,1,1,1
  python main.py verify cosets
        """
    )
    subparsers = parser.add_subparsers(dest="command", help="可用命令")

    info_parser = subparsers.add_parser("info", parents=[common], help="🔍 态的诊断信息")
    info_parser.add_argument("file", help="稳定子表 JSON 或边表")

    equiv_parser = subparsers.add_parser("equiv", parents=[common], help="⚖️ PLC 等价判定")
    equiv_parser.add_argument("file_a")
    equiv_parser.add_argument("file_b")

    dec_parser = subparsers.add_parser("decompose", parents=[common], help="🧩 分解为不可分块")
    dec_parser.add_argument("file")

    synth_parser = subparsers.add_parser("synth", parents=[common], help="🛠️ 由对易矩阵组构造态")
    synth_parser.add_argument("file", help="对易矩阵组 JSON")
    synth_parser.add_argument("--tableau", help="把稳定子表另存为 JSON")

    egs_parser = subparsers.add_parser("egs", parents=[common], help="🧬 EGS 枚举")
    egs_parser.add_argument("--sizes", required=True, help="参与方大小, 例如 2,1,1,1")
    egs_parser.add_argument("--database", help="LC 轨道数据库文件")
    egs_parser.add_argument("--no-cache", action="store_true", help="不读写分块缓存")
    egs_parser.add_argument("--keep-intra-edges", action="store_true", help="不删除参与方内部的边")

    verify_parser = subparsers.add_parser("verify", parents=[common], help="🔬 验证组")
    verify_parser.add_argument("suite", choices=["spiral", "cosets", "properties", "oracle", "tripartite"])
    verify_parser.add_argument("--max", type=int, help="最大 n")
    verify_parser.add_argument("--trials", type=int, help="随机样本数")

    cache_parser = subparsers.add_parser("cache", parents=[common], help="📦 缓存管理")
    cache_parser.add_argument("--stats", action="store_true", help="查看状态 (默认)")
    cache_parser.add_argument("--clean", action="store_true", help="清理过期缓存和旧日志")
    cache_parser.add_argument("--all", action="store_true", help="与 --clean 一起使用时清空全部缓存")
    cache_parser.add_argument("--days", type=int, help="过期天数 (默认 CACHE['max_age_days'])")

    subparsers.add_parser("check", parents=[common], help="✅ 环境自检")

    convert_parser = subparsers.add_parser("convert", parents=[common], help="🔄 格式转换")
    convert_parser.add_argument("kind", choices=["graph6"], help="源格式")
    convert_parser.add_argument("src")
    convert_parser.add_argument("dst")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    cmd_map = {
        "info": cmd_info,
        "equiv": cmd_equiv,
        "decompose": cmd_decompose,
        "synth": cmd_synth,
        "egs": cmd_egs,
        "verify": cmd_verify,
        "cache": cmd_cache,
        "check": cmd_check,
        "convert": cmd_convert,
    }

    if args.command not in cmd_map:
        parser.print_help()
        return EXIT_OK

    if args.verbose:
        set_verbose(True)
    try:
        return cmd_map[args.command](args)
    except (PLCError, ValueError) as e:
        code = exit_code_for(e)
        logger.error(f"❌ {type(e).__name__}: {e}")
        return code


if __name__ == "__main__":
    exit_code = main()
    shutdown_logger(logger)
    sys.exit(exit_code)
