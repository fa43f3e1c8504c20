#!/usr/bin/env python
"""
验证任务
1. spiral: 螺旋图态族的不可分性 (附带合并参与方后的两矩阵组)
2. cosets: 两位点辛群的右陪集表
3. properties: 随机态上的秩条件、秩不等式、综合往返、LCE 轨道、qutrit 树、大小悬殊的四方划分
4. oracle: 小规模合同判定与 Fitting 判定对照 GL(n, 2) 暴力枚举
5. tripartite: 三方态分解为 |0>/Bell/GHZ，且分解顺序不影响结果

每个失败都记录能复现的最小用例 (种子、n、d、边)
"""
import os
import sys
import datetime
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

# 添加项目根目录到路径
PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
sys.path.insert(0, PROJECT_ROOT)

from config import SEARCH
from config.env_settings import effective_budgets, effective_seed
from src.clifford_cosets import CosetCheckReport, verify_coset_table
from src.commutation import (
    CommutationTuple,
    change_basis,
    from_graph,
    from_state,
    random_alternating_family,
    random_commutation_tuple,
    rank_condition,
    rank_inequality_check,
    synthesize_state,
)
from src.decomposition import decomposition_order_invariance, tripartite_canonical_counts
from src.equivalence import (
    FittingStatus,
    Verdict,
    brute_force_block_diagonalizable,
    brute_force_congruence,
    congruence_equivalent,
    fitting_split,
)
from src.errors import PLCError
from src.field_linalg import random_invertible
from src.stabilizer_states import (
    GraphAdjacency,
    graph_state,
    is_valid_stabilizer,
    lce_orbit,
    random_graph,
    random_partition,
    random_tree,
)
from src.symplectic_pauli import PartyPartition, party_support
from src.tasks.egs_search import spiral_graph
from src.utils import logger

# 合并参与方的两矩阵组 (C_{α1∪α2}, C_{α2∪α3}) 中 α1, α2, α3 依次是路径上的第 1、3、2 个参与方
MERGED_PAIR = ((0, 2), (2, 1))

# 每项检查最多保留的失败用例
MAX_FAILURES = 5


# ============================================
# 螺旋图态族
# ============================================

@dataclass
class SpiralEntry:
    n: int
    d: int
    sizes: Tuple[int, ...]
    status: str
    reason: str
    layout_ok: bool
    merged_status: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "sizes": list(self.sizes),
            "status": self.status,
            "reason": self.reason,
            "layout_ok": self.layout_ok,
            "merged_pair": self.merged_status,
        }


@dataclass
class SpiralFamilyReport:
    d: int
    entries: List[SpiralEntry] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.status == FittingStatus.INDECOMPOSABLE.value and e.layout_ok for e in self.entries)

    def to_dict(self) -> dict:
        return {
            "suite": "spiral",
            "passed": self.passed,
            "d": self.d,
            "entries": [e.to_dict() for e in self.entries],
        }


def spiral_support_profile(n: int, d: int = 2) -> List[int]:
    """每个规范生成元跨越的参与方个数"""
    graph, partition = spiral_graph(n, d)
    state = graph_state(graph)
    return [len(party_support(state.generator(i), partition)) for i in range(n)]


def merged_pair(c: CommutationTuple, parties=MERGED_PAIR) -> CommutationTuple:
    """按参与方合并后的两矩阵组"""
    mats = []
    for group in parties:
        total = c[group[0]]
        for alpha in group[1:]:
            total = total + c[alpha]
        mats.append(total)
    return CommutationTuple(tuple(mats))


def verify_spiral_family(n_range: Sequence[int], d: int = 2, merged: bool = True,
                         budget: int = None, seed: int = None) -> SpiralFamilyReport:
    """
    对每个 n 判定螺旋图态是否不可分，并记录合并后的两矩阵组是否可分
    """
    budget = effective_budgets()['ring_enumeration'] if budget is None else budget
    seed = effective_seed() if seed is None else seed
    report = SpiralFamilyReport(d)
    logger.info(f"🌀 螺旋图态族验证: d={d}, n={list(n_range)}")
    for n in n_range:
        graph, partition = spiral_graph(n, d)
        c = from_graph(graph, partition)
        result = fitting_split(c, budget=budget, seed=seed)
        profile = spiral_support_profile(n, d)
        layout_ok = profile[0] == 2 and profile[-1] == 2 and all(s == 3 for s in profile[1:-1])
        merged_status = None
        if merged:
            pair = fitting_split(merged_pair(c), budget=budget, seed=seed)
            merged_status = "decomposable" if pair.splits else pair.status.value
        status = "decomposable" if result.splits else result.status.value
        report.entries.append(SpiralEntry(n, d, partition.sizes, status, result.reason, layout_ok, merged_status))
        mark = "✅" if status == FittingStatus.INDECOMPOSABLE.value and layout_ok else "❌"
        logger.info(f"   {mark} n={n:<3} {status:<15} 合并两矩阵组: {merged_status}")
    return report


def verify_cosets() -> CosetCheckReport:
    report = verify_coset_table()
    mark = "✅" if report.passed else "❌"
    logger.info(f"   {mark} |Sp(4,2)|={report.group_order}, 局域子群 {report.subgroup_order}, "
                f"陪集 {report.coset_count}, 覆盖 {report.sequences_verified}")
    for failure in report.failures:
        logger.error(f"   ❌ {failure}")
    return report


# ============================================
# 性质检查
# ============================================

@dataclass
class PropertyCheck:
    name: str
    trials: int = 0
    passed_count: int = 0
    failures: List[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and self.passed_count == self.trials

    def fail(self, case: dict):
        if len(self.failures) < MAX_FAILURES:
            self.failures.append(case)

    def minimal_failure(self) -> Optional[dict]:
        if not self.failures:
            return None
        return min(self.failures, key=lambda case: (case.get("n", 0), case.get("trial", 0)))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "trials": self.trials,
            "passed_count": self.passed_count,
            "minimal_failure": self.minimal_failure(),
            "failures": list(self.failures),
        }


@dataclass
class PropertyReport:
    suite: str
    seed: int
    checks: List[PropertyCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "seed": self.seed,
            "checks": [c.to_dict() for c in self.checks],
        }


def _graph_case(trial: int, graph: GraphAdjacency, partition: PartyPartition, **extra) -> dict:
    case = {
        "trial": trial,
        "n": graph.n,
        "d": graph.d,
        "edges": [[i + 1, j + 1, m] for i, j, m in graph.edges()],
        "partition": str(partition),
    }
    case.update(extra)
    return case


def _run_trials(check: PropertyCheck, trials: int, rng: np.random.Generator,
                body: Callable[[int, np.random.Generator], Optional[dict]]):
    """body 返回 None 表示通过，返回 dict 表示失败用例"""
    for trial in range(trials):
        check.trials += 1
        try:
            case = body(trial, rng)
        except PLCError as e:
            case = {"trial": trial, "error": f"{type(e).__name__}: {e}"}
        if case is None:
            check.passed_count += 1
        else:
            check.fail(case)


def check_rank_condition(trials: int, rng, max_n: int = 8, fields=(2, 3, 5)) -> PropertyCheck:
    check = PropertyCheck("rank_condition")

    def body(trial, rng):
        d = int(rng.choice(fields))
        n = int(rng.integers(1, max_n + 1))
        M = int(rng.integers(1, min(n, 5) + 1))
        graph = random_graph(n, d, rng)
        partition = random_partition(n, M, rng)
        c = change_basis(from_graph(graph, partition), random_invertible(n, d, rng))
        return None if rank_condition(c) else _graph_case(trial, graph, partition)

    _run_trials(check, trials, rng, body)
    return check


def check_rank_inequality(trials: int, rng, max_n: int = 8, fields=(2, 3, 5)) -> PropertyCheck:
    check = PropertyCheck("rank_inequality")

    def body(trial, rng):
        d = int(rng.choice(fields))
        n = int(rng.integers(1, max_n + 1))
        M = int(rng.integers(2, 6))
        mats = random_alternating_family(n, M, d, rng)
        if rank_inequality_check(mats):
            return None
        return {"trial": trial, "n": n, "d": d, "matrices": [m.tolist() for m in mats]}

    _run_trials(check, trials, rng, body)
    return check


def check_synthesis_round_trip(trials: int, rng, max_n: int = 6, fields=(2, 3),
                               budget: int = None) -> PropertyCheck:
    check = PropertyCheck("synthesis_round_trip")

    def body(trial, rng):
        d = int(rng.choice(fields))
        n = int(rng.integers(1, max_n + 1))
        M = int(rng.integers(1, min(n, 4) + 1))
        c = random_commutation_tuple(n, M, d, rng)
        synthesis = synthesize_state(c)
        case = {"trial": trial, "n": n, "d": d, "tuple": c.to_dict()}
        if not is_valid_stabilizer(synthesis.tableau):
            return dict(case, detail="synthesized tableau invalid")
        back = from_state(synthesis.tableau, synthesis.partition)
        result = congruence_equivalent(c, back, budget=budget)
        if result.verdict != Verdict.EQUIVALENT:
            return dict(case, detail=f"round trip {result.verdict.value}")
        if change_basis(c, result.witness).matrices != back.matrices:
            return dict(case, detail="witness failed direct check")
        return None

    _run_trials(check, trials, rng, body)
    return check


def check_lce_orbit(trials: int, rng, max_n: int = 5, fields=(2, 3), limit: int = 12,
                    budget: int = None) -> PropertyCheck:
    """LCE 轨道中的图与起点 PLC 等价"""
    check = PropertyCheck("lce_orbit")

    def body(trial, rng):
        d = int(rng.choice(fields))
        n = int(rng.integers(2, max_n + 1))
        M = int(rng.integers(1, n + 1))
        graph = random_graph(n, d, rng)
        partition = random_partition(n, M, rng)
        start = from_graph(graph, partition)
        for member in lce_orbit(graph, partition, limit=limit):
            result = congruence_equivalent(start, from_graph(member, partition), budget=budget)
            if result.verdict != Verdict.EQUIVALENT:
                return _graph_case(trial, graph, partition, member=[[i + 1, j + 1, m] for i, j, m in member.edges()],
                                   verdict=result.verdict.value)
        return None

    _run_trials(check, trials, rng, body)
    return check


def check_qutrit_trees(trials: int, rng, max_n: int = 7, budget: int = None) -> PropertyCheck:
    """树图的边重数可以全部归一"""
    check = PropertyCheck("qutrit_tree_multiplicities")

    def body(trial, rng):
        n = int(rng.integers(2, max_n + 1))
        tree = random_tree(n, 3, rng, multiplicities=True)
        plain = GraphAdjacency.from_edges(n, [(i, j) for i, j, _ in tree.edges()], 3)
        partition = random_partition(n, int(rng.integers(1, n + 1)), rng)
        result = congruence_equivalent(from_graph(tree, partition), from_graph(plain, partition), budget=budget)
        if result.verdict == Verdict.EQUIVALENT:
            return None
        return _graph_case(trial, tree, partition, verdict=result.verdict.value)

    _run_trials(check, trials, rng, body)
    return check


def check_size_forced_splits(trials: int, rng, max_n: int = 8, budget: int = None) -> PropertyCheck:
    """最大参与方超过最小参与方两倍的四方图态都可分"""
    check = PropertyCheck("size_forced_decomposable")

    def body(trial, rng):
        first = int(rng.integers(3, max(4, max_n - 3) + 1))
        room = max_n - first - 1
        second = int(rng.integers(1, max(1, min(first, room - 1)) + 1))
        third = int(rng.integers(1, max(1, min(first, room - second)) + 1))
        sizes = (first, second, third, 1)
        partition = PartyPartition.from_sizes(sizes)
        graph = random_graph(partition.n, 2, rng)
        result = fitting_split(from_graph(graph, partition), budget=budget)
        if result.splits:
            return None
        return _graph_case(trial, graph, partition, status=result.status.value)

    _run_trials(check, trials, rng, body)
    return check


def run_property_suite(trials: int = 100, seed: int = None, budgets: Optional[dict] = None,
                       names: Optional[Sequence[str]] = None) -> PropertyReport:
    """
    Args:
        trials: 每项检查的随机样本数 (qutrit 树和四方划分各取 trials/5)
        names: 只运行这些检查
    """
    seed = effective_seed() if seed is None else seed
    budgets = effective_budgets() if budgets is None else {**effective_budgets(), **budgets}
    congruence_budget = budgets['congruence_search']
    ring_budget = budgets['ring_enumeration']
    rng = np.random.default_rng(seed)
    small = max(1, trials // 5)

    checks = {
        "rank_condition": lambda: check_rank_condition(trials, rng),
        "rank_inequality": lambda: check_rank_inequality(trials, rng),
        "synthesis_round_trip": lambda: check_synthesis_round_trip(trials, rng, budget=congruence_budget),
        "lce_orbit": lambda: check_lce_orbit(small, rng, budget=congruence_budget),
        "qutrit_tree_multiplicities": lambda: check_qutrit_trees(small, rng, budget=congruence_budget),
        "size_forced_decomposable": lambda: check_size_forced_splits(small, rng, budget=ring_budget),
    }
    report = PropertyReport("properties", seed)
    logger.info(f"🧪 性质检查: 每项 {trials} 次, seed={seed}")
    for name, run in checks.items():
        if names and name not in names:
            continue
        check = run()
        report.checks.append(check)
        mark = "✅" if check.passed else "❌"
        logger.info(f"   {mark} {name:<28} {check.passed_count}/{check.trials}")
    return report


# ============================================
# 暴力对照
# ============================================

def run_oracle_suite(count: int = 50, max_n: int = 4, seed: int = None,
                     budgets: Optional[dict] = None) -> PropertyReport:
    """
    随机对易矩阵组 (及其随机合同像) 两两比较:
    合同判定对照 GL(n, 2) 暴力搜索，fitting_split 对照暴力分块搜索
    """
    seed = effective_seed() if seed is None else seed
    budgets = effective_budgets() if budgets is None else {**effective_budgets(), **budgets}
    rng = np.random.default_rng(seed)
    corpus: List[CommutationTuple] = []
    while len(corpus) < count:
        n = int(rng.integers(1, max_n + 1))
        M = int(rng.integers(1, min(n, 3) + 1))
        c = random_commutation_tuple(n, M, 2, rng)
        corpus.append(c)
        if len(corpus) < count:
            corpus.append(change_basis(c, random_invertible(n, 2, rng)))

    congruence = PropertyCheck("congruence_vs_brute_force")
    fitting = PropertyCheck("fitting_vs_brute_force")
    for idx, c in enumerate(corpus):
        fitting.trials += 1
        result = fitting_split(c, budget=budgets['ring_enumeration'], seed=seed)
        brute = brute_force_block_diagonalizable(c)
        if result.status == FittingStatus.INCONCLUSIVE or result.splits != (brute is not None):
            fitting.fail({"trial": idx, "n": c.n, "tuple": c.to_dict(), "fitting": result.status.value,
                          "brute_force": brute is not None})
        else:
            fitting.passed_count += 1

    for i in range(len(corpus)):
        for j in range(i + 1, len(corpus)):
            a, b = corpus[i], corpus[j]
            if a.n != b.n or a.M != b.M:
                continue
            congruence.trials += 1
            result = congruence_equivalent(a, b, budget=budgets['congruence_search'], seed=seed)
            brute = brute_force_congruence(a, b)
            agree = (result.verdict == Verdict.EQUIVALENT) == (brute is not None)
            if result.verdict == Verdict.INCONCLUSIVE or not agree:
                congruence.fail({"trial": i * len(corpus) + j, "n": a.n, "a": a.to_dict(), "b": b.to_dict(),
                                 "decision": result.verdict.value, "brute_force": brute is not None})
            else:
                congruence.passed_count += 1

    report = PropertyReport("oracle", seed, [congruence, fitting])
    for check in report.checks:
        mark = "✅" if check.passed else "❌"
        logger.info(f"   {mark} {check.name:<28} {check.passed_count}/{check.trials}")
    return report


# ============================================
# 三方态
# ============================================

def run_tripartite_suite(trials: int = 50, max_n: int = 8, order_trials: int = None,
                         seed: int = None, budgets: Optional[dict] = None) -> PropertyReport:
    """随机三方图态的 |0>/Bell/GHZ 计数，以及随机预合同下分块不变"""
    seed = effective_seed() if seed is None else seed
    budgets = effective_budgets() if budgets is None else {**effective_budgets(), **budgets}
    order_trials = SEARCH['order_trials'] if order_trials is None else order_trials
    rng = np.random.default_rng(seed)
    named = PropertyCheck("tripartite_named_blocks")
    invariance = PropertyCheck("decomposition_order_invariance")

    for trial in range(trials):
        n = int(rng.integers(3, max_n + 1))
        graph = random_graph(n, 2, rng)
        partition = random_partition(n, 3, rng)
        state = graph_state(graph)
        named.trials += 1
        invariance.trials += 1
        try:
            counts = tripartite_canonical_counts(state, partition, budget=budgets['ring_enumeration'])
            named.passed_count += 1
        except PLCError as e:
            named.fail(_graph_case(trial, graph, partition, error=f"{type(e).__name__}: {e}"))
            continue
        try:
            probe = decomposition_order_invariance(from_state(state, partition), trials=order_trials,
                                                   seed=int(rng.integers(0, 2 ** 31)),
                                                   budget=budgets['ring_enumeration'])
        except PLCError as e:
            invariance.fail(_graph_case(trial, graph, partition, error=f"{type(e).__name__}: {e}"))
            continue
        if probe.consistent:
            invariance.passed_count += 1
        else:
            invariance.fail(_graph_case(trial, graph, partition, counts=counts.to_dict(),
                                        block_sizes=probe.block_sizes))

    report = PropertyReport("tripartite", seed, [named, invariance])
    for check in report.checks:
        mark = "✅" if check.passed else "❌"
        logger.info(f"   {mark} {check.name:<32} {check.passed_count}/{check.trials}")
    return report


SUITES = ("spiral", "cosets", "properties", "oracle", "tripartite")


def run_suite(suite: str, trials: Optional[int] = None, max_n: Optional[int] = None, d: int = 2,
              seed: Optional[int] = None, budgets: Optional[dict] = None):
    """
    按名称运行一组验证

    Returns:
        带 passed 和 to_dict 的报告
    """
    started = datetime.datetime.now()
    budgets = effective_budgets() if budgets is None else {**effective_budgets(), **budgets}
    logger.info("=" * 60)
    logger.info(f"🔬 验证: {suite}")
    logger.info("=" * 60)
    if suite == "spiral":
        report = verify_spiral_family(range(4, (max_n or 12) + 1), d=d, seed=seed,
                                      budget=budgets['ring_enumeration'])
    elif suite == "cosets":
        report = verify_cosets()
    elif suite == "properties":
        report = run_property_suite(trials or 100, seed=seed, budgets=budgets)
    elif suite == "oracle":
        report = run_oracle_suite(trials or 50, max_n=max_n or 4, seed=seed, budgets=budgets)
    elif suite == "tripartite":
        report = run_tripartite_suite(trials or 50, max_n=max_n or 8, seed=seed, budgets=budgets)
    else:
        raise ValueError(f"未知的验证项: {suite} (可选 {', '.join(SUITES)})")
    duration = (datetime.datetime.now() - started).seconds
    logger.info(f"\n⏱️ 执行耗时: {duration // 60} 分 {duration % 60} 秒")
    return report


if __name__ == "__main__":
    for name in ("cosets", "spiral"):
        run_suite(name)
