#!/usr/bin/env python
"""
EGS 搜索任务
按参与方配置枚举图态，去掉可分的，再按 PLC 等价类去重，每类留一个代表元

流程:
1. 枚举 (多重) 图: 可选删除参与方内部的边、按保持参与方的顶点置换取规范代表
2. 筛选: 不连通的图直接视为可分，其余跑 fitting_split (多进程)
3. 去重: 按合同不变量分桶，桶内两两合同判定 (单进程，顺序确定)
4. 参与方重标号商: 大小相同的参与方互换后合同的类合并计数

inconclusive 的图进入隔离列表，不会被静默丢弃；有隔离项时报告状态为 PARTIAL
"""
import itertools
import json
import os
import sys
import datetime
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

# 添加项目根目录到路径
# 路径层级: src/tasks/egs_search.py -> src/tasks/ -> src/ -> 项目根目录
PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
sys.path.insert(0, PROJECT_ROOT)

from config import BUDGET, CONCURRENT, EGS, SEARCH
from config.env_settings import effective_budgets, effective_seed, effective_workers
from src.cache_manager import CHUNK_COLUMNS, CacheManager, cache_manager
from src.commutation import CommutationTuple, from_graph, permute_parties, rank_condition, validate
from src.data_loader import read_orbit_database
from src.decomposition import sizes_force_decomposable
from src.equivalence import (
    FittingStatus,
    Verdict,
    congruence_equivalent,
    congruence_invariants,
    fitting_split,
)
from src.errors import BudgetExceededError, InternalError, InvalidStateError, PLCError
from src.field_linalg import PrimeFieldMatrix, as_order
from src.stabilizer_states import GraphAdjacency
from src.symplectic_pauli import PartyPartition
from src.utils import dumps_deterministic, format_sizes, logger, parse_sizes


# ============================================
# 参与方配置
# ============================================

@dataclass(frozen=True)
class PartyConfiguration:
    """参与方大小的有序列表，如 (2, 1, 1, 1)"""

    sizes: Tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if not sizes or any(s < 1 for s in sizes):
            raise InvalidStateError(f"参与方大小必须为正整数: {sizes}")
        object.__setattr__(self, "sizes", sizes)

    @classmethod
    def parse(cls, text: str) -> "PartyConfiguration":
        try:
            return cls(parse_sizes(text))
        except ValueError as exc:
            raise InvalidStateError(str(exc)) from exc

    @classmethod
    def coerce(cls, value: Union["PartyConfiguration", str, Sequence[int]]) -> "PartyConfiguration":
        if isinstance(value, cls):
            return value
        if isinstance(value, str):
            return cls.parse(value)
        return cls(tuple(value))

    def __str__(self) -> str:
        return format_sizes(self.sizes)

    @property
    def n(self) -> int:
        return sum(self.sizes)

    @property
    def M(self) -> int:
        return len(self.sizes)

    def partition(self) -> PartyPartition:
        return PartyPartition.from_sizes(self.sizes)

    def site_permutations(self) -> List[Tuple[int, ...]]:
        """保持每个参与方不变的顶点置换 (完整映射 v -> σ(v))"""
        partition = self.partition()
        perms = []
        for images in itertools.product(*(itertools.permutations(p) for p in partition.parties)):
            sigma = [0] * self.n
            for party, image in zip(partition.parties, images):
                for v, w in zip(party, image):
                    sigma[v] = w
            perms.append(tuple(sigma))
        return perms

    def party_relabelings(self) -> List[Tuple[int, ...]]:
        """只交换大小相同参与方的置换，含恒等"""
        return [
            perm for perm in itertools.permutations(range(self.M))
            if all(self.sizes[perm[k]] == self.sizes[k] for k in range(self.M))
        ]


# ============================================
# 报告
# ============================================

@dataclass
class EgsRepresentative:
    key: str
    graph: GraphAdjacency
    commutation: CommutationTuple
    members: int = 1

    def to_dict(self) -> dict:
        return {
            "key": self.key,
            "n": self.graph.n,
            "edges": [[i + 1, j + 1, m] for i, j, m in self.graph.edges()],
            "ranks": list(self.commutation.ranks()),
            "members": self.members,
        }


@dataclass
class QuarantineItem:
    key: str
    edges: List[List[int]]
    stage: str          # fitting | dedup | relabel | error
    reason: str

    def to_dict(self) -> dict:
        return {
            "key": self.key,
            "edges": [[i + 1, j + 1, m] for i, j, m in self.edges],
            "stage": self.stage,
            "reason": self.reason,
        }


@dataclass
class EgsReport:
    configuration: PartyConfiguration
    d: int
    representatives: List[EgsRepresentative] = field(default_factory=list)
    relabel_classes: List[List[int]] = field(default_factory=list)
    quarantined: List[QuarantineItem] = field(default_factory=list)
    stats: Dict[str, int] = field(default_factory=dict)
    budgets: Dict[str, int] = field(default_factory=dict)
    seed: int = 0
    source: str = "enumeration"
    partial: bool = False
    notes: List[str] = field(default_factory=list)

    @property
    def class_count(self) -> int:
        return len(self.representatives)

    @property
    def class_count_up_to_relabeling(self) -> int:
        return len(self.relabel_classes)

    @property
    def complete(self) -> bool:
        return not self.partial and not self.quarantined

    @property
    def status(self) -> str:
        return "COMPLETE" if self.complete else "PARTIAL"

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "configuration": list(self.configuration.sizes),
            "d": self.d,
            "source": self.source,
            "class_count": self.class_count,
            "class_count_up_to_relabeling": self.class_count_up_to_relabeling,
            "representatives": [r.to_dict() for r in self.representatives],
            "relabel_classes": [[i + 1 for i in cls] for cls in self.relabel_classes],
            "quarantined": [q.to_dict() for q in self.quarantined],
            "stats": dict(self.stats),
            "budgets": dict(self.budgets),
            "seed": self.seed,
            "notes": list(self.notes),
        }


# 计数器的固定键
STAT_KEYS = ("examined", "non_canonical", "disconnected", "decomposable",
             "indecomposable", "inconclusive", "error")


def _empty_counts() -> Dict[str, int]:
    return {k: 0 for k in STAT_KEYS}


# ============================================
# 图的枚举
# ============================================

def spiral_graph(n: int, d: int = 2) -> Tuple[GraphAdjacency, PartyPartition]:
    """
    螺旋图态: 路径 1–2–…–n，第 j 个位点属于第 ((j−1) mod 4)+1 个参与方

    两个端点的生成元只跨 2 个参与方，其余生成元跨 3 个。
    """
    if n < 4:
        raise InvalidStateError(f"螺旋图至少需要 4 个位点: n={n}")
    graph = GraphAdjacency.from_edges(n, [(j, j + 1) for j in range(n - 1)], d)
    partition = PartyPartition(n, tuple(tuple(range(p, n, 4)) for p in range(4)))
    return graph, partition


def edge_layout(config: PartyConfiguration, drop_intra_party_edges: bool) -> List[Tuple[int, int]]:
    """参与枚举的顶点对 (i < j)，字典序；编号的第 e 位对应第 e 条边的重数"""
    partition = config.partition()
    pairs = []
    for i, j in itertools.combinations(range(config.n), 2):
        if drop_intra_party_edges and partition.party_of(i) == partition.party_of(j):
            continue
        pairs.append((i, j))
    return pairs


def _edge_maps(pairs: Sequence[Tuple[int, int]], site_perms: Sequence[Tuple[int, ...]]) -> np.ndarray:
    """每个顶点置换诱导的边位置映射，形状 (P, E)"""
    index = {pair: e for e, pair in enumerate(pairs)}
    maps = np.zeros((len(site_perms), len(pairs)), dtype=np.int64)
    for p, sigma in enumerate(site_perms):
        for e, (i, j) in enumerate(pairs):
            a, b = sigma[i], sigma[j]
            maps[p, e] = index[(min(a, b), max(a, b))]
    return maps


def _decode_digits(codes: np.ndarray, edge_count: int, d: int) -> np.ndarray:
    powers = d ** np.arange(edge_count, dtype=np.int64)
    return (codes[:, None] // powers[None, :]) % d


def _adjacency_batch(digits: np.ndarray, pairs: Sequence[Tuple[int, int]], n: int) -> np.ndarray:
    adj = np.zeros((len(digits), n, n), dtype=np.int64)
    if pairs:
        rows = np.array([i for i, _ in pairs])
        cols = np.array([j for _, j in pairs])
        adj[:, rows, cols] = digits
        adj[:, cols, rows] = digits
    return adj


def _canonical_mask(codes: np.ndarray, digits: np.ndarray, maps: np.ndarray, d: int) -> np.ndarray:
    """编号在置换轨道里最小的图"""
    if maps.shape[0] <= 1 or maps.shape[1] == 0:
        return np.ones(len(codes), dtype=bool)
    powers = d ** np.arange(maps.shape[1], dtype=np.int64)
    images = digits @ powers[maps].T
    return codes <= images.min(axis=1)


def _connected_mask(adj: np.ndarray) -> np.ndarray:
    """布尔矩阵反复平方求可达性"""
    n = adj.shape[1]
    if n <= 1:
        return np.ones(len(adj), dtype=bool)
    reach = ((adj != 0) | np.eye(n, dtype=bool)[None]).astype(np.int64)
    steps = 1
    while steps < n:
        reach = (np.matmul(reach, reach) > 0).astype(np.int64)
        steps *= 2
    return reach[:, 0, :].all(axis=1)


def enumerate_graph_states(config, d: int = 2, budget: int = None, canonical_filter: bool = False,
                           drop_intra_party_edges: bool = False) -> Iterator[Tuple[GraphAdjacency, PartyPartition]]:
    """
    按编号顺序产出固定划分下的所有带标号 (多重) 图

    Raises:
        BudgetExceededError: d^(边数) 超过 budget
    """
    config = PartyConfiguration.coerce(config)
    budget = BUDGET['graph_enumeration'] if budget is None else budget
    pairs = edge_layout(config, drop_intra_party_edges)
    total = d ** len(pairs)
    if total > budget:
        raise BudgetExceededError(f"需要枚举 {d}^{len(pairs)} = {total} 个图, 超出预算 {budget}",
                                  required=total, budget=budget)
    partition = config.partition()
    maps = _edge_maps(pairs, config.site_permutations()) if canonical_filter else np.zeros((1, 0), dtype=np.int64)
    order = as_order(d)
    for start in range(0, total, CONCURRENT['chunk_size']):
        codes = np.arange(start, min(start + CONCURRENT['chunk_size'], total), dtype=np.int64)
        digits = _decode_digits(codes, len(pairs), d)
        keep = _canonical_mask(codes, digits, maps, d) if canonical_filter else np.ones(len(codes), dtype=bool)
        adj = _adjacency_batch(digits[keep], pairs, config.n)
        for matrix in adj:
            yield GraphAdjacency(PrimeFieldMatrix(matrix, order)), partition


# ============================================
# 筛选 (在子进程中运行)
# ============================================

@dataclass(frozen=True)
class ChunkTask:
    sizes: Tuple[int, ...]
    d: int
    start: int
    stop: int
    drop_intra_party_edges: bool
    canonical_filter: bool
    ring_budget: int
    ring_samples: int
    seed: int


@dataclass(frozen=True)
class GraphBatchTask:
    sizes: Tuple[int, ...]
    d: int
    items: Tuple[Tuple[str, Tuple[Tuple[int, int, int], ...]], ...]
    ring_budget: int
    ring_samples: int
    seed: int


def screen_graph(graph: GraphAdjacency, partition: PartyPartition, ring_budget: int,
                 ring_samples: int, seed: int) -> Tuple[str, str]:
    """fitting_split 的判定 (status, reason)，库内异常记为 error"""
    try:
        result = fitting_split(from_graph(graph, partition), budget=ring_budget,
                               samples=ring_samples, seed=seed)
    except PLCError as e:
        return "error", f"{type(e).__name__}: {e}"
    if result.status == FittingStatus.SPLIT:
        return "decomposable", result.reason
    return result.status.value, result.reason


def _record(counts: Dict[str, int], outcomes: List[dict], key: str,
            graph: GraphAdjacency, status: str, reason: str):
    counts[status] += 1
    if status != "decomposable":
        outcomes.append({
            "key": key,
            "edges": json.dumps([list(e) for e in graph.edges()]),
            "status": status,
            "reason": reason,
        })


def screen_chunk(task: ChunkTask) -> Tuple[List[dict], Dict[str, int]]:
    """
    处理编号区间 [start, stop)

    Returns:
        (非可分图的结果行, 计数)
    """
    config = PartyConfiguration(task.sizes)
    partition = config.partition()
    pairs = edge_layout(config, task.drop_intra_party_edges)
    counts = _empty_counts()
    outcomes: List[dict] = []

    codes = np.arange(task.start, task.stop, dtype=np.int64)
    counts["examined"] = len(codes)
    digits = _decode_digits(codes, len(pairs), task.d)
    if task.canonical_filter:
        keep = _canonical_mask(codes, digits, _edge_maps(pairs, config.site_permutations()), task.d)
        counts["non_canonical"] = int((~keep).sum())
        codes, digits = codes[keep], digits[keep]
    adj = _adjacency_batch(digits, pairs, config.n)
    connected = _connected_mask(adj)
    counts["disconnected"] = int((~connected).sum())

    for code, matrix in zip(codes[connected], adj[connected]):
        graph = GraphAdjacency(PrimeFieldMatrix(matrix, task.d))
        status, reason = screen_graph(graph, partition, task.ring_budget, task.ring_samples, task.seed)
        _record(counts, outcomes, f"code:{int(code)}", graph, status, reason)
    return outcomes, counts


def screen_graph_batch(task: GraphBatchTask) -> Tuple[List[dict], Dict[str, int]]:
    """轨道数据库路径: 逐个处理已重排好顶点的图"""
    config = PartyConfiguration(task.sizes)
    partition = config.partition()
    counts = _empty_counts()
    outcomes: List[dict] = []
    for key, edges in task.items:
        counts["examined"] += 1
        graph = GraphAdjacency.from_edges(config.n, edges, task.d)
        if not _connected_mask(graph.matrix.as_int()[None])[0]:
            counts["disconnected"] += 1
            continue
        status, reason = screen_graph(graph, partition, task.ring_budget, task.ring_samples, task.seed)
        _record(counts, outcomes, key, graph, status, reason)
    return outcomes, counts


def _run_tasks(tasks: Sequence, worker, max_workers: int,
               cache: Optional[CacheManager] = None, cache_key: Optional[str] = None) -> List[Tuple[List[dict], Dict[str, int]]]:
    """
    并发执行筛选任务，结果按任务顺序返回 (与进程数无关)

    只有 ChunkTask 走缓存
    """
    results: Dict[int, Tuple[List[dict], Dict[str, int]]] = {}
    pending = []
    for idx, task in enumerate(tasks):
        cached = None
        if cache is not None and cache_key and isinstance(task, ChunkTask):
            cached = cache.get_chunk(cache_key, task.start, task.stop)
        if cached is not None:
            frame, counts = cached
            merged = _empty_counts()
            merged.update(counts)
            results[idx] = (frame.to_dict("records"), merged)
        else:
            pending.append(idx)
    if len(results):
        logger.info(f"   📦 缓存命中 {len(results)}/{len(tasks)} 个分块")

    def _finish(idx: int, outcome: Tuple[List[dict], Dict[str, int]]):
        results[idx] = outcome
        task = tasks[idx]
        if cache is not None and cache_key and isinstance(task, ChunkTask):
            frame = pd.DataFrame(outcome[0], columns=CHUNK_COLUMNS)
            cache.save_chunk(cache_key, task.start, task.stop, frame, outcome[1])

    def _failed(idx: int, error: Exception) -> Tuple[List[dict], Dict[str, int]]:
        task = tasks[idx]
        label = f"chunk:{task.start}-{task.stop}" if isinstance(task, ChunkTask) else f"batch:{idx}"
        counts = _empty_counts()
        counts["error"] = 1
        return [{"key": label, "edges": "[]", "status": "error", "reason": str(error)}], counts

    progress_every = max(1, CONCURRENT['progress_every'])
    if max_workers <= 1 or len(pending) <= 1:
        for processed, idx in enumerate(pending, start=1):
            try:
                _finish(idx, worker(tasks[idx]))
            except Exception as e:
                logger.error(f"   ⚠️ 任务 {idx + 1} 出错: {e}")
                results[idx] = _failed(idx, e)
            if processed % progress_every == 0:
                logger.info(f"   进度: {processed}/{len(pending)}")
    else:
        with ProcessPoolExecutor(max_workers=max_workers) as executor:
            future_to_idx = {executor.submit(worker, tasks[idx]): idx for idx in pending}
            processed = 0
            for future in as_completed(future_to_idx):
                idx = future_to_idx[future]
                processed += 1
                try:
                    _finish(idx, future.result())
                except Exception as e:
                    logger.error(f"   ⚠️ 任务 {idx + 1} 出错: {e}")
                    results[idx] = _failed(idx, e)
                if processed % progress_every == 0:
                    logger.info(f"   进度: {processed}/{len(pending)}")
    return [results[idx] for idx in range(len(tasks))]


# ============================================
# 去重
# ============================================

def relabel_equivalent(a: CommutationTuple, b: CommutationTuple, relabelings: Sequence[Sequence[int]],
                       budget: int = None, samples: int = None, seed=None) -> Verdict:
    """是否存在某个参与方重标号 π 使 π(a) 与 b 合同"""
    unsure = False
    for perm in relabelings:
        result = congruence_equivalent(permute_parties(a, perm), b, budget=budget, samples=samples, seed=seed)
        if result.verdict == Verdict.EQUIVALENT:
            return Verdict.EQUIVALENT
        unsure = unsure or result.verdict == Verdict.INCONCLUSIVE
    return Verdict.INCONCLUSIVE if unsure else Verdict.INEQUIVALENT


def deduplicate(candidates: Iterable[Tuple[str, GraphAdjacency]], partition: PartyPartition,
                budget: int = None, samples: int = None,
                seed=None) -> Tuple[List[EgsRepresentative], List[QuarantineItem]]:
    """
    贪心分桶: 与已有代表元合同则并入，全部判定不合同则成为新代表元，
    遇到 inconclusive 且没有命中时进入隔离列表
    """
    representatives: List[EgsRepresentative] = []
    quarantined: List[QuarantineItem] = []
    buckets: Dict[str, List[int]] = {}
    for key, graph in candidates:
        c = from_graph(graph, partition)
        signature = dumps_deterministic(congruence_invariants(c))
        matched = None
        unsure = []
        for idx in buckets.get(signature, []):
            result = congruence_equivalent(c, representatives[idx].commutation,
                                           budget=budget, samples=samples, seed=seed)
            if result.verdict == Verdict.EQUIVALENT:
                matched = idx
                break
            if result.verdict == Verdict.INCONCLUSIVE:
                unsure.append(representatives[idx].key)
        if matched is not None:
            representatives[matched].members += 1
        elif unsure:
            quarantined.append(QuarantineItem(key, graph.edges(), "dedup",
                                              f"inconclusive against {', '.join(unsure)}"))
        else:
            buckets.setdefault(signature, []).append(len(representatives))
            representatives.append(EgsRepresentative(key, graph, c))
    return representatives, quarantined


def relabel_classes(representatives: Sequence[EgsRepresentative], relabelings: Sequence[Sequence[int]],
                    budget: int = None, samples: int = None, seed=None) -> Tuple[List[List[int]], List[str]]:
    """
    参与方重标号下的类 (代表元下标列表)

    inconclusive 时单独成类，并返回说明
    """
    classes: List[List[int]] = []
    notes = []
    for idx, rep in enumerate(representatives):
        placed = False
        for cls in classes:
            head = representatives[cls[0]]
            verdict = relabel_equivalent(rep.commutation, head.commutation, relabelings, budget, samples, seed)
            if verdict == Verdict.EQUIVALENT:
                cls.append(idx)
                placed = True
                break
            if verdict == Verdict.INCONCLUSIVE:
                notes.append(f"relabeling check {rep.key} vs {head.key} inconclusive")
        if not placed:
            classes.append([idx])
    return classes, notes


def check_report_invariants(report: EgsReport, budget: int = None, samples: int = None, seed=None) -> List[str]:
    """代表元都合法、满足秩条件、不可分且两两不合同；返回违例列表"""
    failures = []
    reps = report.representatives
    for rep in reps:
        c = rep.commutation
        if not validate(c).valid:
            failures.append(f"{rep.key}: 对易矩阵组非法")
            continue
        if not rank_condition(c):
            failures.append(f"{rep.key}: 不满足秩条件")
        status = fitting_split(c, budget=report.budgets.get('ring_enumeration'), seed=seed).status
        if status != FittingStatus.INDECOMPOSABLE:
            failures.append(f"{rep.key}: fitting_split = {status.value}")
    for i, j in itertools.combinations(range(len(reps)), 2):
        result = congruence_equivalent(reps[i].commutation, reps[j].commutation,
                                       budget=budget, samples=samples, seed=seed)
        if result.verdict == Verdict.EQUIVALENT:
            failures.append(f"{reps[i].key} 与 {reps[j].key} 合同")
    return failures


# ============================================
# 汇总
# ============================================

def _resolve(budgets: Optional[dict], seed, max_workers) -> Tuple[dict, int, int]:
    merged = effective_budgets()
    if budgets:
        merged.update({k: v for k, v in budgets.items() if v is not None})
    seed = effective_seed() if seed is None else seed
    max_workers = effective_workers() if max_workers is None else max_workers
    return merged, seed, max_workers


def _assemble(report: EgsReport, screened: List[Tuple[List[dict], Dict[str, int]]],
              partition: PartyPartition, verify: bool) -> EgsReport:
    budgets = report.budgets
    samples = SEARCH['congruence_samples']
    survivors = []
    for outcomes, counts in screened:
        for k in STAT_KEYS:
            report.stats[k] = report.stats.get(k, 0) + int(counts.get(k, 0))
        for row in outcomes:
            edges = [tuple(e) for e in json.loads(row["edges"])]
            if row["status"] == "indecomposable":
                graph = GraphAdjacency.from_edges(partition.n, edges, report.d)
                survivors.append((row["key"], graph))
            else:
                stage = "fitting" if row["status"] == "inconclusive" else "error"
                report.quarantined.append(QuarantineItem(row["key"], edges, stage, row["reason"]))

    logger.info(f"\n🔍 去重: {len(survivors)} 个不可分图")
    reps, held = deduplicate(survivors, partition, budgets['congruence_search'], samples, report.seed)
    report.representatives = reps
    report.quarantined.extend(held)

    relabelings = report.configuration.party_relabelings()
    classes, notes = relabel_classes(reps, relabelings, budgets['congruence_search'], samples, report.seed)
    report.relabel_classes = classes
    report.notes.extend(notes)
    report.notes.append("class counts cover indecomposable PLC classes only")

    if verify and reps:
        failures = check_report_invariants(report, budgets['congruence_search'], samples, report.seed)
        if failures:
            for failure in failures:
                logger.error(f"   ❌ {failure}")
            raise InternalError(f"EGS 代表元复核失败: {failures[0]}")
    return report


def _log_summary(report: EgsReport, started: datetime.datetime):
    logger.info("\n" + "=" * 60)
    logger.info(f"🧬 EGS 搜索结果 ({report.configuration}, d={report.d})")
    logger.info("=" * 60)
    for k in STAT_KEYS:
        logger.info(f"   {k:<15}: {report.stats.get(k, 0)}")
    logger.info(f"   PLC 类数:        {report.class_count}")
    logger.info(f"   重标号后类数:    {report.class_count_up_to_relabeling}")
    if report.quarantined:
        logger.warning(f"   ⚠️ 隔离 {len(report.quarantined)} 项, 报告为 PARTIAL")
    duration = (datetime.datetime.now() - started).seconds
    logger.info(f"\n⏱️ 执行耗时: {duration // 60} 分 {duration % 60} 秒")
    logger.info("-" * 60)


def egs_search(config, d: int = 2, budgets: Optional[dict] = None, seed: int = None,
               max_workers: int = None, use_cache: Optional[bool] = None,
               cache: Optional[CacheManager] = None, canonical_filter: Optional[bool] = None,
               drop_intra_party_edges: Optional[bool] = None, verify: Optional[bool] = None) -> EgsReport:
    """
    在固定的参与方配置上枚举全部图态并给出 PLC 类代表元

    Args:
        config: PartyConfiguration、"2,1,1,1" 或大小序列
        budgets: 覆盖 effective_budgets() 的预算
        use_cache: 是否读写分块缓存 (默认 CACHE['enabled'])

    Returns:
        EgsReport；图数超出预算时只处理前 budget 个编号并标记 PARTIAL
    """
    started = datetime.datetime.now()
    config = PartyConfiguration.coerce(config)
    budgets, seed, max_workers = _resolve(budgets, seed, max_workers)
    canonical_filter = EGS['canonical_filter'] if canonical_filter is None else canonical_filter
    drop_intra = EGS['drop_intra_party_edges'] if drop_intra_party_edges is None else drop_intra_party_edges
    verify = EGS['verify_representatives'] if verify is None else verify
    cache = cache if cache is not None else cache_manager
    use_cache = cache.enabled if use_cache is None else use_cache

    report = EgsReport(config, d, stats=_empty_counts(), budgets=budgets, seed=seed)
    logger.info("=" * 60)
    logger.info(f"🧬 EGS 搜索启动: 参与方 ({config}), n={config.n}, d={d}")
    logger.info("=" * 60)

    if config.M == 4 and sizes_force_decomposable(config.sizes):
        report.notes.append("party sizes force decomposability (largest > 2 x smallest)")
        logger.info("   参与方大小悬殊, 所有态都可分, 跳过枚举")
        _log_summary(report, started)
        return report

    pairs = edge_layout(config, drop_intra)
    total = d ** len(pairs)
    limit = total
    if total > budgets['graph_enumeration']:
        limit = budgets['graph_enumeration']
        report.partial = True
        report.notes.append(f"graph enumeration truncated: {limit} of {total} graphs")
        logger.warning(f"   ⚠️ 图数 {total} 超出预算 {limit}, 只处理前 {limit} 个")
    logger.info(f"   待枚举边: {len(pairs)}, 图数: {limit}, 进程数: {max_workers}")

    chunk = CONCURRENT['chunk_size']
    tasks = [
        ChunkTask(config.sizes, d, start, min(start + chunk, limit), drop_intra, canonical_filter,
                  budgets['ring_enumeration'], SEARCH['ring_samples'], seed)
        for start in range(0, limit, chunk)
    ]
    cache_key = None
    if use_cache:
        params = {
            "sizes": list(config.sizes), "d": d, "ring_budget": budgets['ring_enumeration'],
            "ring_samples": SEARCH['ring_samples'], "seed": seed, "chunk_size": chunk,
            "drop_intra": drop_intra, "canonical": canonical_filter,
        }
        cache_key = cache.config_key(params)
        cache.save_meta(cache_key, params)

    logger.info("\n🔄 筛选可分图...")
    screened = _run_tasks(tasks, screen_chunk, max_workers, cache if use_cache else None, cache_key)
    report = _assemble(report, screened, config.partition(), verify)
    _log_summary(report, started)
    return report


def qutrit_egs_search(config, budgets: Optional[dict] = None, **kwargs) -> EgsReport:
    """d = 3 的多重图搜索"""
    return egs_search(config, d=3, budgets=budgets, **kwargs)


# ============================================
# LC 轨道数据库
# ============================================

def party_assignments(n: int, sizes: Sequence[int]) -> Iterator[Tuple[Tuple[int, ...], ...]]:
    """把 n 个顶点分到按序排列、大小给定的参与方，参与方内部无序"""
    def _assign(remaining: Tuple[int, ...], k: int):
        if k == len(sizes):
            yield ()
            return
        for chosen in itertools.combinations(remaining, sizes[k]):
            rest = tuple(v for v in remaining if v not in chosen)
            for tail in _assign(rest, k + 1):
                yield (chosen,) + tail
    if sum(sizes) != n:
        return
    yield from _assign(tuple(range(n)), 0)


def _arrange(graph: GraphAdjacency, assignment: Sequence[Sequence[int]], drop_intra: bool,
             partition: PartyPartition) -> Tuple[Tuple[int, int, int], ...]:
    """顶点按参与方顺序重排，可选删除参与方内部的边"""
    order = [v for party in assignment for v in party]
    arr = graph.matrix.as_int()[np.ix_(order, order)]
    edges = []
    for i, j in itertools.combinations(range(len(order)), 2):
        if arr[i, j] and not (drop_intra and partition.party_of(i) == partition.party_of(j)):
            edges.append((i, j, int(arr[i, j])))
    return tuple(edges)


def egs_search_from_orbit_database(source, config, d: int = 2, budgets: Optional[dict] = None,
                                   seed: int = None, max_workers: int = None,
                                   drop_intra_party_edges: Optional[bool] = None,
                                   verify: Optional[bool] = None) -> EgsReport:
    """
    从 LC 轨道代表元出发: 每个图的每种顶点到参与方的分配都跑一遍同样的流程

    Args:
        source: 数据库文件路径或 GraphAdjacency 列表
    """
    started = datetime.datetime.now()
    config = PartyConfiguration.coerce(config)
    budgets, seed, max_workers = _resolve(budgets, seed, max_workers)
    drop_intra = EGS['drop_intra_party_edges'] if drop_intra_party_edges is None else drop_intra_party_edges
    verify = EGS['verify_representatives'] if verify is None else verify
    graphs = read_orbit_database(source, d) if isinstance(source, str) else list(source)

    report = EgsReport(config, d, stats=_empty_counts(), budgets=budgets, seed=seed, source="orbit-database")
    report.stats["database_graphs"] = len(graphs)
    logger.info("=" * 60)
    logger.info(f"🧬 轨道数据库 EGS 搜索: {len(graphs)} 个图, 参与方 ({config}), d={d}")
    logger.info("=" * 60)

    if config.M == 4 and sizes_force_decomposable(config.sizes):
        report.notes.append("party sizes force decomposability (largest > 2 x smallest)")
        _log_summary(report, started)
        return report

    partition = config.partition()
    seen = set()
    items = []
    skipped = 0
    truncated = False
    for gi, graph in enumerate(graphs):
        if graph.n != config.n:
            skipped += 1
            continue
        for assignment in party_assignments(graph.n, config.sizes):
            edges = _arrange(graph, assignment, drop_intra, partition)
            if edges in seen:
                continue
            if len(items) >= budgets['graph_enumeration']:
                truncated = True
                break
            seen.add(edges)
            label = "|".join(",".join(str(v + 1) for v in party) for party in assignment)
            items.append((f"db:{gi + 1}:{label}", edges))
        if truncated:
            break
    report.stats["size_mismatch"] = skipped
    if truncated:
        report.partial = True
        report.notes.append(f"assignments truncated at {budgets['graph_enumeration']}")
    logger.info(f"   不同的带划分图: {len(items)} (跳过顶点数不符的图 {skipped} 个)")

    batch = max(1, CONCURRENT['chunk_size'] // 16)
    tasks = [
        GraphBatchTask(config.sizes, d, tuple(items[i:i + batch]), budgets['ring_enumeration'],
                       SEARCH['ring_samples'], seed)
        for i in range(0, len(items), batch)
    ]
    screened = _run_tasks(tasks, screen_graph_batch, max_workers)
    report = _assemble(report, screened, partition, verify)
    _log_summary(report, started)
    return report


if __name__ == "__main__":
    import argparse
    parser = argparse.ArgumentParser(description="EGS 搜索")
    parser.add_argument("--sizes", default="1,1,1,1")
    parser.add_argument("--d", type=int, default=2)
    args = parser.parse_args()
    egs_search(args.sizes, d=args.d)
