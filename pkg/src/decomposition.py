#!/usr/bin/env python
"""
对易矩阵组的完全分解与具名态计数

decompose 递归调用 fitting_split，直到每一块都不可分；
分块再与参考组比较合同: 1×1 零块为 |0>，两方单边图为 Bell 对，星图为 GHZ。
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from config.settings import EGS, SEARCH
from src.commutation import (
    CommutationTuple,
    change_basis,
    direct_sum,
    from_graph,
    from_state,
    rank_condition,
)
from src.equivalence import (
    FittingStatus,
    Verdict,
    congruence_equivalent,
    fitting_split,
)
from src.errors import (
    BudgetExceededError,
    InternalError,
    PreconditionError,
    StabilizerCodeTupleError,
)
from src.field_linalg import (
    PrimeFieldMatrix,
    block_diag,
    identity,
    left_kernel,
    random_invertible,
    rank,
    row_space,
    solve_linear,
    vstack,
)
from src.stabilizer_states import (
    GraphAdjacency,
    StabilizerTableau,
    colocal_subspace,
    local_subspace_dim,
)
from src.symplectic_pauli import PartyPartition
from src.utils import logger


@dataclass
class DecompositionReport:
    """
    witness·C_α·witnessᵀ = ⊕ blocks[i]_α

    complete 为 False 时至少有一块的 Fitting 判定是 inconclusive。
    """
    blocks: List[CommutationTuple]
    witness: PrimeFieldMatrix
    complete: bool = True
    names: List[str] = field(default_factory=list)
    unresolved: List[int] = field(default_factory=list)

    @property
    def sizes(self) -> List[int]:
        return [b.n for b in self.blocks]

    def named_counts(self) -> Dict:
        counts = {"zero": 0, "bell": Counter(), "ghz": Counter(), "other": 0}
        for name in self.names:
            if name == "zero":
                counts["zero"] += 1
            elif name.startswith("bell:"):
                counts["bell"][name[5:]] += 1
            elif name.startswith("ghz:"):
                counts["ghz"][name[4:]] += 1
            else:
                counts["other"] += 1
        counts["bell"] = dict(sorted(counts["bell"].items()))
        counts["ghz"] = dict(sorted(counts["ghz"].items()))
        return counts

    def to_dict(self) -> dict:
        return {
            "complete": self.complete,
            "sizes": self.sizes,
            "names": list(self.names),
            "named_counts": self.named_counts() if self.names else None,
            "unresolved_blocks": list(self.unresolved),
            "witness": self.witness.tolist(),
            "blocks": [b.to_dict() for b in self.blocks],
        }


@dataclass(frozen=True)
class TripartiteCounts:
    """三方态 = ⊗ |0>^k1 ⊗ Bell^k2 ⊗ GHZ^k3"""

    zeros: Tuple[int, int, int]
    bell: Tuple[int, int, int]      # 参与方对 (1,2), (1,3), (2,3)
    ghz: int

    def as_tuple(self) -> Tuple[Tuple[int, ...], Tuple[int, ...], int]:
        return self.zeros, self.bell, self.ghz

    def to_dict(self) -> dict:
        return {
            "zeros": list(self.zeros),
            "bell": {"1,2": self.bell[0], "1,3": self.bell[1], "2,3": self.bell[2]},
            "ghz": self.ghz,
        }


@dataclass
class GhzConditionResult:
    holds: bool
    anchor: int
    targets: Tuple[int, ...]
    witnesses: List[PrimeFieldMatrix] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "anchor": self.anchor + 1,
            "targets": [t + 1 for t in self.targets],
            "witnesses": [w.tolist()[0] for w in self.witnesses],
        }


@dataclass
class OrderInvarianceResult:
    consistent: bool
    trials: int
    block_sizes: List[List[int]] = field(default_factory=list)
    inconclusive: bool = False

    def __bool__(self) -> bool:
        return self.consistent

    def to_dict(self) -> dict:
        return {
            "consistent": self.consistent,
            "trials": self.trials,
            "block_sizes": self.block_sizes,
            "inconclusive": self.inconclusive,
        }


# ============================================
# 参考组
# ============================================

def reference_ghz_tuple(parties: Sequence[int], M: int, d=2) -> CommutationTuple:
    """
    星图态的对易矩阵组: 中心在 parties[0]，每个叶子在 parties 中的一个参与方

    两方时即单边图 (Bell 对)。其余参与方的矩阵为零。
    """
    members = list(parties)
    s = len(members)
    graph = GraphAdjacency.from_edges(s, [(0, leaf) for leaf in range(1, s)], d)
    layout = [()] * M
    for site, party in enumerate(members):
        layout[party] = (site,)
    partition = PartyPartition(s, tuple(layout), allow_empty=True)
    return CommutationTuple(from_graph(graph, partition).matrices)


def name_block(block: CommutationTuple, budget: int = None) -> str:
    """
    给不可分块命名

    Returns:
        "zero" | "bell:a,b" | "ghz:a,b,c,..." | "other" (参与方从 1 起)
    """
    if block.n == 1 and all(m.is_zero() for m in block.matrices):
        return "zero"
    support = block.support_parties()
    if len(support) >= 2 and block.n == len(support):
        reference = reference_ghz_tuple(support, block.M, block.d)
        result = congruence_equivalent(block, reference, budget=budget)
        if result.verdict == Verdict.EQUIVALENT:
            label = ",".join(str(a + 1) for a in support)
            return f"bell:{label}" if len(support) == 2 else f"ghz:{label}"
    return "other"


# ============================================
# 分解
# ============================================

def _decompose_block(c: CommutationTuple, budget, samples, seed) -> Tuple[List[CommutationTuple], PrimeFieldMatrix, List[bool]]:
    result = fitting_split(c, budget=budget, samples=samples, seed=seed)
    if not result.splits:
        return [c], identity(c.n, c.order), [result.status == FittingStatus.INDECOMPOSABLE]
    n1 = result.sizes[0]
    conjugated = change_basis(c, result.witness)
    first = conjugated.block(range(n1))
    second = conjugated.block(range(n1, c.n))
    blocks1, w1, ok1 = _decompose_block(first, budget, samples, seed)
    blocks2, w2, ok2 = _decompose_block(second, budget, samples, seed)
    return blocks1 + blocks2, block_diag(w1, w2) @ result.witness, ok1 + ok2


def decompose(c: CommutationTuple, budget: int = None, samples: int = None, seed=None,
              name_blocks: bool = True, naming_budget: int = None) -> DecompositionReport:
    """
    分解为不可分块的直和

    Args:
        budget: 传给 fitting_split 的自同态环预算
        naming_budget: 命名时合同搜索的预算，缺省与 budget 相同
        name_blocks: 是否与 zero / Bell / GHZ 参考组比较并命名

    Raises:
        StabilizerCodeTupleError: 秩条件不成立
    """
    if not rank_condition(c):
        raise StabilizerCodeTupleError()
    blocks, witness, resolved = _decompose_block(c, budget, samples, seed)

    total = blocks[0]
    for b in blocks[1:]:
        total = direct_sum(total, b)
    if change_basis(c, witness).matrices != total.matrices:
        raise InternalError("分解见证矩阵未通过复核")
    for idx, b in enumerate(blocks):
        if not rank_condition(b):
            raise InternalError(f"第 {idx + 1} 块不满足秩条件")

    unresolved = [idx for idx, ok in enumerate(resolved) if not ok]
    naming_budget = budget if naming_budget is None else naming_budget
    names = [name_block(b, budget=naming_budget) for b in blocks] if name_blocks else []
    if unresolved:
        logger.debug(f"分解未完成: {len(unresolved)} 块的 Fitting 判定为 inconclusive")
    return DecompositionReport(blocks, witness, not unresolved, names, unresolved)


# ============================================
# 具名计数
# ============================================

def tripartite_canonical_counts(state: StabilizerTableau, partition: PartyPartition,
                                budget: int = None) -> TripartiteCounts:
    """
    三方稳定子态中 |0>、Bell、GHZ 的个数

    |0> 按参与方计数 (dim V_α)；每个不可分块必须是三种参考态之一。
    """
    if partition.M != 3:
        raise PreconditionError(f"需要 3 个参与方, 实际 {partition.M}")
    c = from_state(state, partition)
    report = decompose(c, budget=budget)
    if not report.complete:
        raise BudgetExceededError("三方分解在预算内未完成", budget=budget)

    zeros_total = 0
    bell = {"1,2": 0, "1,3": 0, "2,3": 0}
    ghz = 0
    for idx, name in enumerate(report.names):
        if name == "zero":
            zeros_total += 1
        elif name.startswith("bell:"):
            bell[name[5:]] += 1
        elif name == "ghz:1,2,3":
            ghz += 1
        else:
            raise InternalError(f"三方分块 {idx + 1} 不是 |0>/Bell/GHZ 之一: {report.blocks[idx].to_dict()}")

    zeros = tuple(local_subspace_dim(state, partition, a) for a in range(3))
    if sum(zeros) != zeros_total:
        raise InternalError(f"|0> 个数不一致: 局域子空间 {zeros} vs 零块 {zeros_total}")
    return TripartiteCounts(zeros, (bell["1,2"], bell["1,3"], bell["2,3"]), ghz)


def ghz_extraction_count(state: StabilizerTableau, partition: PartyPartition) -> int:
    """Δ = n − dim span(∪_α 余局域子空间)"""
    colocal = [colocal_subspace(state, partition, a) for a in range(partition.M)]
    colocal = [m for m in colocal if m.rows]
    if not colocal:
        return state.n
    return state.n - rank(vstack(colocal))


def _intersect_rows(u: PrimeFieldMatrix, v: PrimeFieldMatrix) -> PrimeFieldMatrix:
    """两个行空间的交，行为基向量"""
    if u.rows == 0 or v.rows == 0:
        return PrimeFieldMatrix(np.zeros((0, u.cols), dtype=np.int64), u.order)
    coefficients = left_kernel(vstack([u, v]))
    if coefficients.rows == 0:
        return PrimeFieldMatrix(np.zeros((0, u.cols), dtype=np.int64), u.order)
    x = coefficients.submatrix(range(coefficients.rows), range(u.rows))
    return row_space(x @ u)


def ghz_extraction_condition(state: StabilizerTableau, partition: PartyPartition,
                             anchor: Optional[int] = None, excluded: Optional[int] = None) -> GhzConditionResult:
    """
    是否存在 f_1..f_{M−2} ∈ S，supp(f_j) = α_anchor ∪ β_j，且在 α_anchor 上的限制相同

    anchor 缺省取 EGS['anchor_party']。
    β_j 取除 anchor 和 excluded (默认最后一个其它参与方) 之外的参与方。
    成立时可抽取 GHZ_{M−1} 或 GHZ_M。

    Raises:
        PreconditionError: 某个参与方的局域子空间非零
    """
    M = partition.M
    if M < 2:
        raise PreconditionError(f"至少需要 2 个参与方, 实际 {M}")
    if anchor is None:
        anchor = EGS['anchor_party']
    if not 0 <= anchor < M:
        raise PreconditionError(f"锚定参与方越界: {anchor + 1}")
    local = [local_subspace_dim(state, partition, a) for a in range(M)]
    if any(local):
        raise PreconditionError(f"precondition: not full local rank (dim V_α = {local})")
    if excluded is None:
        excluded = max(a for a in range(M) if a != anchor)
    targets = tuple(a for a in range(M) if a not in (anchor, excluded))
    if not targets:
        return GhzConditionResult(True, anchor, targets)

    rows = range(state.generators.rows)
    anchor_cols = partition.site_columns(anchor)
    pair_spaces = []
    common = None
    for beta in targets:
        others = [a for a in range(M) if a not in (anchor, beta)]
        outside = [col for a in others for col in partition.site_columns(a)]
        coefficients = left_kernel(state.generators.submatrix(rows, outside))
        if coefficients.rows == 0:
            return GhzConditionResult(False, anchor, targets)
        # 局域子空间为零时，非零元素在 anchor 和 β 上都不为零
        elements = coefficients @ state.generators
        restricted = elements.submatrix(range(elements.rows), anchor_cols)
        pair_spaces.append((elements, restricted))
        common = restricted if common is None else _intersect_rows(common, restricted)
        if common.rows == 0:
            return GhzConditionResult(False, anchor, targets)

    target_vector = common.submatrix([0], range(common.cols))
    witnesses = []
    for elements, restricted in pair_spaces:
        solution = solve_linear(restricted.T, target_vector.T, strict=True)
        witnesses.append(solution.particular.T @ elements)
    return GhzConditionResult(True, anchor, targets, witnesses)


def sizes_force_decomposable(partition) -> bool:
    """
    四方划分中最大参与方超过最小参与方两倍时，所有态都可分

    Args:
        partition: PartyPartition 或参与方大小序列
    """
    sizes = partition.sizes if isinstance(partition, PartyPartition) else tuple(partition)
    if len(sizes) != 4:
        raise PreconditionError(f"需要 4 个参与方, 实际 {len(sizes)}")
    ordered = sorted(sizes, reverse=True)
    return ordered[0] > 2 * ordered[3]


# ============================================
# 分解顺序不变性探测
# ============================================

def _match_blocks(reference: List[CommutationTuple], other: List[CommutationTuple],
                  budget: int = None) -> Tuple[bool, bool]:
    """
    贪心合同匹配

    Returns:
        (全部匹配, 是否遇到 inconclusive)
    """
    if sorted(b.n for b in reference) != sorted(b.n for b in other):
        return False, False
    unmatched = list(range(len(reference)))
    inconclusive = False
    for block in other:
        hit = None
        for idx in unmatched:
            candidate = reference[idx]
            if candidate.n != block.n:
                continue
            result = congruence_equivalent(block, candidate, budget=budget)
            if result.verdict == Verdict.EQUIVALENT:
                hit = idx
                break
            if result.verdict == Verdict.INCONCLUSIVE:
                inconclusive = True
        if hit is None:
            return False, inconclusive
        unmatched.remove(hit)
    return True, inconclusive


def decomposition_order_invariance(c: CommutationTuple, trials: int = None, seed=None,
                                   budget: int = None) -> OrderInvarianceResult:
    """
    多次随机预合同后分解，比较分块的合同类多重集

    结果只做报告: 量子比特情形下分解是否唯一尚无定论。
    """
    trials = SEARCH['order_trials'] if trials is None else trials
    seed = SEARCH['seed'] if seed is None else seed
    rng = np.random.default_rng(seed)
    baseline = decompose(c, budget=budget, seed=seed, name_blocks=False)
    sizes = [sorted(baseline.sizes)]
    inconclusive = not baseline.complete
    for trial in range(trials):
        q = random_invertible(c.n, c.order, rng)
        run = decompose(change_basis(c, q), budget=budget, seed=int(rng.integers(0, 2 ** 31)),
                        name_blocks=False)
        sizes.append(sorted(run.sizes))
        inconclusive = inconclusive or not run.complete
        matched, unsure = _match_blocks(baseline.blocks, run.blocks, budget)
        inconclusive = inconclusive or unsure
        if not matched:
            logger.debug(f"分解顺序探测: 第 {trial + 1} 次分块与基准不一致 {sizes[-1]} vs {sizes[0]}")
            return OrderInvarianceResult(False, trial + 1, sizes, inconclusive)
    return OrderInvarianceResult(True, trials, sizes, inconclusive)
