#!/usr/bin/env python
"""
对易矩阵组的合同判定与 Fitting 分裂

合同判定分三步:
1. 廉价不变量过滤 (参与方子集之和的秩、拼接秩)
2. 求解线性松弛 X·A_α = B_α·Y (X、Y 为未知矩阵，按列优先展平)
3. 在解空间里搜索满足 X·Yᵀ = I 的点: 空间不超过预算时穷举，否则带种子随机采样

自伴自同态满足 C_α E = Eᵀ C_α；它的幂仍满足该关系，
幂次足够高时得到幂等元，真幂等元 (非零非满秩) 给出分块。
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from config.settings import BUDGET, SEARCH
from src.commutation import (
    CommutationTuple,
    change_basis,
    from_state,
    is_alternating,
    radical_split_transform,
)
from src.errors import FieldMismatchError, InternalError, InvalidTupleError
from src.field_linalg import (
    PrimeFieldMatrix,
    batch_matmul,
    batch_power,
    batch_rank,
    block_diag,
    column_space,
    identity,
    invert,
    invertible_stack,
    kernel,
    rank,
    unvec,
    vstack,
)
from src.stabilizer_states import StabilizerTableau
from src.symplectic_pauli import PartyPartition
from src.utils import logger

# 批量处理的系数向量个数
BATCH_SIZE = 4096

# 参与方不超过此数时检查全部子集的秩，否则只检查单个和两两之和
FULL_SUBSET_LIMIT = 12


class Verdict(str, Enum):
    EQUIVALENT = "equivalent"
    INEQUIVALENT = "inequivalent"
    INCONCLUSIVE = "inconclusive"


class FittingStatus(str, Enum):
    INDECOMPOSABLE = "indecomposable"
    SPLIT = "split"
    INCONCLUSIVE = "inconclusive"


@dataclass
class CongruenceResult:
    """
    合同判定结果

    witness 满足 witness·A_α·witnessᵀ = B_α (仅 EQUIVALENT 时给出)
    """
    verdict: Verdict
    witness: Optional[PrimeFieldMatrix] = None
    invariants: Dict = field(default_factory=dict)
    reason: str = ""
    budget: int = 0
    searched: int = 0
    solution_dimension: Optional[int] = None

    @property
    def equivalent(self) -> bool:
        return self.verdict == Verdict.EQUIVALENT

    def to_dict(self) -> dict:
        data = {
            "verdict": self.verdict.value,
            "invariants": self.invariants,
            "reason": self.reason,
            "budget": self.budget,
            "searched": self.searched,
        }
        if self.solution_dimension is not None:
            data["solution_dimension"] = self.solution_dimension
        if self.witness is not None:
            data["witness"] = self.witness.tolist()
        return data


@dataclass(frozen=True)
class EndomorphismBasis:
    """{E : C_α E = Eᵀ C_α, ∀α} 的一组基"""

    n: int
    d: int
    matrices: Tuple[PrimeFieldMatrix, ...]

    @property
    def dimension(self) -> int:
        return len(self.matrices)

    def stack(self) -> np.ndarray:
        """形状 (k, n, n) 的 int64 数组"""
        if not self.matrices:
            return np.zeros((0, self.n, self.n), dtype=np.int64)
        return np.stack([m.as_int() for m in self.matrices])

    def contains(self, m: PrimeFieldMatrix) -> bool:
        """m 是否在基张成的空间里"""
        if not self.matrices:
            return m.is_zero()
        flat = np.vstack([e.as_int().reshape(1, -1) for e in self.matrices])
        base = rank(PrimeFieldMatrix(flat, self.d))
        extended = rank(PrimeFieldMatrix(np.vstack([flat, m.as_int().reshape(1, -1)]), self.d))
        return base == extended


@dataclass
class FittingResult:
    status: FittingStatus
    witness: Optional[PrimeFieldMatrix] = None
    sizes: Optional[Tuple[int, int]] = None
    ring_dimension: Optional[int] = None
    examined: int = 0
    exhaustive: bool = False
    idempotent: Optional[PrimeFieldMatrix] = None
    reason: str = ""
    budget: int = 0

    @property
    def splits(self) -> bool:
        return self.status == FittingStatus.SPLIT

    def to_dict(self) -> dict:
        data = {
            "status": self.status.value,
            "ring_dimension": self.ring_dimension,
            "examined": self.examined,
            "exhaustive": self.exhaustive,
            "reason": self.reason,
            "budget": self.budget,
        }
        if self.sizes is not None:
            data["sizes"] = list(self.sizes)
        if self.witness is not None:
            data["witness"] = self.witness.tolist()
        return data


# ============================================
# 不变量
# ============================================

def _subset_masks(M: int) -> List[int]:
    if M <= FULL_SUBSET_LIMIT:
        return list(range(1, 1 << M))
    masks = [1 << a for a in range(M)]
    masks.extend((1 << a) | (1 << b) for a, b in combinations(range(M), 2))
    return masks


def subset_rank_profile(c: CommutationTuple) -> Dict[str, int]:
    """
    参与方子集 S 上 Σ_{α∈S} C_α 的秩

    键为 1 起始的参与方列表，如 "1,3"。合同变换下不变。
    """
    arrays = [m.as_int() for m in c.matrices]
    profile = {}
    for mask in _subset_masks(c.M):
        members = [a for a in range(c.M) if mask >> a & 1]
        total = sum(arrays[a] for a in members) % c.d
        profile[",".join(str(a + 1) for a in members)] = rank(PrimeFieldMatrix._wrap(total, c.order))
    return profile


def congruence_invariants(c: CommutationTuple) -> Dict:
    return {
        "n": c.n,
        "d": c.d,
        "parties": c.M,
        "concatenation_rank": rank(c.concatenation()),
        "subset_ranks": subset_rank_profile(c),
    }


def _check_comparable(a: CommutationTuple, b: CommutationTuple):
    if a.order != b.order:
        raise FieldMismatchError(f"域不一致: {a.order} vs {b.order}")
    if a.n != b.n:
        raise FieldMismatchError(f"生成元个数不一致: {a.n} vs {b.n}")
    if a.M != b.M:
        raise FieldMismatchError(f"参与方个数不一致: {a.M} vs {b.M}")
    for label, c in (("A", a), ("B", b)):
        bad = [str(i + 1) for i, m in enumerate(c.matrices) if not is_alternating(m)]
        if bad:
            raise InvalidTupleError(f"{label} 的第 {','.join(bad)} 个矩阵不是交错矩阵")


# ============================================
# 系数批次
# ============================================

def _coefficient_batches(k: int, d: int, count: int, exhaustive: bool,
                         rng: np.random.Generator, chunk: int = BATCH_SIZE) -> Iterator[np.ndarray]:
    """
    穷举时按计数顺序给出全部 d^k 个系数向量，否则给出 count 个随机向量
    """
    if exhaustive:
        powers = d ** np.arange(k, dtype=np.int64)
        for start in range(0, count, chunk):
            idx = np.arange(start, min(start + chunk, count), dtype=np.int64)
            yield (idx[:, None] // powers[None, :]) % d
        return
    remaining = count
    while remaining > 0:
        size = min(chunk, remaining)
        yield rng.integers(0, d, size=(size, k), dtype=np.int64)
        remaining -= size


# ============================================
# 合同判定
# ============================================

def _core(c: CommutationTuple, transform: PrimeFieldMatrix, r: int) -> List[PrimeFieldMatrix]:
    return [(transform @ m @ transform.T).submatrix(range(r), range(r)) for m in c.matrices]


def congruence_equivalent(a: CommutationTuple, b: CommutationTuple, budget: int = None,
                          samples: int = None, seed=None) -> CongruenceResult:
    """
    判定是否存在可逆 Q 使 Q·A_α·Qᵀ = B_α 对所有 α 成立

    Args:
        budget: 解空间 d^k 不超过此值时穷举 (默认 BUDGET['congruence_search'])
        samples: 超出预算时的随机采样数
        seed: 随机采样种子

    Returns:
        CongruenceResult；INEQUIVALENT 只在不变量不符或解空间穷尽时给出
    """
    budget = BUDGET['congruence_search'] if budget is None else budget
    samples = SEARCH['congruence_samples'] if samples is None else samples
    seed = SEARCH['seed'] if seed is None else seed
    _check_comparable(a, b)

    inv_a = congruence_invariants(a)
    inv_b = congruence_invariants(b)
    invariants = {"a": inv_a, "b": inv_b}
    if inv_a != inv_b:
        mismatched = sorted(k for k in inv_a if inv_a[k] != inv_b[k])
        return CongruenceResult(Verdict.INEQUIVALENT, invariants=invariants,
                                reason=f"invariant mismatch: {', '.join(mismatched)}", budget=budget)

    if a.matrices == b.matrices:
        return CongruenceResult(Verdict.EQUIVALENT, identity(a.n, a.order), invariants,
                                reason="identical tuples", budget=budget)

    d = a.d
    n = a.n
    ra, r = radical_split_transform(a)
    rb, _ = radical_split_transform(b)
    core_a = _core(a, ra, r)
    core_b = _core(b, rb, r)

    # X·A_α − B_α·Y = 0，vec(X·A) = (Aᵀ ⊗ I)·vec(X)，vec(B·Y) = (I ⊗ B)·vec(Y)
    eye = np.eye(r, dtype=np.int64)
    blocks = [
        np.hstack([np.kron(ca.as_int().T, eye), -np.kron(eye, cb.as_int())])
        for ca, cb in zip(core_a, core_b)
    ]
    system = PrimeFieldMatrix(np.vstack(blocks), a.order)
    solutions = kernel(system).as_int()
    k = solutions.shape[0]

    space = d ** k
    exhaustive = space <= budget
    count = space if exhaustive else samples
    rng = np.random.default_rng(seed)
    logger.debug(f"合同搜索: r={r}, 解空间维数 {k}, {'穷举' if exhaustive else '随机采样'} {count} 个点")

    found = None
    searched = 0
    for coeffs in _coefficient_batches(k, d, count, exhaustive, rng):
        points = coeffs @ solutions % d
        # 列优先: reshape 后再转置得到 X[i, j]
        x = points[:, :r * r].reshape(-1, r, r).transpose(0, 2, 1)
        y = points[:, r * r:].reshape(-1, r, r).transpose(0, 2, 1)
        product = batch_matmul(x, y.transpose(0, 2, 1), d)
        hits = np.nonzero((product == eye).all(axis=(1, 2)))[0]
        if hits.size:
            searched += int(hits[0]) + 1
            found = x[hits[0]]
            break
        searched += len(coeffs)

    if found is None:
        if exhaustive:
            return CongruenceResult(Verdict.INEQUIVALENT, invariants=invariants,
                                    reason="solution space exhausted", budget=budget,
                                    searched=searched, solution_dimension=k)
        logger.debug(f"合同搜索超出预算: {d}^{k} > {budget}")
        return CongruenceResult(Verdict.INCONCLUSIVE, invariants=invariants,
                                reason=f"solution space {d}^{k} exceeds budget, {searched} samples without witness",
                                budget=budget, searched=searched, solution_dimension=k)

    core_q = PrimeFieldMatrix(found, a.order)
    witness = invert(rb) @ block_diag(core_q, identity(n - r, a.order)) @ ra
    if change_basis(a, witness).matrices != b.matrices:
        raise InternalError("合同见证矩阵未通过复核")
    return CongruenceResult(Verdict.EQUIVALENT, witness, invariants, reason="witness found",
                            budget=budget, searched=searched, solution_dimension=k)


def plc_equivalent(state_a: StabilizerTableau, state_b: StabilizerTableau, partition: PartyPartition,
                   budget: int = None, samples: int = None, seed=None) -> CongruenceResult:
    """两个稳定子态在同一划分下是否 PLC 等价"""
    if state_a.order != state_b.order:
        raise FieldMismatchError(f"域不一致: {state_a.order} vs {state_b.order}")
    if state_a.n != state_b.n:
        raise FieldMismatchError(f"位点数不一致: {state_a.n} vs {state_b.n}")
    return congruence_equivalent(from_state(state_a, partition), from_state(state_b, partition),
                                 budget=budget, samples=samples, seed=seed)


# ============================================
# 自伴自同态
# ============================================

def endomorphism_basis(c: CommutationTuple) -> EndomorphismBasis:
    """
    C_α E − Eᵀ C_α = 0 的解空间

    左边对交错 C_α 是对称矩阵，只取 i <= j 的方程。
    E 按列优先展平: E[k, j] 对应下标 j·n + k。
    """
    n = c.n
    d = c.d
    equations = []
    for m in c.matrices:
        cm = m.as_int()
        for i in range(n):
            for j in range(i, n):
                row = np.zeros(n * n, dtype=np.int64)
                # (C E)[i, j] = Σ_k C[i, k]·E[k, j]
                row[j * n:(j + 1) * n] += cm[i, :]
                # (Eᵀ C)[i, j] = Σ_k E[k, i]·C[k, j]
                row[i * n:(i + 1) * n] -= cm[:, j]
                equations.append(row)
    if not equations:
        equations.append(np.zeros(n * n, dtype=np.int64))
    solutions = kernel(PrimeFieldMatrix(np.vstack(equations), c.order))
    mats = tuple(unvec(row, n, n, c.order) for row in solutions.as_int())
    return EndomorphismBasis(n, d, mats)


def is_self_adjoint(c: CommutationTuple, e: PrimeFieldMatrix) -> bool:
    return all(m @ e == e.T @ m for m in c.matrices)


# ============================================
# Fitting 分裂
# ============================================

def _proper_indices(batch: np.ndarray, n: int, d: int) -> np.ndarray:
    """E^n 既不为零也不满秩的元素下标"""
    if len(batch) == 0:
        return np.zeros(0, dtype=np.int64)
    powers = batch_power(batch, n, d)
    nonzero = powers.reshape(len(batch), -1).any(axis=1)
    ranks = batch_rank(powers, d)
    return np.nonzero(nonzero & (ranks < n))[0]


def _idempotent_power(e: np.ndarray, n: int, d: int) -> np.ndarray:
    """从 E^n 起逐次乘 E，直到 F·F = F"""
    f = batch_power(e[None], n, d)[0]
    limit = d ** n + n + 1
    for _ in range(limit):
        if np.array_equal(f @ f % d, f):
            return f
        f = f @ e % d
    raise InternalError("未找到幂等的幂次")


def _split_from_idempotent(c: CommutationTuple, f: np.ndarray) -> Tuple[PrimeFieldMatrix, Tuple[int, int]]:
    """Q 的前 rk(F) 行为 F 的列空间，其余为 F 的核"""
    idem = PrimeFieldMatrix(f, c.order)
    top = column_space(idem)
    bottom = kernel(idem)
    witness = vstack([top, bottom])
    sizes = (top.rows, bottom.rows)
    n1 = sizes[0]
    for m in change_basis(c, witness).matrices:
        if m.entries[:n1, n1:].any() or m.entries[n1:, :n1].any():
            raise InternalError("幂等元给出的变换未能分块对角化")
    return witness, sizes


def _symmetric_products(stack: np.ndarray, d: int) -> np.ndarray:
    """E_i E_j + E_j E_i (i < j)，仍为自伴自同态"""
    pairs = list(combinations(range(len(stack)), 2))
    if not pairs:
        return np.zeros((0,) + stack.shape[1:], dtype=np.int64)
    left = stack[[i for i, _ in pairs]]
    right = stack[[j for _, j in pairs]]
    return (batch_matmul(left, right, d) + batch_matmul(right, left, d)) % d


def fitting_split(c: CommutationTuple, budget: int = None, samples: int = None, seed=None) -> FittingResult:
    """
    寻找把 c 分成两块的合同变换

    探索顺序: 基元素、对称积、再对整个自同态空间穷举 (d^k <= budget) 或随机采样。
    没有真幂等元且已穷举时结论为 INDECOMPOSABLE。
    """
    budget = BUDGET['ring_enumeration'] if budget is None else budget
    samples = SEARCH['ring_samples'] if samples is None else samples
    seed = SEARCH['seed'] if seed is None else seed
    bad = [str(i + 1) for i, m in enumerate(c.matrices) if not is_alternating(m)]
    if bad:
        raise InvalidTupleError(f"第 {','.join(bad)} 个矩阵不是交错矩阵")

    n = c.n
    d = c.d
    if n <= 1:
        return FittingResult(FittingStatus.INDECOMPOSABLE, ring_dimension=n, exhaustive=True,
                             reason="single generator", budget=budget)

    # 公共根基直接分出
    transform, r = radical_split_transform(c)
    if r < n:
        if r == 0:
            return FittingResult(FittingStatus.SPLIT, identity(n, c.order), (1, n - 1),
                                 reason="zero tuple", budget=budget)
        return FittingResult(FittingStatus.SPLIT, transform, (r, n - r),
                             reason="common radical", budget=budget)

    basis = endomorphism_basis(c)
    k = basis.dimension
    if k <= 1:
        return FittingResult(FittingStatus.INDECOMPOSABLE, ring_dimension=k, exhaustive=True,
                             reason="scalar endomorphisms only", budget=budget)

    stack = basis.stack()
    space = d ** k
    exhaustive = space <= budget
    logger.debug(f"自同态空间维数 {k} (n={n}, d={d}), {'穷举' if exhaustive else '采样'}")

    def stages() -> Iterator[Tuple[str, np.ndarray]]:
        yield "basis element", stack
        yield "symmetric product", _symmetric_products(stack, d)
        rng = np.random.default_rng(seed)
        flat = stack.reshape(k, -1)
        count = space if exhaustive else samples
        for coeffs in _coefficient_batches(k, d, count, exhaustive, rng):
            yield "ring element", (coeffs @ flat % d).reshape(-1, n, n)

    examined = 0
    for label, batch in stages():
        hits = _proper_indices(batch, n, d)
        if hits.size:
            examined += int(hits[0]) + 1
            f = _idempotent_power(batch[hits[0]], n, d)
            witness, sizes = _split_from_idempotent(c, f)
            return FittingResult(FittingStatus.SPLIT, witness, sizes, k, examined, exhaustive,
                                 PrimeFieldMatrix(f, c.order), reason=f"proper idempotent from {label}",
                                 budget=budget)
        examined += len(batch)

    if exhaustive:
        return FittingResult(FittingStatus.INDECOMPOSABLE, ring_dimension=k, examined=examined,
                             exhaustive=True, reason="every endomorphism nilpotent or invertible",
                             budget=budget)
    logger.debug(f"自同态空间 {d}^{k} 超出预算 {budget}, 采样未找到真幂等元")
    return FittingResult(FittingStatus.INCONCLUSIVE, ring_dimension=k, examined=examined,
                         reason=f"ring {d}^{k} exceeds budget, no proper idempotent in {samples} samples",
                         budget=budget)


# ============================================
# 暴力枚举 (小规模对照)
# ============================================

def _conjugated_images(c: CommutationTuple, stack: np.ndarray) -> List[np.ndarray]:
    d = c.d
    qt = stack.transpose(0, 2, 1)
    return [batch_matmul(batch_matmul(stack, m.as_int(), d), qt, d) for m in c.matrices]


def brute_force_congruence(a: CommutationTuple, b: CommutationTuple,
                           budget: int = None) -> Optional[PrimeFieldMatrix]:
    """遍历 GL(n, d) 寻找合同见证，找不到返回 None"""
    _check_comparable(a, b)
    stack = invertible_stack(a.n, a.order, budget).astype(np.int64)
    ok = np.ones(len(stack), dtype=bool)
    for image, target in zip(_conjugated_images(a, stack), b.matrices):
        ok &= (image == target.as_int()).all(axis=(1, 2))
    idx = np.nonzero(ok)[0]
    if idx.size == 0:
        return None
    return PrimeFieldMatrix(stack[idx[0]], a.order)


def brute_force_block_diagonalizable(c: CommutationTuple,
                                     budget: int = None) -> Optional[Tuple[PrimeFieldMatrix, int]]:
    """
    遍历 GL(n, d) 寻找使所有 Q·C_α·Qᵀ 成为 n₁ + (n − n₁) 分块对角的 Q

    Returns:
        (Q, n₁)，不可分时 None
    """
    n = c.n
    if n <= 1:
        return None
    stack = invertible_stack(n, c.order, budget).astype(np.int64)
    images = _conjugated_images(c, stack)
    for n1 in range(1, n):
        ok = np.ones(len(stack), dtype=bool)
        for image in images:
            ok &= ~image[:, :n1, n1:].any(axis=(1, 2))
        idx = np.nonzero(ok)[0]
        if idx.size:
            return PrimeFieldMatrix(stack[idx[0]], c.order), n1
    return None


def canonical_tuple_key(c: CommutationTuple, budget: int = None) -> Tuple[int, ...]:
    """合同轨道上字典序最小的展平元组，两组对易矩阵合同当且仅当键相同"""
    stack = invertible_stack(c.n, c.order, budget).astype(np.int64)
    flat = np.concatenate([img.reshape(len(stack), -1) for img in _conjugated_images(c, stack)], axis=1)
    if flat.shape[1] == 0:
        return (c.d, c.n, c.M)
    best = np.lexsort(flat.T[::-1])[0]
    return (c.d, c.n, c.M) + tuple(int(v) for v in flat[best])
