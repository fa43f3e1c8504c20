#!/usr/bin/env python
"""
对易矩阵形式

对生成元 g_1..g_n 和参与方 α: (C_α)_ij = ω(g_i|α, g_j|α)。
合同变换方向统一为 C ↦ Q·C·Qᵀ (Q 的行是新的生成元)。
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.errors import (
    FieldMismatchError,
    InternalError,
    InvalidStateError,
    InvalidTupleError,
    SingularMatrixError,
    StabilizerCodeTupleError,
)
from src.field_linalg import (
    FieldOrder,
    PrimeFieldMatrix,
    as_order,
    block_diag,
    hstack,
    identity,
    invert,
    left_kernel,
    random_invertible,
    rank,
    rref,
    vstack,
)
from src.stabilizer_states import (
    GraphAdjacency,
    StabilizerTableau,
    random_graph,
    random_partition,
)
from src.symplectic_pauli import PartyPartition, symplectic_gram


@dataclass(frozen=True)
class CommutationTuple:
    """M 个 n×n 交错矩阵，每个参与方一个"""

    matrices: Tuple[PrimeFieldMatrix, ...]
    partition: Optional[PartyPartition] = None

    def __post_init__(self):
        mats = tuple(self.matrices)
        if not mats:
            raise InvalidTupleError("对易矩阵组不能为空")
        n = mats[0].rows
        for m in mats:
            if m.shape != (n, n):
                raise InvalidTupleError(f"对易矩阵必须都是 {n}×{n}: 得到 {m.shape}")
            if m.order != mats[0].order:
                raise FieldMismatchError(f"域不一致: {mats[0].order} vs {m.order}")
        if self.partition is not None and self.partition.M != len(mats):
            raise InvalidTupleError(f"划分有 {self.partition.M} 个参与方, 矩阵有 {len(mats)} 个")
        object.__setattr__(self, "matrices", mats)

    @property
    def n(self) -> int:
        return self.matrices[0].rows

    @property
    def M(self) -> int:
        return len(self.matrices)

    @property
    def d(self) -> int:
        return self.matrices[0].d

    @property
    def order(self) -> FieldOrder:
        return self.matrices[0].order

    def __getitem__(self, alpha: int) -> PrimeFieldMatrix:
        return self.matrices[alpha]

    def concatenation(self) -> PrimeFieldMatrix:
        """n × nM 的拼接矩阵 [C_1 | ... | C_M]"""
        return hstack(self.matrices)

    def ranks(self) -> Tuple[int, ...]:
        return tuple(rank(m) for m in self.matrices)

    def block(self, indices: Sequence[int]) -> "CommutationTuple":
        """限制到一组生成元下标上的子矩阵组"""
        idx = list(indices)
        return CommutationTuple(tuple(m.submatrix(idx, idx) for m in self.matrices))

    def support_parties(self) -> Tuple[int, ...]:
        return tuple(a for a, m in enumerate(self.matrices) if not m.is_zero())

    def to_dict(self) -> dict:
        data = {
            "n": self.n,
            "d": self.d,
            "parties": self.M,
            "matrices": [m.tolist() for m in self.matrices],
        }
        if self.partition is not None:
            data["partition"] = self.partition.to_list()
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "CommutationTuple":
        try:
            d = int(data.get("d", 2))
            n = int(data["n"])
            mats = tuple(
                PrimeFieldMatrix(m if n else np.zeros((0, 0)), d) for m in data["matrices"]
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidTupleError(f"对易矩阵 JSON 缺少字段或格式错误: {exc}") from exc
        if "parties" in data and int(data["parties"]) != len(mats):
            raise InvalidTupleError(f"parties={data['parties']} 与矩阵个数 {len(mats)} 不一致")
        if any(m.shape != (n, n) for m in mats):
            raise InvalidTupleError(f"矩阵尺寸与 n={n} 不一致")
        partition = None
        if data.get("partition"):
            parts = tuple(tuple(s - 1 for s in p) for p in data["partition"])
            partition = PartyPartition(sum(len(p) for p in parts), parts)
        return cls(mats, partition)


@dataclass
class TupleValidation:
    valid: bool
    violations: List[str] = field(default_factory=list)
    rank_condition: Optional[bool] = None

    def __bool__(self) -> bool:
        return self.valid


@dataclass(frozen=True)
class DicksonForm:
    """P·C·Pᵀ = ⊕ [[0,1],[-1,0]] ⊕ 0"""

    transform: PrimeFieldMatrix
    pairs: Tuple[Tuple[int, int], ...]
    zero_indices: Tuple[int, ...]

    @property
    def rank(self) -> int:
        return 2 * len(self.pairs)


@dataclass(frozen=True)
class SynthesisResult:
    tableau: StabilizerTableau
    partition: PartyPartition


# ============================================
# 基本判定
# ============================================

def is_alternating(m: PrimeFieldMatrix) -> bool:
    arr = m.as_int()
    return m.is_square and not np.diag(arr).any() and not ((arr + arr.T) % m.d).any()


def _alternating_violations(mats: Sequence[PrimeFieldMatrix]) -> List[str]:
    return [f"alternating: 第 {a + 1} 个矩阵不是交错矩阵" for a, m in enumerate(mats) if not is_alternating(m)]


def _sum_is_zero(mats: Sequence[PrimeFieldMatrix]) -> bool:
    total = np.zeros(mats[0].shape, dtype=np.int64)
    for m in mats:
        total += m.as_int()
    return not (total % mats[0].d).any()


def validate(c: CommutationTuple, check_rank: bool = False) -> TupleValidation:
    """检查交错性、零和，可选秩条件，列出所有违例"""
    violations = _alternating_violations(c.matrices)
    if not _sum_is_zero(c.matrices):
        violations.append("zero-sum: 矩阵之和不为 0")
    report = TupleValidation(not violations, violations)
    if check_rank and not violations:
        report.rank_condition = _rank_equality(c.matrices)
        if not report.rank_condition:
            report.valid = False
            report.violations.append("rank: 2·rk([C_α]) != Σ rk(C_α)")
    return report


def _ensure_valid(c: CommutationTuple):
    report = validate(c)
    if not report.valid:
        raise InvalidTupleError("; ".join(report.violations))


def _rank_sides(mats: Sequence[PrimeFieldMatrix]) -> Tuple[int, int]:
    return 2 * rank(hstack(mats)), sum(rank(m) for m in mats)


def _rank_equality(mats: Sequence[PrimeFieldMatrix]) -> bool:
    lhs, rhs = _rank_sides(mats)
    return lhs == rhs


def rank_condition(c: CommutationTuple) -> bool:
    """2·rk([C_α]_α) == Σ_α rk(C_α)"""
    _ensure_valid(c)
    return _rank_equality(c.matrices)


def rank_inequality_check(matrices: Sequence[PrimeFieldMatrix]) -> bool:
    """交错零和矩阵族满足 2·rk([A_α]) <= Σ rk(A_α)"""
    mats = list(matrices)
    if not mats:
        raise InvalidTupleError("矩阵族不能为空")
    violations = _alternating_violations(mats)
    if not _sum_is_zero(mats):
        violations.append("zero-sum: 矩阵之和不为 0")
    if violations:
        raise InvalidTupleError("; ".join(violations))
    lhs, rhs = _rank_sides(mats)
    return lhs <= rhs


def complete_to_zero_sum(matrices: Sequence[PrimeFieldMatrix]) -> Tuple[PrimeFieldMatrix, ...]:
    """追加 −Σ A_α 使矩阵族零和"""
    mats = tuple(matrices)
    total = mats[0]
    for m in mats[1:]:
        total = total + m
    return mats + (-total,)


def extractable_zero_count(c: CommutationTuple) -> int:
    """可通过 PLC 分离出的 |0> 个数: n − rk([C_α])"""
    return c.n - rank(c.concatenation())


# ============================================
# 从态 / 图计算
# ============================================

def from_state(t: StabilizerTableau, p: PartyPartition) -> CommutationTuple:
    if p.n != t.n:
        raise FieldMismatchError(f"划分位点数 {p.n} 与态 {t.n} 不一致")
    rows = range(t.generators.rows)
    mats = tuple(symplectic_gram(t.generators.submatrix(rows, p.site_columns(a))) for a in range(p.M))
    return CommutationTuple(mats, p)


def from_graph(g: GraphAdjacency, p: PartyPartition) -> CommutationTuple:
    """C_α = Σ_{i∈α} Γ(i)，Γ(i) 保留 Γ 的第 i 列和 −1 倍的第 i 行"""
    if p.n != g.n:
        raise FieldMismatchError(f"划分位点数 {p.n} 与图 {g.n} 不一致")
    gamma = g.matrix.as_int()
    mats = []
    for party in p.parties:
        arr = np.zeros_like(gamma)
        for i in party:
            arr[:, i] += gamma[:, i]
            arr[i, :] -= gamma[i, :]
        mats.append(PrimeFieldMatrix(arr, g.matrix.order))
    return CommutationTuple(tuple(mats), p)


# ============================================
# 变换
# ============================================

def change_basis(c: CommutationTuple, q: PrimeFieldMatrix) -> CommutationTuple:
    """C_α ↦ Q·C_α·Qᵀ"""
    if q.shape != (c.n, c.n):
        raise FieldMismatchError(f"基变换矩阵尺寸 {q.shape} 与 n={c.n} 不一致")
    if rank(q) != c.n:
        raise SingularMatrixError("基变换矩阵奇异")
    qt = q.T
    return CommutationTuple(tuple(q @ m @ qt for m in c.matrices), c.partition)


def merge_parties(c: CommutationTuple, i: int, j: int) -> CommutationTuple:
    """C_i + C_j 放在 min(i, j) 处，M 减一"""
    if i == j:
        raise InvalidTupleError("合并需要两个不同的参与方")
    for k in (i, j):
        if not 0 <= k < c.M:
            raise InvalidTupleError(f"参与方下标越界: {k + 1} (M={c.M})")
    lo, hi = sorted((i, j))
    mats = list(c.matrices)
    mats[lo] = mats[lo] + mats[hi]
    del mats[hi]
    partition = c.partition.merged(lo, hi) if c.partition is not None else None
    return CommutationTuple(tuple(mats), partition)


def permute_parties(c: CommutationTuple, perm: Sequence[int]) -> CommutationTuple:
    """新的第 k 个矩阵为原来的第 perm[k] 个"""
    if sorted(perm) != list(range(c.M)):
        raise InvalidTupleError(f"非法的参与方置换: {tuple(perm)}")
    partition = c.partition.permuted(perm) if c.partition is not None else None
    return CommutationTuple(tuple(c.matrices[p] for p in perm), partition)


def direct_sum(c1: CommutationTuple, c2: CommutationTuple) -> CommutationTuple:
    if c1.M != c2.M:
        raise FieldMismatchError(f"参与方个数不一致: {c1.M} vs {c2.M}")
    if c1.order != c2.order:
        raise FieldMismatchError(f"域不一致: {c1.order} vs {c2.order}")
    return CommutationTuple(tuple(block_diag(a, b) for a, b in zip(c1.matrices, c2.matrices)))


def zero_tuple(n: int, M: int, d=2) -> CommutationTuple:
    order = as_order(d)
    z = PrimeFieldMatrix(np.zeros((n, n), dtype=np.int64), order)
    return CommutationTuple(tuple(z for _ in range(M)))


# ============================================
# Dickson 标准形与态综合
# ============================================

def dickson_normal_form(c: PrimeFieldMatrix) -> DicksonForm:
    """
    辛 Gram-Schmidt: 依次取第一个与其余向量有非零配对的向量配成双曲对

    Returns:
        DicksonForm，transform 的前 2m 行是双曲对 (u_k, v_k)，之后为根基
    """
    if not is_alternating(c):
        raise InvalidTupleError("Dickson 标准形需要交错矩阵")
    d = c.d
    a = c.as_int()
    remaining = [row for row in np.eye(c.rows, dtype=np.int64)]
    chosen: List[np.ndarray] = []
    while True:
        found = None
        for x in range(len(remaining)):
            ua = remaining[x] @ a % d
            for y in range(x + 1, len(remaining)):
                value = int(ua @ remaining[y] % d)
                if value:
                    found = (x, y, value)
                    break
            if found:
                break
        if found is None:
            break
        x, y, value = found
        u = remaining[x]
        v = remaining[y] * pow(value, -1, d) % d
        rest = []
        for k, w in enumerate(remaining):
            if k in (x, y):
                continue
            wa = w @ a % d
            rest.append((w - int(wa @ v % d) * u + int(wa @ u % d) * v) % d)
        chosen.extend([u, v])
        remaining = rest
    transform = PrimeFieldMatrix(np.array(chosen + remaining).reshape(c.rows, c.rows), c.order)
    m = len(chosen) // 2
    pairs = tuple((2 * k, 2 * k + 1) for k in range(m))
    return DicksonForm(transform, pairs, tuple(range(2 * m, c.rows)))


def radical_split_transform(c: CommutationTuple) -> Tuple[PrimeFieldMatrix, int]:
    """
    R 使 R·C_α·Rᵀ 的后 w 行/列全为 0 (w = 公共根基维数)

    Returns:
        (R, r)，r = n − w 为核心维数
    """
    radical = left_kernel(c.concatenation())
    w = radical.rows
    if w == 0:
        return identity(c.n, c.order), c.n
    pivots = set(rref(radical).pivots)
    complement = [j for j in range(c.n) if j not in pivots]
    unit = identity(c.n, c.order)
    top = unit.submatrix(complement, range(c.n))
    return vstack([top, radical]), c.n - w


def synthesize_state(c: CommutationTuple) -> SynthesisResult:
    """
    由满足秩条件的对易矩阵组构造稳定子态

    参与方 α 得到 rk(C_α)/2 个纠缠位点；n − rk([C_α]) 个 |0> 位点全部分给第一个参与方。
    位点编号: 参与方依次排列，纠缠位点在前，自由位点最后。
    """
    if not rank_condition(c):
        raise StabilizerCodeTupleError()
    d = c.d
    order = c.order
    n = c.n
    transform, r = radical_split_transform(c)
    core = [transform @ m @ transform.T for m in c.matrices]
    core = [m.submatrix(range(r), range(r)) for m in core]

    party_blocks = []
    site_counts = []
    for m in core:
        if r == 0:
            site_counts.append(0)
            continue
        form = dickson_normal_form(m)
        k = len(form.pairs)
        site_counts.append(k)
        if k == 0:
            continue
        tilde = np.zeros((r, 2 * k), dtype=np.int64)
        for s in range(k):
            tilde[2 * s, 2 * s] = 1
            tilde[2 * s + 1, 2 * s + 1] = d - 1
        party_blocks.append(invert(form.transform) @ PrimeFieldMatrix(tilde, order))

    entangled = sum(site_counts)
    if entangled != r:
        raise InternalError(f"纠缠位点数 {entangled} 与核心维数 {r} 不一致")

    full = np.zeros((n, 2 * n), dtype=np.int64)
    if party_blocks:
        full[:r, :2 * r] = hstack(party_blocks).as_int()
    for t in range(n - r):
        full[r + t, 2 * (r + t) + 1] = 1
    generators = invert(transform) @ PrimeFieldMatrix(full, order)

    phases = ()
    if d == 2:
        arr = generators.as_int()
        phases = tuple(int(y) % 4 for y in (arr[:, 0::2] * arr[:, 1::2]).sum(axis=1))

    parties = []
    start = 0
    for alpha, k in enumerate(site_counts):
        sites = list(range(start, start + k))
        start += k
        if alpha == 0:
            sites.extend(range(r, n))
        parties.append(tuple(sites))
    partition = PartyPartition(n, tuple(parties), allow_empty=True)
    tableau = StabilizerTableau(generators, phases)

    if from_state(tableau, partition).matrices != c.matrices:
        raise InternalError("综合得到的态的对易矩阵与输入不一致")
    return SynthesisResult(tableau, partition)


# ============================================
# 随机生成 (性质测试)
# ============================================

def random_commutation_tuple(n: int, M: int, d=2, seed=0, conjugate: bool = True) -> CommutationTuple:
    """随机图态在随机划分下的对易矩阵组，可选随机合同变换"""
    rng = np.random.default_rng(seed)
    g = random_graph(n, d, rng)
    p = random_partition(n, M, rng)
    c = from_graph(g, p)
    if conjugate:
        c = change_basis(c, random_invertible(n, d, rng))
    return c


def random_alternating(n: int, d=2, seed=0) -> PrimeFieldMatrix:
    order = as_order(d)
    rng = np.random.default_rng(seed)
    upper = np.triu(rng.integers(0, order.d, size=(n, n)), 1)
    return PrimeFieldMatrix(upper - upper.T, order)


def random_alternating_family(n: int, M: int, d=2, seed=0) -> Tuple[PrimeFieldMatrix, ...]:
    """M−1 个随机交错矩阵加上使其零和的最后一个"""
    if M < 2:
        raise InvalidStateError("矩阵族至少需要 2 个矩阵")
    rng = np.random.default_rng(seed)
    return complete_to_zero_sum([random_alternating(n, d, rng) for _ in range(M - 1)])
