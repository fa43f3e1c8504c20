#!/usr/bin/env python
"""
素数域 Z_d 上的精确线性代数

- d = 2 时行以 Python int 位压缩 (第 j 位 = 第 j 列)，消元为整行异或
- d >= 3 时每个元素占一个字节，运算时提升到 int64 再取模
- 矩阵未知量统一按列优先展平: X[i, j] 对应下标 j * rows + i (见 vec / unvec)
- 所有随机性都通过显式的 numpy Generator 传入
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from config.settings import BUDGET, FIELD
from src.errors import (
    BudgetExceededError,
    FieldMismatchError,
    InconsistentSystemError,
    SingularMatrixError,
)

# 字节存储的上限
MAX_FIELD_ORDER = FIELD['max_d']

# enumerate_invertible 的默认预算: d^(n^2) 不超过此值 (d=2 时 n<=4，d=3 时 n<=3)
DEFAULT_GROUP_BUDGET = BUDGET['group_enumeration']

SeedLike = Union[int, np.random.Generator, None]


def _is_prime(value: int) -> bool:
    if value < 2:
        return False
    k = 2
    while k * k <= value:
        if value % k == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class FieldOrder:
    """有限域 Z_d 的阶，构造时检查素性"""

    d: int

    def __post_init__(self):
        if isinstance(self.d, bool) or not isinstance(self.d, (int, np.integer)):
            raise FieldMismatchError(f"域阶必须是整数: {self.d!r}")
        value = int(self.d)
        if not _is_prime(value):
            raise FieldMismatchError(f"域阶必须是素数: {value}")
        if value > MAX_FIELD_ORDER:
            raise FieldMismatchError(f"域阶超出支持范围 (<= {MAX_FIELD_ORDER}): {value}")
        object.__setattr__(self, "d", value)

    @property
    def is_binary(self) -> bool:
        return self.d == 2

    def inv(self, x: int) -> int:
        x %= self.d
        if x == 0:
            raise SingularMatrixError("0 在域中不可逆")
        return pow(x, -1, self.d)

    def __int__(self) -> int:
        return self.d

    def __str__(self) -> str:
        return f"Z_{self.d}"


@lru_cache(maxsize=None)
def _cached_order(d: int) -> FieldOrder:
    return FieldOrder(d)


def as_order(d: Union[int, FieldOrder]) -> FieldOrder:
    if isinstance(d, FieldOrder):
        return d
    if isinstance(d, bool) or not isinstance(d, (int, np.integer)):
        raise FieldMismatchError(f"域阶必须是整数: {d!r}")
    return _cached_order(int(d))


class PrimeFieldMatrix:
    """
    Z_d 上的稠密矩阵 (不可变)

    entries 为只读 uint8 数组；d = 2 时按需缓存位压缩行。
    """

    __slots__ = ("_entries", "order", "_packed")

    def __init__(self, entries, d: Union[int, FieldOrder]):
        order = as_order(d)
        arr = np.array(entries, dtype=np.int64)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 0)
        if arr.ndim != 2:
            raise FieldMismatchError(f"矩阵必须是二维的, 实际维度 {arr.ndim}")
        arr = np.mod(arr, order.d).astype(np.uint8)
        arr.setflags(write=False)
        self._entries = arr
        self.order = order
        self._packed = None

    @classmethod
    def _wrap(cls, arr: np.ndarray, order: FieldOrder) -> "PrimeFieldMatrix":
        """内部快速构造: arr 已取模"""
        obj = cls.__new__(cls)
        data = np.ascontiguousarray(arr, dtype=np.uint8)
        data.setflags(write=False)
        obj._entries = data
        obj.order = order
        obj._packed = None
        return obj

    @classmethod
    def from_packed(cls, rows: Sequence[int], cols: int) -> "PrimeFieldMatrix":
        """由位压缩行构造 Z_2 矩阵"""
        arr = np.zeros((len(rows), cols), dtype=np.uint8)
        for i, row in enumerate(rows):
            if row:
                raw = np.frombuffer(int(row).to_bytes((cols + 7) // 8, "little"), dtype=np.uint8)
                arr[i] = np.unpackbits(raw, bitorder="little")[:cols]
        return cls._wrap(arr, as_order(2))

    # ---- 基本属性 ----
    @property
    def d(self) -> int:
        return self.order.d

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def shape(self) -> Tuple[int, int]:
        return self._entries.shape

    @property
    def rows(self) -> int:
        return self._entries.shape[0]

    @property
    def cols(self) -> int:
        return self._entries.shape[1]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def T(self) -> "PrimeFieldMatrix":
        return PrimeFieldMatrix._wrap(self._entries.T, self.order)

    def as_int(self) -> np.ndarray:
        return self._entries.astype(np.int64)

    def tolist(self) -> List[List[int]]:
        return self._entries.astype(int).tolist()

    def is_zero(self) -> bool:
        return not self._entries.any()

    def packed_rows(self) -> Tuple[int, ...]:
        """位压缩行 (仅 d = 2)"""
        if self.d != 2:
            raise FieldMismatchError("位压缩只用于 Z_2")
        if self._packed is None:
            if self.cols == 0:
                self._packed = tuple(0 for _ in range(self.rows))
            else:
                packed = np.packbits(self._entries, axis=1, bitorder="little")
                self._packed = tuple(int.from_bytes(row.tobytes(), "little") for row in packed)
        return self._packed

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "PrimeFieldMatrix":
        r = list(rows)
        c = list(cols)
        return PrimeFieldMatrix._wrap(self._entries[np.ix_(r, c)], self.order)

    def __getitem__(self, key):
        value = self._entries[key]
        if np.ndim(value) == 0:
            return int(value)
        if np.ndim(value) != 2:
            raise TypeError("请用二维切片或 submatrix 取子矩阵")
        return PrimeFieldMatrix._wrap(value, self.order)

    # ---- 运算 ----
    def _check(self, other: "PrimeFieldMatrix"):
        if not isinstance(other, PrimeFieldMatrix):
            raise TypeError(f"不支持的操作数类型: {type(other).__name__}")
        if other.order != self.order:
            raise FieldMismatchError(f"域不一致: {self.order} vs {other.order}")

    def __matmul__(self, other: "PrimeFieldMatrix") -> "PrimeFieldMatrix":
        self._check(other)
        if self.cols != other.rows:
            raise FieldMismatchError(f"矩阵乘法维度不匹配: {self.shape} @ {other.shape}")
        product = (self.as_int() @ other.as_int()) % self.d
        return PrimeFieldMatrix._wrap(product, self.order)

    def __add__(self, other: "PrimeFieldMatrix") -> "PrimeFieldMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise FieldMismatchError(f"矩阵加法维度不匹配: {self.shape} + {other.shape}")
        return PrimeFieldMatrix._wrap((self.as_int() + other.as_int()) % self.d, self.order)

    def __sub__(self, other: "PrimeFieldMatrix") -> "PrimeFieldMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise FieldMismatchError(f"矩阵减法维度不匹配: {self.shape} - {other.shape}")
        return PrimeFieldMatrix._wrap((self.as_int() - other.as_int()) % self.d, self.order)

    def __neg__(self) -> "PrimeFieldMatrix":
        return PrimeFieldMatrix._wrap((-self.as_int()) % self.d, self.order)

    def scale(self, k: int) -> "PrimeFieldMatrix":
        return PrimeFieldMatrix._wrap((self.as_int() * (int(k) % self.d)) % self.d, self.order)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PrimeFieldMatrix):
            return NotImplemented
        return (
            self.order == other.order
            and self.shape == other.shape
            and bool(np.array_equal(self._entries, other._entries))
        )

    def __hash__(self) -> int:
        return hash((self.d, self.shape, self._entries.tobytes()))

    def __repr__(self) -> str:
        return f"PrimeFieldMatrix(d={self.d}, {self.tolist()})"


# ============================================
# 构造工具
# ============================================

def identity(n: int, d: Union[int, FieldOrder]) -> PrimeFieldMatrix:
    return PrimeFieldMatrix._wrap(np.eye(n, dtype=np.uint8), as_order(d))


def zeros(rows: int, cols: int, d: Union[int, FieldOrder]) -> PrimeFieldMatrix:
    return PrimeFieldMatrix._wrap(np.zeros((rows, cols), dtype=np.uint8), as_order(d))


def _common_order(mats: Sequence[PrimeFieldMatrix]) -> FieldOrder:
    if not mats:
        raise FieldMismatchError("至少需要一个矩阵")
    order = mats[0].order
    for m in mats[1:]:
        if m.order != order:
            raise FieldMismatchError(f"域不一致: {order} vs {m.order}")
    return order


def hstack(mats: Sequence[PrimeFieldMatrix]) -> PrimeFieldMatrix:
    order = _common_order(mats)
    return PrimeFieldMatrix._wrap(np.hstack([m.entries for m in mats]), order)


def vstack(mats: Sequence[PrimeFieldMatrix]) -> PrimeFieldMatrix:
    order = _common_order(mats)
    return PrimeFieldMatrix._wrap(np.vstack([m.entries for m in mats]), order)


def block_diag(*mats: PrimeFieldMatrix) -> PrimeFieldMatrix:
    order = _common_order(mats)
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = np.zeros((rows, cols), dtype=np.uint8)
    r = c = 0
    for m in mats:
        out[r:r + m.rows, c:c + m.cols] = m.entries
        r += m.rows
        c += m.cols
    return PrimeFieldMatrix._wrap(out, order)


def vec(m: PrimeFieldMatrix) -> np.ndarray:
    """列优先展平"""
    return m.entries.reshape(-1, order="F").astype(np.int64)


def unvec(v, rows: int, cols: int, d: Union[int, FieldOrder]) -> PrimeFieldMatrix:
    """vec 的逆"""
    arr = np.reshape(np.asarray(v, dtype=np.int64), (rows, cols), order="F")
    return PrimeFieldMatrix(arr, d)


def matrix_power(m: PrimeFieldMatrix, k: int) -> PrimeFieldMatrix:
    if not m.is_square:
        raise FieldMismatchError("矩阵幂需要方阵")
    if k < 0:
        return matrix_power(invert(m), -k)
    result = identity(m.rows, m.order)
    base = m
    while k:
        if k & 1:
            result = result @ base
        base = base @ base
        k >>= 1
    return result


# ============================================
# 消元内核
# ============================================

def _gf2_rref(rows: List[int], ncols: int) -> Tuple[List[int], List[int]]:
    """
    Z_2 位压缩行的约化行阶梯形 (只在低 ncols 位上选主元)

    高位 (增广部分) 随整行异或一起变换。
    Returns:
        (变换后的行, 主元列列表)，前 rank 行为主元行
    """
    rows = list(rows)
    pivots: List[int] = []
    r = 0
    nrows = len(rows)
    for col in range(ncols):
        if r == nrows:
            break
        bit = 1 << col
        for i in range(r, nrows):
            if rows[i] & bit:
                break
        else:
            continue
        rows[r], rows[i] = rows[i], rows[r]
        pivot_row = rows[r]
        for i in range(nrows):
            if i != r and rows[i] & bit:
                rows[i] ^= pivot_row
        pivots.append(col)
        r += 1
    return rows, pivots


def _gf2_rank(rows: Iterable[int]) -> int:
    basis = {}
    for x in rows:
        while x:
            top = x.bit_length() - 1
            if top in basis:
                x ^= basis[top]
            else:
                basis[top] = x
                break
    return len(basis)


def _modp_rref(arr: np.ndarray, d: int, ncols: int) -> Tuple[np.ndarray, List[int]]:
    """Z_d 上的约化行阶梯形 (int64 数组，只在前 ncols 列上选主元)"""
    a = np.array(arr, dtype=np.int64) % d
    nrows = a.shape[0]
    pivots: List[int] = []
    r = 0
    for col in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, col])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = (a[r] * pow(int(a[r, col]), -1, d)) % d
        factors = a[:, col].copy()
        factors[r] = 0
        if factors.any():
            a = (a - np.outer(factors, a[r])) % d
        pivots.append(col)
        r += 1
    return a, pivots


# ============================================
# 公开操作
# ============================================

class RowEchelon(NamedTuple):
    reduced: PrimeFieldMatrix
    rank: int
    row_transform: PrimeFieldMatrix
    pivots: Tuple[int, ...]


class LinearSolution(NamedTuple):
    """
    a·x = b 的全部解: particular + span(kernel)

    kernel 的每一行是一个齐次解 (a 的列数维)。
    """
    particular: PrimeFieldMatrix
    kernel: PrimeFieldMatrix

    @property
    def dimension(self) -> int:
        return self.kernel.rows


def rref(m: PrimeFieldMatrix) -> RowEchelon:
    """
    约化行阶梯形

    Returns:
        RowEchelon(reduced, rank, row_transform, pivots)，满足 row_transform · m = reduced
    """
    rows, cols = m.shape
    if m.d == 2:
        packed = [row | (1 << (cols + i)) for i, row in enumerate(m.packed_rows())]
        reduced_rows, pivots = _gf2_rref(packed, cols)
        low = (1 << cols) - 1
        reduced = PrimeFieldMatrix.from_packed([x & low for x in reduced_rows], cols)
        transform = PrimeFieldMatrix.from_packed([x >> cols for x in reduced_rows], rows)
        return RowEchelon(reduced, len(pivots), transform, tuple(pivots))

    aug = np.hstack([m.as_int(), np.eye(rows, dtype=np.int64)])
    reduced_aug, pivots = _modp_rref(aug, m.d, cols)
    reduced = PrimeFieldMatrix._wrap(reduced_aug[:, :cols], m.order)
    transform = PrimeFieldMatrix._wrap(reduced_aug[:, cols:], m.order)
    return RowEchelon(reduced, len(pivots), transform, tuple(pivots))


def rank(m: PrimeFieldMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    if m.d == 2:
        return _gf2_rank(m.packed_rows())
    return len(_modp_rref(m.as_int(), m.d, m.cols)[1])


def solve_linear(a: PrimeFieldMatrix, b: PrimeFieldMatrix, strict: bool = False) -> Optional[LinearSolution]:
    """
    求解 a·x = b

    Args:
        a: r×c 系数矩阵
        b: r×k 右端
        strict: 为 True 时无解抛 InconsistentSystemError，否则返回 None

    Returns:
        LinearSolution(particular: c×k, kernel: dim×c)，无解时为 None
    """
    if a.order != b.order:
        raise FieldMismatchError(f"域不一致: {a.order} vs {b.order}")
    if a.rows != b.rows:
        raise FieldMismatchError(f"行数不一致: {a.rows} vs {b.rows}")
    c = a.cols
    k = b.cols
    d = a.d

    if d == 2:
        rows = [pa | (pb << c) for pa, pb in zip(a.packed_rows(), b.packed_rows())]
        reduced, pivots = _gf2_rref(rows, c)
        r = len(pivots)
        if any(reduced[i] for i in range(r, len(reduced))):
            if strict:
                raise InconsistentSystemError("线性方程组无解")
            return None
        particular_rows = [0] * c
        for i, p in enumerate(pivots):
            particular_rows[p] = reduced[i] >> c
        pivot_set = set(pivots)
        kernel_rows = []
        for f in range(c):
            if f in pivot_set:
                continue
            v = 1 << f
            fbit = 1 << f
            for i, p in enumerate(pivots):
                if reduced[i] & fbit:
                    v |= 1 << p
            kernel_rows.append(v)
        particular = PrimeFieldMatrix.from_packed(particular_rows, k)
        kernel = PrimeFieldMatrix.from_packed(kernel_rows, c)
        return LinearSolution(particular, kernel)

    aug = np.hstack([a.as_int(), b.as_int()])
    reduced, pivots = _modp_rref(aug, d, c)
    r = len(pivots)
    if reduced[r:, c:].any():
        if strict:
            raise InconsistentSystemError("线性方程组无解")
        return None
    particular = np.zeros((c, k), dtype=np.int64)
    for i, p in enumerate(pivots):
        particular[p] = reduced[i, c:]
    free = [f for f in range(c) if f not in set(pivots)]
    kernel = np.zeros((len(free), c), dtype=np.int64)
    for j, f in enumerate(free):
        kernel[j, f] = 1
        for i, p in enumerate(pivots):
            kernel[j, p] = (-reduced[i, f]) % d
    return LinearSolution(PrimeFieldMatrix._wrap(particular, a.order), PrimeFieldMatrix._wrap(kernel, a.order))


def kernel(a: PrimeFieldMatrix) -> PrimeFieldMatrix:
    """右零空间 {x : a·x = 0}，行为基向量"""
    return solve_linear(a, zeros(a.rows, 1, a.order)).kernel


def left_kernel(a: PrimeFieldMatrix) -> PrimeFieldMatrix:
    """左零空间 {x : x·a = 0}，行为基向量"""
    return kernel(a.T)


def row_space(a: PrimeFieldMatrix) -> PrimeFieldMatrix:
    """行空间的一组基 (rref 的非零行)"""
    echelon = rref(a)
    return echelon.reduced.submatrix(range(echelon.rank), range(a.cols))


def column_space(a: PrimeFieldMatrix) -> PrimeFieldMatrix:
    """列空间的一组基，行为基向量"""
    return row_space(a.T)


def invert(m: PrimeFieldMatrix) -> PrimeFieldMatrix:
    if not m.is_square:
        raise FieldMismatchError(f"只能对方阵求逆: {m.shape}")
    echelon = rref(m)
    if echelon.rank < m.rows:
        raise SingularMatrixError(f"矩阵奇异 (rank {echelon.rank} < {m.rows})")
    return echelon.row_transform


def is_invertible(m: PrimeFieldMatrix) -> bool:
    return m.is_square and rank(m) == m.rows


def group_order(n: int, d: Union[int, FieldOrder]) -> int:
    """|GL(n, d)| = Π_{k<n} (d^n - d^k)"""
    q = as_order(d).d
    result = 1
    for k in range(n):
        result *= q ** n - q ** k
    return result


def invertible_stack(n: int, d: Union[int, FieldOrder], budget: Optional[int] = None) -> np.ndarray:
    """
    GL(n, d) 的全部元素，形状 (|GL|, n, n) 的 uint8 数组

    逐行选取不在已有行张成空间中的向量，顺序确定 (字典序)。
    """
    order = as_order(d)
    q = order.d
    limit = DEFAULT_GROUP_BUDGET if budget is None else budget
    required = q ** (n * n)
    if required > limit:
        raise BudgetExceededError(f"GL({n},{q}) 枚举超出预算: {q}^{n * n} > {limit}", required, limit)
    if n == 0:
        return np.zeros((1, 0, 0), dtype=np.uint8)

    vectors = np.array(list(itertools.product(range(q), repeat=n)), dtype=np.int64)
    powers = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    size = len(vectors)
    found: List[List[int]] = []

    def extend(prefix: List[int], span: np.ndarray):
        if len(prefix) == n:
            found.append(prefix)
            return
        span_vectors = vectors[span]
        for v in range(size):
            if span[v]:
                continue
            new_span = span.copy()
            for c in range(1, q):
                combos = (span_vectors + c * vectors[v]) % q
                new_span[combos @ powers] = True
            extend(prefix + [v], new_span)

    start = np.zeros(size, dtype=bool)
    start[0] = True
    extend([], start)
    return vectors[np.array(found)].astype(np.uint8)


def enumerate_invertible(n: int, d: Union[int, FieldOrder], budget: Optional[int] = None) -> Iterator[PrimeFieldMatrix]:
    """遍历 GL(n, d) 的所有元素"""
    order = as_order(d)
    for arr in invertible_stack(n, order, budget):
        yield PrimeFieldMatrix._wrap(arr, order)


def random_matrix(rows: int, cols: int, d: Union[int, FieldOrder], seed: SeedLike = 0) -> PrimeFieldMatrix:
    order = as_order(d)
    rng = np.random.default_rng(seed)
    return PrimeFieldMatrix._wrap(rng.integers(0, order.d, size=(rows, cols)), order)


def random_invertible(n: int, d: Union[int, FieldOrder], seed: SeedLike = 0) -> PrimeFieldMatrix:
    """
    随机可逆矩阵 (拒绝采样)

    seed 可以是整数或已有的 numpy Generator；同一整数种子结果相同。
    """
    order = as_order(d)
    rng = np.random.default_rng(seed)
    while True:
        candidate = PrimeFieldMatrix._wrap(rng.integers(0, order.d, size=(n, n)), order)
        if rank(candidate) == n:
            return candidate


# ============================================
# 批量内核 (形状 (B, n, n) 的 int64 数组)
# ============================================

def batch_matmul(a: np.ndarray, b: np.ndarray, d: int) -> np.ndarray:
    return np.matmul(a, b) % d


def batch_power(stack: np.ndarray, k: int, d: int) -> np.ndarray:
    n = stack.shape[-1]
    result = np.broadcast_to(np.eye(n, dtype=np.int64), stack.shape).copy()
    base = stack % d
    while k:
        if k & 1:
            result = batch_matmul(result, base, d)
        base = batch_matmul(base, base, d)
        k >>= 1
    return result


def batch_rank(stack: np.ndarray, d: int) -> np.ndarray:
    """逐个矩阵的秩，所有矩阵同时消元"""
    a = np.array(stack, dtype=np.int64) % d
    count, n_rows, n_cols = a.shape
    inverses = np.zeros(d, dtype=np.int64)
    for x in range(1, d):
        inverses[x] = pow(x, -1, d)
    used = np.zeros((count, n_rows), dtype=bool)
    ranks = np.zeros(count, dtype=np.int64)
    batch = np.arange(count)
    for col in range(n_cols):
        candidates = (a[:, :, col] != 0) & ~used
        has = candidates.any(axis=1)
        if not has.any():
            continue
        idx = batch[has]
        piv = np.argmax(candidates[has], axis=1)
        pivot_rows = a[idx, piv] * inverses[a[idx, piv, col]][:, None] % d
        factors = a[idx, :, col].copy()
        factors[np.arange(len(idx)), piv] = 0
        a[idx] = (a[idx] - factors[:, :, None] * pivot_rows[:, None, :]) % d
        a[idx, piv] = pivot_rows
        used[idx, piv] = True
        ranks[idx] += 1
    return ranks
