#!/usr/bin/env python
"""
稳定子态、图态与 LCE 操作 (量子比特与素数维 qudit)

生成元矩阵为 n×2n，行是交错布局的辛向量。
相位约定:
- d = 2: 生成元为 i^e · ⊗ X^a Z^b，e 取 0..3；平方为 +1 当且仅当 e + Σ a·b 为偶数
- d >= 3: 所有相位固定为 0
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from src.errors import FieldMismatchError, InvalidStateError
from src.field_linalg import (
    FieldOrder,
    PrimeFieldMatrix,
    as_order,
    block_diag,
    left_kernel,
    rank,
)
from src.symplectic_pauli import PartyPartition, SymplecticVector, symplectic_gram


@dataclass(frozen=True)
class StabilizerTableau:
    """n 个生成元 (n×2n 矩阵) 加每个生成元的相位指数"""

    generators: PrimeFieldMatrix
    phases: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.generators.cols % 2:
            raise InvalidStateError(f"生成元矩阵列数必须为偶数: {self.generators.cols}")
        modulus = 4 if self.generators.d == 2 else self.generators.d
        phases = tuple(int(p) % modulus for p in self.phases) if self.phases else (0,) * self.generators.rows
        if len(phases) != self.generators.rows:
            raise InvalidStateError(f"相位个数 {len(phases)} 与生成元个数 {self.generators.rows} 不一致")
        object.__setattr__(self, "phases", phases)

    @property
    def n(self) -> int:
        return self.generators.cols // 2

    @property
    def d(self) -> int:
        return self.generators.d

    @property
    def order(self) -> FieldOrder:
        return self.generators.order

    def generator(self, i: int) -> SymplecticVector:
        return SymplecticVector(self.generators.entries[i], self.order)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "generators": self.generators.tolist(),
            "phases": list(self.phases),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "StabilizerTableau":
        try:
            d = int(data.get("d", 2))
            gens = data["generators"]
            n = int(data.get("n", len(gens[0]) // 2 if gens else 0))
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise InvalidStateError(f"稳定子表 JSON 缺少字段或格式错误: {exc}") from exc
        matrix = PrimeFieldMatrix(gens if gens else np.zeros((0, 2 * n)), d)
        if matrix.cols != 2 * n:
            raise InvalidStateError(f"生成元长度 {matrix.cols} 与 n={n} 不一致")
        return cls(matrix, tuple(data.get("phases") or ()))

    @classmethod
    def from_pauli_strings(cls, strings: Sequence[str], phases: Sequence[int] = ()) -> "StabilizerTableau":
        """量子比特快捷构造: ["XX", "ZZ"]"""
        rows = [SymplecticVector.from_pauli_string(s).entries for s in strings]
        return cls(PrimeFieldMatrix(rows, 2), tuple(phases))


@dataclass(frozen=True)
class GraphAdjacency:
    """(多重) 图的邻接矩阵，d >= 3 时元素为边的重数"""

    matrix: PrimeFieldMatrix

    def __post_init__(self):
        m = self.matrix
        if not m.is_square:
            raise InvalidStateError(f"邻接矩阵必须是方阵: {m.shape}")
        if np.any(np.diag(m.entries)):
            raise InvalidStateError("邻接矩阵对角线必须为 0")
        if not np.array_equal(m.entries, m.entries.T):
            raise InvalidStateError("邻接矩阵必须对称")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], d: Union[int, FieldOrder] = 2) -> "GraphAdjacency":
        """由 0 起始的边表 (i, j) 或 (i, j, m) 构造"""
        order = as_order(d)
        arr = np.zeros((n, n), dtype=np.int64)
        for edge in edges:
            i, j = int(edge[0]), int(edge[1])
            m = int(edge[2]) if len(edge) > 2 else 1
            if i == j:
                raise InvalidStateError(f"不允许自环: {i + 1}")
            if not (0 <= i < n and 0 <= j < n):
                raise InvalidStateError(f"边 ({i + 1}, {j + 1}) 越界 (n={n})")
            arr[i, j] = arr[j, i] = m % order.d
        return cls(PrimeFieldMatrix(arr, order))

    @classmethod
    def from_networkx(cls, graph: nx.Graph, d: Union[int, FieldOrder] = 2, weight: str = "weight") -> "GraphAdjacency":
        nodes = sorted(graph.nodes())
        index = {v: k for k, v in enumerate(nodes)}
        edges = [(index[u], index[v], int(data.get(weight, 1))) for u, v, data in graph.edges(data=True)]
        return cls.from_edges(len(nodes), edges, d)

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        for i, j, m in self.edges():
            graph.add_edge(i, j, weight=m)
        return graph

    @property
    def n(self) -> int:
        return self.matrix.rows

    @property
    def d(self) -> int:
        return self.matrix.d

    def edges(self) -> List[Tuple[int, int, int]]:
        """(i, j, m)，i < j，0 起始"""
        arr = self.matrix.entries
        rows, cols = np.nonzero(np.triu(arr, 1))
        return [(int(i), int(j), int(arr[i, j])) for i, j in zip(rows, cols)]

    def neighbours(self, v: int) -> List[int]:
        return [int(u) for u in np.nonzero(self.matrix.entries[v])[0]]


@dataclass
class ValidationReport:
    valid: bool
    violations: List[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.valid


# ============================================
# 态的构造
# ============================================

def graph_state(g: GraphAdjacency) -> StabilizerTableau:
    """规范生成元 g_i = X_i ⊗ Π_j Z_j^{Γ_ij}，相位全为 0"""
    n = g.n
    arr = np.zeros((n, 2 * n), dtype=np.int64)
    arr[np.arange(n), 2 * np.arange(n)] = 1
    arr[:, 1::2] = g.matrix.entries
    return StabilizerTableau(PrimeFieldMatrix(arr, g.matrix.order))


def product_state(n: int, d: Union[int, FieldOrder] = 2) -> StabilizerTableau:
    """|0>^n，生成元 Z_i"""
    arr = np.zeros((n, 2 * n), dtype=np.int64)
    arr[np.arange(n), 2 * np.arange(n) + 1] = 1
    return StabilizerTableau(PrimeFieldMatrix(arr, d))


def tensor_product(t1: StabilizerTableau, t2: StabilizerTableau) -> StabilizerTableau:
    """t1 的位点在前"""
    if t1.order != t2.order:
        raise FieldMismatchError(f"域不一致: {t1.order} vs {t2.order}")
    return StabilizerTableau(block_diag(t1.generators, t2.generators), t1.phases + t2.phases)


def is_valid_stabilizer(t: StabilizerTableau) -> ValidationReport:
    violations = []
    n = t.n
    if t.generators.rows != n:
        violations.append(f"count: {t.generators.rows} 个生成元, 需要 {n} 个")
    r = rank(t.generators)
    if r != t.generators.rows:
        violations.append(f"rank: 生成元线性相关 (rank {r} < {t.generators.rows})")
    gram = symplectic_gram(t.generators)
    if not gram.is_zero():
        i, j = (int(x) for x in np.argwhere(gram.entries)[0])
        violations.append(f"isotropy: 生成元 {i + 1} 与 {j + 1} 不对易")
    if t.d == 2:
        arr = t.generators.as_int()
        y_counts = (arr[:, 0::2] * arr[:, 1::2]).sum(axis=1)
        for i, (e, y) in enumerate(zip(t.phases, y_counts)):
            if (e + int(y)) % 2:
                violations.append(f"phase: 生成元 {i + 1} 的平方为 -1")
    return ValidationReport(not violations, violations)


# ============================================
# 局域 / 余局域子空间
# ============================================

def _party_columns(partition: PartyPartition, parties: Iterable[int]) -> List[int]:
    cols = []
    for p in parties:
        cols.extend(partition.site_columns(p))
    return sorted(cols)


def _check_partition(t: StabilizerTableau, partition: PartyPartition, party: int):
    if partition.n != t.n:
        raise FieldMismatchError(f"划分位点数 {partition.n} 与态 {t.n} 不一致")
    if not 0 <= party < partition.M:
        raise InvalidStateError(f"参与方下标越界: {party + 1} (M={partition.M})")


def local_subspace_dim(t: StabilizerTableau, partition: PartyPartition, party: int) -> int:
    """只作用在该参与方上的稳定子向量构成的子空间维数"""
    _check_partition(t, partition, party)
    others = [p for p in range(partition.M) if p != party]
    cols = _party_columns(partition, others)
    if not cols:
        return t.generators.rows
    return t.generators.rows - rank(t.generators.submatrix(range(t.generators.rows), cols))


def colocal_subspace(t: StabilizerTableau, partition: PartyPartition, party: int) -> PrimeFieldMatrix:
    """在该参与方上为零的稳定子向量，行为基向量 (长度 2n)"""
    _check_partition(t, partition, party)
    cols = _party_columns(partition, [party])
    restricted = t.generators.submatrix(range(t.generators.rows), cols)
    coefficients = left_kernel(restricted)
    if coefficients.rows == 0:
        return PrimeFieldMatrix(np.zeros((0, 2 * t.n), dtype=np.int64), t.order)
    return coefficients @ t.generators


def reduced_rank_exponent(t: StabilizerTableau, partition: PartyPartition, party: int) -> int:
    """log_d rk(ρ_α) = |α| − dim V_α"""
    return len(partition.parties[party]) - local_subspace_dim(t, partition, party)


# ============================================
# 图操作
# ============================================

def _with_matrix(g: GraphAdjacency, arr: np.ndarray) -> GraphAdjacency:
    return GraphAdjacency(PrimeFieldMatrix(arr, g.matrix.order))


def _check_site(g: GraphAdjacency, v: int):
    if not 0 <= v < g.n:
        raise InvalidStateError(f"顶点下标越界: {v + 1} (n={g.n})")


def local_complement(g: GraphAdjacency, v: int) -> GraphAdjacency:
    """量子比特局域补: 翻转 N(v) 内部的所有边"""
    if g.d != 2:
        raise FieldMismatchError("local_complement 只用于 d = 2，qudit 请用 qudit_local_complement")
    return qudit_local_complement(g, v, 1)


def qudit_local_complement(g: GraphAdjacency, v: int, a: int = 1) -> GraphAdjacency:
    """Γ → Γ + a·(Γ_v Γ_vᵀ)，对角线清零"""
    _check_site(g, v)
    if a % g.d == 0:
        raise InvalidStateError("局域补的系数不能为 0")
    arr = g.matrix.as_int()
    row = arr[v]
    arr = arr + a * np.outer(row, row)
    np.fill_diagonal(arr, 0)
    return _with_matrix(g, arr)


def qudit_edge_multiply(g: GraphAdjacency, v: int, b: int) -> GraphAdjacency:
    """把与 v 相连的所有边的重数乘以 b"""
    _check_site(g, v)
    if b % g.d == 0:
        raise InvalidStateError("边重数乘子不能为 0")
    arr = g.matrix.as_int()
    arr[v, :] *= b
    arr[:, v] *= b
    return _with_matrix(g, arr)


def toggle_edge(g: GraphAdjacency, i: int, j: int, delta: int = 1) -> GraphAdjacency:
    """Γ_ij += delta (mod d)"""
    _check_site(g, i)
    _check_site(g, j)
    if i == j:
        raise InvalidStateError(f"不能在顶点 {i + 1} 上加自环")
    arr = g.matrix.as_int()
    arr[i, j] += delta
    arr[j, i] += delta
    return _with_matrix(g, arr)


@dataclass(frozen=True)
class LCEMove:
    """
    一步 LCE 操作

    kind: "complement" (v, weight) | "toggle" (i, j, delta) | "multiply" (v, weight)
    """

    kind: str
    i: int
    j: int = -1
    weight: int = 1

    @classmethod
    def complement(cls, v: int, a: int = 1) -> "LCEMove":
        return cls("complement", v, -1, a)

    @classmethod
    def toggle(cls, i: int, j: int, delta: int = 1) -> "LCEMove":
        return cls("toggle", i, j, delta)

    @classmethod
    def multiply(cls, v: int, b: int) -> "LCEMove":
        return cls("multiply", v, -1, b)

    def __str__(self) -> str:
        if self.kind == "toggle":
            return f"toggle({self.i + 1},{self.j + 1},{self.weight})"
        return f"{self.kind}({self.i + 1},{self.weight})"


def apply_lce_move(g: GraphAdjacency, partition: PartyPartition, move: LCEMove) -> GraphAdjacency:
    if move.kind == "complement":
        if g.d == 2:
            return local_complement(g, move.i)
        return qudit_local_complement(g, move.i, move.weight)
    if move.kind == "multiply":
        if g.d == 2:
            raise FieldMismatchError("multiply 只用于 d >= 3")
        return qudit_edge_multiply(g, move.i, move.weight)
    if move.kind == "toggle":
        if move.i == move.j or partition.party_of(move.i) != partition.party_of(move.j):
            raise InvalidStateError(f"只允许在同一参与方内加/删边: {move}")
        return toggle_edge(g, move.i, move.j, move.weight)
    raise InvalidStateError(f"未知的 LCE 操作: {move.kind}")


def apply_lce_sequence(g: GraphAdjacency, partition: PartyPartition, moves: Sequence[LCEMove]) -> GraphAdjacency:
    """依次执行 LCE 操作，跨参与方加边直接报错"""
    if partition.n != g.n:
        raise FieldMismatchError(f"划分位点数 {partition.n} 与图 {g.n} 不一致")
    for move in moves:
        g = apply_lce_move(g, partition, move)
    return g


def lce_moves(g: GraphAdjacency, partition: PartyPartition) -> List[LCEMove]:
    """图上所有单步 LCE 操作，顺序确定"""
    q = g.d
    moves: List[LCEMove] = []
    for v in range(g.n):
        for a in range(1, q if q > 2 else 2):
            moves.append(LCEMove.complement(v, a))
        if q > 2:
            for b in range(2, q):
                moves.append(LCEMove.multiply(v, b))
    for party in partition.parties:
        for x in range(len(party)):
            for y in range(x + 1, len(party)):
                for delta in range(1, q):
                    moves.append(LCEMove.toggle(party[x], party[y], delta))
    return moves


def lce_orbit(g: GraphAdjacency, partition: PartyPartition, limit: int = 4096) -> List[GraphAdjacency]:
    """
    广度优先遍历 LCE 轨道

    轨道内所有图彼此 PLC 等价。达到 limit 个图后停止。
    """
    seen = {g.matrix: g}
    queue = deque([g])
    moves = lce_moves(g, partition)
    while queue and len(seen) < limit:
        current = queue.popleft()
        for move in moves:
            nxt = apply_lce_move(current, partition, move)
            if nxt.matrix not in seen:
                seen[nxt.matrix] = nxt
                queue.append(nxt)
                if len(seen) >= limit:
                    break
    return list(seen.values())


# ============================================
# 随机生成 (性质测试)
# ============================================

def random_graph(n: int, d: Union[int, FieldOrder] = 2, seed=0, density: float = 0.5) -> GraphAdjacency:
    order = as_order(d)
    rng = np.random.default_rng(seed)
    arr = np.zeros((n, n), dtype=np.int64)
    iu = np.triu_indices(n, 1)
    present = rng.random(len(iu[0])) < density
    weights = rng.integers(1, order.d, size=len(iu[0])) if order.d > 2 else np.ones(len(iu[0]), dtype=np.int64)
    arr[iu] = present * weights
    arr = arr + arr.T
    return GraphAdjacency(PrimeFieldMatrix(arr, order))


def random_tree(n: int, d: Union[int, FieldOrder] = 2, seed=0, multiplicities: bool = True) -> GraphAdjacency:
    """由随机 Prüfer 序列生成的树；multiplicities 为 True 时 qudit 边重数随机"""
    order = as_order(d)
    rng = np.random.default_rng(seed)
    if n == 1:
        return GraphAdjacency(PrimeFieldMatrix(np.zeros((1, 1)), order))
    if n == 2:
        tree = nx.path_graph(2)
    else:
        tree = nx.from_prufer_sequence([int(x) for x in rng.integers(0, n, size=n - 2)])
    edges = []
    for u, v in sorted(tree.edges()):
        m = int(rng.integers(1, order.d)) if multiplicities and order.d > 2 else 1
        edges.append((u, v, m))
    return GraphAdjacency.from_edges(n, edges, order)


def random_partition(n: int, M: int, seed=0) -> PartyPartition:
    """把 n 个位点随机分给 M 个非空参与方"""
    if not 1 <= M <= n:
        raise InvalidStateError(f"参与方个数必须在 1..{n} 之间: {M}")
    rng = np.random.default_rng(seed)
    labels = np.concatenate([np.arange(M), rng.integers(0, M, size=n - M)])
    rng.shuffle(labels)
    parties = tuple(tuple(int(s) for s in np.nonzero(labels == p)[0]) for p in range(M))
    return PartyPartition(n, parties)
