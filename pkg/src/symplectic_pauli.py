#!/usr/bin/env python
"""
Pauli 算符的辛向量编码 (模相位)

存储布局为逐位点交错: (a_1, b_1, ..., a_n, b_n)，第 i 个位点上的算符是 X^a Z^b。
辛形式:
    ω(f, g) = Σ_i (b_i·a'_i − a_i·b'_i)  (mod d)
d = 2 时它是对称的 (X 与 Z 反对易给出 1)；d >= 3 时反对称，ω(X, Z) = −1。
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Mapping, Sequence, Tuple, Union

import numpy as np

from src.errors import FieldMismatchError, InvalidStateError
from src.field_linalg import FieldOrder, PrimeFieldMatrix, as_order


@dataclass(frozen=True)
class PartyPartition:
    """
    位点到参与方的划分

    内部位点从 0 开始编号；文本格式 "1,2|3|4" 中从 1 开始。
    """

    n: int
    parties: Tuple[Tuple[int, ...], ...]
    # 态综合时秩为 0 的参与方可以没有位点
    allow_empty: bool = field(default=False, compare=False)

    def __post_init__(self):
        parties = tuple(tuple(sorted(int(s) for s in party)) for party in self.parties)
        object.__setattr__(self, "parties", parties)
        seen = set()
        for idx, party in enumerate(parties):
            if not party and not self.allow_empty:
                raise InvalidStateError(f"第 {idx + 1} 个参与方为空")
            for site in party:
                if site < 0 or site >= self.n:
                    raise InvalidStateError(f"位点下标越界: {site + 1} (n={self.n})")
                if site in seen:
                    raise InvalidStateError(f"位点 {site + 1} 被分配给多个参与方")
                seen.add(site)
        if len(seen) != self.n:
            missing = sorted(set(range(self.n)) - seen)
            raise InvalidStateError(f"划分未覆盖全部位点, 缺少: {[s + 1 for s in missing]}")

    @classmethod
    def from_sizes(cls, sizes: Sequence[int]) -> "PartyPartition":
        """按顺序连续分配: (2,1,1) -> 1,2|3|4"""
        parties = []
        start = 0
        for size in sizes:
            if size < 1:
                raise InvalidStateError(f"参与方大小必须 >= 1: {tuple(sizes)}")
            parties.append(tuple(range(start, start + size)))
            start += size
        return cls(start, tuple(parties))

    @classmethod
    def parse(cls, text: str, n: int = None) -> "PartyPartition":
        """解析 "1,2|3|4" 格式 (1 起始)"""
        parties = []
        try:
            for chunk in text.strip().split("|"):
                sites = [int(tok) - 1 for tok in chunk.split(",") if tok.strip()]
                parties.append(tuple(sites))
        except ValueError as exc:
            raise InvalidStateError(f"无法解析划分 '{text}': {exc}") from exc
        total = sum(len(p) for p in parties) if n is None else n
        return cls(total, tuple(parties))

    def __str__(self) -> str:
        return "|".join(",".join(str(s + 1) for s in party) for party in self.parties)

    @property
    def M(self) -> int:
        return len(self.parties)

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(len(p) for p in self.parties)

    def party_of(self, site: int) -> int:
        for idx, party in enumerate(self.parties):
            if site in party:
                return idx
        raise InvalidStateError(f"位点下标越界: {site + 1}")

    def site_columns(self, party: int) -> List[int]:
        """参与方在交错布局中占用的列"""
        cols = []
        for site in self.parties[party]:
            cols.extend((2 * site, 2 * site + 1))
        return cols

    def merged(self, i: int, j: int) -> "PartyPartition":
        """合并参与方 i, j，合并后的参与方放在 min(i, j) 的位置"""
        if i == j:
            raise InvalidStateError("合并需要两个不同的参与方")
        lo, hi = sorted((i, j))
        parties = list(self.parties)
        parties[lo] = tuple(parties[lo]) + tuple(parties[hi])
        del parties[hi]
        return PartyPartition(self.n, tuple(parties), self.allow_empty)

    def permuted(self, perm: Sequence[int]) -> "PartyPartition":
        """新的第 k 个参与方为原来的第 perm[k] 个"""
        return PartyPartition(self.n, tuple(self.parties[p] for p in perm), self.allow_empty)

    def to_list(self) -> List[List[int]]:
        """1 起始的列表形式，用于 JSON"""
        return [[s + 1 for s in party] for party in self.parties]


@dataclass(frozen=True)
class SymplecticForm:
    """n 个位点上的辛形式，由域阶决定对称/反对称"""

    d: FieldOrder
    n: int

    def __post_init__(self):
        object.__setattr__(self, "d", as_order(self.d))

    def gram(self) -> PrimeFieldMatrix:
        """交错布局下的 Gram 矩阵: 每个位点一个 [[0, -1], [1, 0]] 块"""
        q = self.d.d
        arr = np.zeros((2 * self.n, 2 * self.n), dtype=np.int64)
        for i in range(self.n):
            arr[2 * i, 2 * i + 1] = q - 1
            arr[2 * i + 1, 2 * i] = 1
        return PrimeFieldMatrix(arr, self.d)


class SymplecticVector:
    """长度 2n 的 Z_d 向量，对应一个模相位的 Pauli 算符"""

    __slots__ = ("_entries", "order")

    def __init__(self, entries, d: Union[int, FieldOrder]):
        order = as_order(d)
        arr = np.mod(np.array(entries, dtype=np.int64).reshape(-1), order.d).astype(np.uint8)
        if arr.size % 2:
            raise FieldMismatchError(f"辛向量长度必须为偶数: {arr.size}")
        arr.setflags(write=False)
        self._entries = arr
        self.order = order

    @classmethod
    def from_sites(cls, n: int, d: Union[int, FieldOrder], sites: Mapping[int, Tuple[int, int]]) -> "SymplecticVector":
        """由 {位点: (a, b)} 构造，未给出的位点为单位算符"""
        arr = np.zeros(2 * n, dtype=np.int64)
        for site, (a, b) in sites.items():
            if site < 0 or site >= n:
                raise InvalidStateError(f"位点下标越界: {site + 1}")
            arr[2 * site] = a
            arr[2 * site + 1] = b
        return cls(arr, d)

    @classmethod
    def from_pauli_string(cls, text: str) -> "SymplecticVector":
        """量子比特 Pauli 串，如 "XZI" (每个字符一个位点)"""
        table = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
        try:
            pairs = [table[ch] for ch in text.upper()]
        except KeyError as exc:
            raise InvalidStateError(f"非法 Pauli 字符: {exc}") from exc
        return cls([v for pair in pairs for v in pair], 2)

    @property
    def d(self) -> int:
        return self.order.d

    @property
    def n(self) -> int:
        return self._entries.size // 2

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def x_part(self) -> np.ndarray:
        return self._entries[0::2]

    @property
    def z_part(self) -> np.ndarray:
        return self._entries[1::2]

    def is_zero(self) -> bool:
        return not self._entries.any()

    def __add__(self, other: "SymplecticVector") -> "SymplecticVector":
        _check_compatible(self, other)
        return SymplecticVector(self._entries.astype(np.int64) + other._entries, self.order)

    def scale(self, k: int) -> "SymplecticVector":
        return SymplecticVector(self._entries.astype(np.int64) * k, self.order)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymplecticVector):
            return NotImplemented
        return self.order == other.order and np.array_equal(self._entries, other._entries)

    def __hash__(self) -> int:
        return hash((self.d, self._entries.tobytes()))

    def __repr__(self) -> str:
        return f"SymplecticVector(d={self.d}, {self._entries.tolist()})"


def _check_compatible(f: SymplecticVector, g: SymplecticVector):
    if f.order != g.order:
        raise FieldMismatchError(f"域不一致: {f.order} vs {g.order}")
    if f.n != g.n:
        raise FieldMismatchError(f"位点数不一致: {f.n} vs {g.n}")


def omega(f: SymplecticVector, g: SymplecticVector, form: SymplecticForm = None) -> int:
    """辛形式 ω(f, g)"""
    _check_compatible(f, g)
    if form is not None and (form.d != f.order or form.n != f.n):
        raise FieldMismatchError("辛形式与向量的域或位点数不一致")
    a, b = f.x_part.astype(np.int64), f.z_part.astype(np.int64)
    a2, b2 = g.x_part.astype(np.int64), g.z_part.astype(np.int64)
    return int((b @ a2 - a @ b2) % f.d)


def symplectic_gram(rows: PrimeFieldMatrix) -> PrimeFieldMatrix:
    """
    行向量组的两两辛积矩阵: 结果 (i, j) = ω(row_i, row_j)
    """
    if rows.cols % 2:
        raise FieldMismatchError(f"列数必须为偶数: {rows.cols}")
    arr = rows.as_int()
    a = arr[:, 0::2]
    b = arr[:, 1::2]
    return PrimeFieldMatrix._wrap((b @ a.T - a @ b.T) % rows.d, rows.order)


def restrict(f: SymplecticVector, party: Iterable[int]) -> SymplecticVector:
    """保留参与方内位点的 (a_i, b_i)，按位点顺序"""
    sites = sorted(set(party))
    for s in sites:
        if s < 0 or s >= f.n:
            raise InvalidStateError(f"位点下标越界: {s + 1} (n={f.n})")
    cols = [c for s in sites for c in (2 * s, 2 * s + 1)]
    return SymplecticVector(f.entries[cols], f.order)


def support(f: SymplecticVector) -> FrozenSet[int]:
    pairs = f.entries.reshape(-1, 2)
    return frozenset(int(i) for i in np.nonzero(pairs.any(axis=1))[0])


def party_support(f: SymplecticVector, partition: PartyPartition) -> FrozenSet[int]:
    if partition.n != f.n:
        raise FieldMismatchError(f"划分位点数 {partition.n} 与向量 {f.n} 不一致")
    sites = support(f)
    return frozenset(idx for idx, party in enumerate(partition.parties) if sites.intersection(party))
