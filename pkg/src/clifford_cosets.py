#!/usr/bin/env python
"""
两位点辛群 Sp(4, 2) 与局域子群的右陪集

Clifford 算符模 Pauli 和相位后就是辛矩阵；矩阵按列作用在交错布局 (x1, z1, x2, z2) 上，
先作用的算符在乘积右边。|Sp(4,2)| = 720，局域子群 Sp(2,2)×Sp(2,2) 阶为 36，商集 20 个右陪集。
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from src.field_linalg import PrimeFieldMatrix, batch_matmul, identity, invertible_stack
from src.symplectic_pauli import SymplecticForm
from src.utils import logger

# 作用在两个位点上的 LCE 算符:
# 0: CZ_12
# 1: exp(-iπ/4 X) ⊗ 1
# 2: 1 ⊗ exp(-iπ/4 X)
# 3: exp(-iπ/4 X) ⊗ exp(iπ/4 Z)
# 4: exp(iπ/4 Z) ⊗ exp(-iπ/4 X)
_X_ROTATION = [[1, 1], [0, 1]]      # X -> X, Z -> Y
_Z_ROTATION = [[1, 0], [1, 1]]      # X -> Y, Z -> Z
_IDENTITY = [[1, 0], [0, 1]]

# 每个右陪集的一个代表元及其生成序列 (两位点初始不相连，最左边的算符最先作用)
COSET_TABLE: Tuple[Tuple[Tuple[int, ...], Tuple[Tuple[int, ...], ...]], ...] = (
    ((1,), ((1, 1, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))),
    ((0, 3, 0, 2, 0, 3, 0), ((1, 1, 0, 1), (0, 1, 0, 0), (0, 1, 1, 1), (0, 0, 0, 1))),
    ((1, 0, 3, 0), ((1, 0, 1, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 1, 0, 1))),
    ((0, 4, 0), ((1, 0, 0, 0), (0, 1, 0, 1), (1, 0, 1, 1), (0, 0, 0, 1))),
    ((0, 4, 3, 0, 2, 1, 0, 4, 0), ((0, 0, 1, 1), (0, 0, 0, 1), (1, 0, 0, 0), (0, 1, 0, 0))),
    ((0, 4, 3, 4, 0), ((0, 1, 1, 0), (0, 0, 0, 1), (1, 0, 0, 1), (0, 1, 0, 0))),
    ((2, 0, 3, 0), ((1, 1, 1, 1), (0, 1, 0, 0), (0, 0, 1, 1), (0, 1, 0, 1))),
    ((0,), ((1, 0, 0, 0), (0, 1, 1, 0), (0, 0, 1, 0), (1, 0, 0, 1))),
    ((1, 2, 0, 4, 3, 0), ((0, 1, 1, 1), (0, 1, 0, 1), (1, 1, 1, 0), (0, 1, 0, 0))),
    ((1, 0, 4, 3, 0), ((0, 1, 1, 0), (0, 1, 0, 1), (1, 1, 1, 1), (0, 1, 0, 0))),
    ((2, 0), ((1, 0, 0, 0), (0, 1, 1, 1), (0, 0, 1, 1), (1, 0, 0, 1))),
    ((1, 0, 3, 4, 0), ((1, 0, 1, 0), (0, 0, 0, 1), (1, 1, 0, 1), (0, 1, 0, 1))),
    ((2, 1, 0, 3, 0, 2, 0), ((1, 0, 1, 1), (0, 0, 1, 0), (0, 1, 1, 0), (1, 1, 1, 0))),
    ((0, 3, 0, 2, 1, 0), ((1, 0, 1, 0), (0, 0, 1, 1), (0, 1, 1, 1), (1, 1, 1, 1))),
    ((0, 3, 4, 0), ((1, 1, 1, 0), (0, 0, 0, 1), (1, 0, 0, 1), (0, 1, 0, 1))),
    ((1, 0, 4, 0), ((1, 1, 0, 0), (0, 1, 0, 1), (1, 1, 1, 1), (0, 0, 0, 1))),
    ((2, 0, 3, 0, 2, 0), ((1, 1, 1, 1), (0, 0, 1, 0), (0, 1, 1, 0), (1, 0, 1, 0))),
    ((1, 0), ((1, 1, 0, 0), (0, 1, 1, 0), (0, 0, 1, 0), (1, 1, 0, 1))),
    ((2, 1, 0), ((1, 1, 0, 0), (0, 1, 1, 1), (0, 0, 1, 1), (1, 1, 0, 1))),
    ((0, 4, 0, 1, 0), ((1, 1, 0, 1), (1, 1, 1, 0), (1, 0, 1, 1), (1, 1, 0, 0))),
)


@dataclass
class CosetCheckReport:
    group_order: int
    subgroup_order: int
    coset_count: int
    sequences_verified: int
    table_matches: int
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (
            not self.failures
            and self.coset_count == self.group_order // self.subgroup_order
            and self.sequences_verified == self.coset_count
        )

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "group_order": self.group_order,
            "subgroup_order": self.subgroup_order,
            "coset_count": self.coset_count,
            "sequences_verified": self.sequences_verified,
            "table_matches": self.table_matches,
            "failures": list(self.failures),
        }


def _local(first, second) -> PrimeFieldMatrix:
    arr = np.zeros((4, 4), dtype=np.int64)
    arr[:2, :2] = first
    arr[2:, 2:] = second
    return PrimeFieldMatrix(arr, 2)


def lce_generators() -> Tuple[PrimeFieldMatrix, ...]:
    """五个 LCE 算符的辛矩阵，顺序同上"""
    cz = PrimeFieldMatrix([
        [1, 0, 0, 0],
        [0, 1, 1, 0],
        [0, 0, 1, 0],
        [1, 0, 0, 1],
    ], 2)
    return (
        cz,
        _local(_X_ROTATION, _IDENTITY),
        _local(_IDENTITY, _X_ROTATION),
        _local(_X_ROTATION, _Z_ROTATION),
        _local(_Z_ROTATION, _X_ROTATION),
    )


def compose_sequence(sequence: Sequence[int]) -> PrimeFieldMatrix:
    """按序作用: 结果 = G[s_last] ··· G[s_first]"""
    generators = lce_generators()
    result = identity(4, 2)
    for idx in sequence:
        if not 0 <= idx < len(generators):
            raise ValueError(f"生成元下标越界: {idx}")
        result = generators[idx] @ result
    return result


def is_symplectic(s: PrimeFieldMatrix) -> bool:
    omega = SymplecticForm(s.d, s.rows // 2).gram()
    return s.T @ omega @ s == omega


def symplectic_group() -> np.ndarray:
    """Sp(4, 2) 的全部元素，形状 (720, 4, 4)"""
    stack = invertible_stack(4, 2).astype(np.int64)
    omega = SymplecticForm(2, 2).gram().as_int()
    image = batch_matmul(batch_matmul(stack.transpose(0, 2, 1), omega, 2), stack, 2)
    return stack[(image == omega).all(axis=(1, 2))]


def local_subgroup() -> np.ndarray:
    """每个位点上的 Sp(2, 2) = GL(2, 2) 的直积，形状 (36, 4, 4)"""
    single = invertible_stack(2, 2).astype(np.int64)
    out = np.zeros((len(single) ** 2, 4, 4), dtype=np.int64)
    idx = 0
    for a in single:
        for b in single:
            out[idx, :2, :2] = a
            out[idx, 2:, 2:] = b
            idx += 1
    return out


def coset_key(s: np.ndarray, local: np.ndarray) -> bytes:
    """右陪集 L·s 中字典序最小元素的字节串"""
    members = batch_matmul(local, np.asarray(s, dtype=np.int64), 2).reshape(len(local), -1)
    best = np.lexsort(members.T[::-1])[0]
    return members[best].astype(np.uint8).tobytes()


def right_cosets(group: np.ndarray, local: np.ndarray) -> Dict[bytes, int]:
    """陪集键 -> 元素个数"""
    counts: Dict[bytes, int] = {}
    for s in group:
        key = coset_key(s, local)
        counts[key] = counts.get(key, 0) + 1
    return counts


def verify_coset_table(table=COSET_TABLE) -> CosetCheckReport:
    """
    检查表中每个序列生成的矩阵与代表元一致，且 20 个序列恰好落在 20 个不同的右陪集
    """
    group = symplectic_group()
    local = local_subgroup()
    cosets = right_cosets(group, local)
    failures = []

    for key, size in cosets.items():
        if size != len(local):
            failures.append(f"陪集大小 {size} != {len(local)}")

    seen: Dict[bytes, Tuple[int, ...]] = {}
    matches = 0
    for sequence, expected in table:
        product = compose_sequence(sequence)
        if product == PrimeFieldMatrix(expected, 2):
            matches += 1
        else:
            failures.append(f"序列 {list(sequence)} 的乘积 {product.tolist()} 与表中代表元不符")
        if not is_symplectic(product):
            failures.append(f"序列 {list(sequence)} 的乘积不是辛矩阵")
            continue
        key = coset_key(product.as_int(), local)
        if key in seen:
            failures.append(f"序列 {list(sequence)} 与 {list(seen[key])} 落在同一个陪集")
        elif key not in cosets:
            failures.append(f"序列 {list(sequence)} 的陪集不在群中")
        else:
            seen[key] = tuple(sequence)

    missing = len(cosets) - len(seen)
    if missing:
        failures.append(f"{missing} 个陪集没有被表中序列覆盖")
    logger.debug(f"Sp(4,2): {len(group)} 个元素, {len(cosets)} 个右陪集, 覆盖 {len(seen)}")
    return CosetCheckReport(len(group), len(local), len(cosets), len(seen), matches, failures)
