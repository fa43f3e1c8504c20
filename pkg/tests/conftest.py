"""
共享测试夹具: Bell、GHZ3 及其换基形式、四 qutrit 例子、8×8 非态矩阵组
"""
import os
import sys

# 测试时不写 logs/ 文件
os.environ.setdefault("PLC_LOG_TO_FILE", "0")

PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, PROJECT_ROOT)

import numpy as np
import pytest

from src.commutation import CommutationTuple, complete_to_zero_sum
from src.field_linalg import PrimeFieldMatrix
from src.stabilizer_states import GraphAdjacency, graph_state
from src.symplectic_pauli import PartyPartition


def pm(rows, d=2):
    return PrimeFieldMatrix(rows, d)


BELL_MATRICES = [
    [[0, 1], [1, 0]],
    [[0, 1], [1, 0]],
]

GHZ3_MATRICES = [
    [[0, 1, 0], [1, 0, 0], [0, 0, 0]],
    [[0, 1, 0], [1, 0, 1], [0, 1, 0]],
    [[0, 0, 0], [0, 0, 1], [0, 1, 0]],
]

# 生成元换成 g1, g2, g2·g3
GHZ3_TILDE_MATRICES = [
    [[0, 1, 1], [1, 0, 0], [1, 0, 0]],
    [[0, 1, 1], [1, 0, 1], [1, 1, 0]],
    [[0, 0, 0], [0, 0, 1], [0, 1, 0]],
]

GHZ3_BASIS_CHANGE = [[1, 0, 0], [0, 1, 0], [0, 1, 1]]

# g1 = X1 Z2 Z4, g2 = Z1 X2, g3 = X3 Z4^2, g4 = Z1 Z3^2 X4
QUTRIT_MATRICES = [
    [[0, 2, 0, 2], [1, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 0]],
    [[0, 1, 0, 0], [2, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]],
    [[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 2, 0]],
    [[0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 2], [2, 0, 1, 0]],
]

QUTRIT_EDGES = [(0, 1, 1), (0, 3, 1), (2, 3, 2)]


def _banded(entries):
    """由上三角非零位置 (i, j) 构造 8×8 交错二元矩阵"""
    arr = np.zeros((8, 8), dtype=np.int64)
    for i, j in entries:
        arr[i, j] = arr[j, i] = 1
    return arr


NON_STATE_FAMILY = [
    _banded([(0, 1), (3, 4), (4, 5)]),
    _banded([(0, 1), (1, 2), (4, 5), (5, 6)]),
    _banded([(1, 2), (2, 3), (5, 6), (6, 7)]),
    _banded([(0, 6), (2, 4)]),
]


@pytest.fixture
def bell_graph():
    return GraphAdjacency.from_edges(2, [(0, 1)])


@pytest.fixture
def bell_state(bell_graph):
    return graph_state(bell_graph)


@pytest.fixture
def bell_tuple():
    return CommutationTuple(tuple(pm(m) for m in BELL_MATRICES))


@pytest.fixture
def ghz3_graph():
    # 路径 1-2-3 的规范生成元 X1Z2, Z1X2Z3, Z2X3
    return GraphAdjacency.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def ghz3_state(ghz3_graph):
    return graph_state(ghz3_graph)


@pytest.fixture
def ghz3_tuple():
    return CommutationTuple(tuple(pm(m) for m in GHZ3_MATRICES))


@pytest.fixture
def ghz3_tilde_tuple():
    return CommutationTuple(tuple(pm(m) for m in GHZ3_TILDE_MATRICES))


@pytest.fixture
def singles3():
    return PartyPartition.from_sizes((1, 1, 1))


@pytest.fixture
def qutrit_graph():
    return GraphAdjacency.from_edges(4, QUTRIT_EDGES, 3)


@pytest.fixture
def qutrit_tuple():
    return CommutationTuple(tuple(pm(m, 3) for m in QUTRIT_MATRICES))


@pytest.fixture
def non_state_family():
    """四个矩阵之和不为零，补上第五个使其零和"""
    return complete_to_zero_sum([pm(a) for a in NON_STATE_FAMILY])


@pytest.fixture
def quiet_budgets():
    return {
        'ring_enumeration': 2 ** 16,
        'congruence_search': 2 ** 16,
        'graph_enumeration': 2 ** 16,
        'group_enumeration': 2 ** 16,
    }
