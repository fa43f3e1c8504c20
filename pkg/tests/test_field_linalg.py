import numpy as np
import pytest

from src.errors import BudgetExceededError, FieldMismatchError, InconsistentSystemError, SingularMatrixError
from src.field_linalg import (
    FieldOrder,
    PrimeFieldMatrix,
    batch_rank,
    group_order,
    hstack,
    identity,
    invert,
    invertible_stack,
    kernel,
    rank,
    random_invertible,
    random_matrix,
    rref,
    solve_linear,
    unvec,
    vec,
)
from tests.conftest import QUTRIT_MATRICES


def test_field_order_rejects_composite():
    with pytest.raises(FieldMismatchError):
        FieldOrder(4)
    assert FieldOrder(5).inv(2) == 3


def test_entries_reduced_mod_d():
    m = PrimeFieldMatrix([[5, -1], [3, 7]], 3)
    assert m.tolist() == [[2, 2], [0, 1]]


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatchError):
        PrimeFieldMatrix([[1]], 2) @ PrimeFieldMatrix([[1]], 3)


@pytest.mark.parametrize("rows, d, expected", [
    ([[0, 1], [1, 0]], 2, 2),
    ([[1, 1], [1, 1]], 2, 1),
    ([[1, 2], [2, 1]], 3, 1),
    ([[1, 2], [2, 1]], 5, 2),
    ([[0, 0, 0]], 7, 0),
])
def test_rank(rows, d, expected):
    assert rank(PrimeFieldMatrix(rows, d)) == expected


@pytest.mark.parametrize("d", [2, 3, 5])
def test_rref_transform_reproduces_reduced(d):
    m = random_matrix(5, 7, d, seed=d)
    echelon = rref(m)
    assert echelon.row_transform @ m == echelon.reduced
    assert echelon.rank == rank(m)
    for row, col in enumerate(echelon.pivots):
        assert echelon.reduced[row, col] == 1


def test_qutrit_concatenation_rank():
    mats = [PrimeFieldMatrix(m, 3) for m in QUTRIT_MATRICES]
    assert rank(hstack(mats)) == 4
    assert sum(rank(m) for m in mats) == 8


def test_invert_ghz_basis_change_is_involution():
    q = PrimeFieldMatrix([[1, 0, 0], [0, 1, 0], [0, 1, 1]], 2)
    assert invert(q) == q


def test_invert_unipotent_qutrit():
    assert invert(PrimeFieldMatrix([[1, 2], [0, 1]], 3)).tolist() == [[1, 1], [0, 1]]


def test_invert_singular():
    with pytest.raises(SingularMatrixError):
        invert(PrimeFieldMatrix([[1, 1], [1, 1]], 2))


@pytest.mark.parametrize("d", [2, 3, 7])
def test_random_invertible_round_trip(d):
    m = random_invertible(4, d, seed=11)
    assert m @ invert(m) == identity(4, d)


def test_solve_linear_returns_none_when_inconsistent():
    a = PrimeFieldMatrix([[1, 1], [1, 1]], 2)
    b = PrimeFieldMatrix([[0], [1]], 2)
    assert solve_linear(a, b) is None
    with pytest.raises(InconsistentSystemError):
        solve_linear(a, b, strict=True)


@pytest.mark.parametrize("d", [2, 3, 5])
def test_solve_linear_particular_and_kernel(d):
    a = random_matrix(3, 6, d, seed=3 * d)
    x = random_matrix(6, 1, d, seed=5 * d)
    b = a @ x
    solution = solve_linear(a, b)
    assert a @ solution.particular == b
    for row in solution.kernel.as_int():
        assert not (a.as_int() @ row % d).any()
    assert solution.dimension == 6 - rank(a)


def test_kernel_dimension():
    a = PrimeFieldMatrix([[1, 0, 1], [0, 1, 1]], 2)
    k = kernel(a)
    assert k.rows == 1
    assert k.tolist() == [[1, 1, 1]]


def test_vec_is_column_major():
    m = PrimeFieldMatrix([[1, 2], [3, 4]], 5)
    assert vec(m).tolist() == [1, 3, 2, 4]
    assert unvec(vec(m), 2, 2, 5) == m


@pytest.mark.parametrize("n, d, expected", [(1, 2, 1), (2, 2, 6), (3, 2, 168), (4, 2, 20160), (2, 3, 48)])
def test_group_order(n, d, expected):
    assert group_order(n, d) == expected


def test_invertible_stack_matches_group_order():
    stack = invertible_stack(3, 2)
    assert len(stack) == 168
    assert (batch_rank(stack.astype(np.int64), 2) == 3).all()
    assert len({s.tobytes() for s in stack}) == 168


def test_invertible_stack_single_element():
    assert invertible_stack(1, 2).tolist() == [[[1]]]


def test_invertible_stack_budget():
    with pytest.raises(BudgetExceededError):
        invertible_stack(3, 3, budget=1000)
