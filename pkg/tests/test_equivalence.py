import numpy as np
import pytest

from src.commutation import (
    CommutationTuple,
    change_basis,
    direct_sum,
    random_commutation_tuple,
    zero_tuple,
)
from src.equivalence import (
    FittingStatus,
    Verdict,
    brute_force_block_diagonalizable,
    brute_force_congruence,
    canonical_tuple_key,
    congruence_equivalent,
    endomorphism_basis,
    fitting_split,
    is_self_adjoint,
    plc_equivalent,
)
from src.errors import FieldMismatchError
from src.field_linalg import PrimeFieldMatrix, identity, random_invertible
from src.stabilizer_states import GraphAdjacency, graph_state
from tests.conftest import BELL_MATRICES, pm


def _bell_with_idle_party():
    bell = CommutationTuple(tuple(pm(m) for m in BELL_MATRICES) + (pm([[0, 0], [0, 0]]),))
    return direct_sum(bell, zero_tuple(1, 3))


def test_ghz_and_basis_changed_ghz_are_congruent(ghz3_tuple, ghz3_tilde_tuple):
    result = congruence_equivalent(ghz3_tuple, ghz3_tilde_tuple)
    assert result.verdict == Verdict.EQUIVALENT
    assert change_basis(ghz3_tuple, result.witness).matrices == ghz3_tilde_tuple.matrices
    assert result.to_dict()["verdict"] == "equivalent"


def test_identical_tuples_give_identity_witness(ghz3_tuple):
    result = congruence_equivalent(ghz3_tuple, ghz3_tuple)
    assert result.equivalent
    assert result.witness == identity(3, 2)


def test_ghz_vs_bell_times_zero_is_inequivalent(ghz3_tuple):
    result = congruence_equivalent(ghz3_tuple, _bell_with_idle_party())
    assert result.verdict == Verdict.INEQUIVALENT
    assert "subset_ranks" in result.reason
    assert result.witness is None


def test_exhausted_budget_is_inconclusive(ghz3_tuple, ghz3_tilde_tuple):
    result = congruence_equivalent(ghz3_tuple, ghz3_tilde_tuple, budget=1, samples=0)
    assert result.verdict == Verdict.INCONCLUSIVE
    assert result.witness is None
    assert result.searched == 0


def test_mismatched_fields_raise(ghz3_tuple):
    qutrit = CommutationTuple(tuple(pm(m.tolist(), 3) for m in ghz3_tuple.matrices))
    with pytest.raises(FieldMismatchError):
        congruence_equivalent(ghz3_tuple, qutrit)


def test_path_and_triangle_states_are_plc_equivalent(ghz3_graph, singles3):
    triangle = GraphAdjacency.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    result = plc_equivalent(graph_state(ghz3_graph), graph_state(triangle), singles3)
    assert result.verdict == Verdict.EQUIVALENT


@pytest.mark.parametrize("d", [2, 3])
def test_congruence_agrees_with_brute_force(d):
    rng = np.random.default_rng(40 + d)
    max_n = 4 if d == 2 else 3
    for _ in range(12):
        n = int(rng.integers(1, max_n + 1))
        M = int(rng.integers(1, n + 1))
        a = random_commutation_tuple(n, M, d, rng)
        candidates = [change_basis(a, random_invertible(n, d, rng)), random_commutation_tuple(n, M, d, rng)]
        for b in candidates:
            result = congruence_equivalent(a, b, budget=2 ** 16)
            brute = brute_force_congruence(a, b, budget=2 ** 16)
            if result.verdict == Verdict.EQUIVALENT:
                assert brute is not None
            elif result.verdict == Verdict.INEQUIVALENT:
                assert brute is None


def test_canonical_key_is_congruence_invariant(ghz3_tuple, ghz3_tilde_tuple):
    assert canonical_tuple_key(ghz3_tuple) == canonical_tuple_key(ghz3_tilde_tuple)
    assert canonical_tuple_key(ghz3_tuple) != canonical_tuple_key(_bell_with_idle_party())


def test_bell_endomorphism_basis(bell_tuple):
    basis = endomorphism_basis(bell_tuple)
    assert basis.dimension == 3
    assert basis.contains(identity(2, 2))
    assert not basis.contains(PrimeFieldMatrix([[1, 0], [0, 0]], 2))
    assert all(is_self_adjoint(bell_tuple, e) for e in basis.matrices)


def test_fitting_bell_is_indecomposable(bell_tuple):
    result = fitting_split(bell_tuple)
    assert result.status == FittingStatus.INDECOMPOSABLE
    assert result.exhaustive
    assert result.ring_dimension == 3


def test_fitting_ghz_is_indecomposable(ghz3_tuple):
    result = fitting_split(ghz3_tuple, budget=2 ** 16)
    assert result.status == FittingStatus.INDECOMPOSABLE
    assert brute_force_block_diagonalizable(ghz3_tuple) is None


def test_fitting_splits_conjugated_direct_sum(bell_tuple):
    twice = direct_sum(bell_tuple, bell_tuple)
    hidden = change_basis(twice, random_invertible(4, 2, 11))
    result = fitting_split(hidden, budget=2 ** 16)
    assert result.splits
    assert sorted(result.sizes) == [2, 2]
    n1 = result.sizes[0]
    for m in change_basis(hidden, result.witness).matrices:
        assert not m.entries[:n1, n1:].any()
    assert result.idempotent @ result.idempotent == result.idempotent


def test_fitting_splits_common_radical(bell_tuple):
    padded = direct_sum(bell_tuple, zero_tuple(1, 2))
    result = fitting_split(padded)
    assert result.splits
    assert result.reason == "common radical"
    assert result.sizes == (2, 1)


def test_fitting_without_budget_is_inconclusive(bell_tuple):
    result = fitting_split(bell_tuple, budget=1, samples=0)
    assert result.status == FittingStatus.INCONCLUSIVE
    assert not result.exhaustive


def test_fitting_single_generator():
    result = fitting_split(zero_tuple(1, 2))
    assert result.status == FittingStatus.INDECOMPOSABLE
