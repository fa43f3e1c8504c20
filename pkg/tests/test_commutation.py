import numpy as np
import pytest

from src.commutation import (
    CommutationTuple,
    change_basis,
    dickson_normal_form,
    direct_sum,
    extractable_zero_count,
    from_graph,
    from_state,
    merge_parties,
    permute_parties,
    random_alternating_family,
    random_commutation_tuple,
    rank_condition,
    rank_inequality_check,
    synthesize_state,
    validate,
    zero_tuple,
)
from src.errors import InvalidTupleError, SingularMatrixError, StabilizerCodeTupleError
from src.field_linalg import PrimeFieldMatrix, hstack, rank
from src.stabilizer_states import graph_state, is_valid_stabilizer, random_graph, random_partition
from src.symplectic_pauli import PartyPartition
from tests.conftest import BELL_MATRICES, GHZ3_BASIS_CHANGE, GHZ3_MATRICES, GHZ3_TILDE_MATRICES, QUTRIT_MATRICES


def _lists(c):
    return [m.tolist() for m in c.matrices]


def test_bell_from_state(bell_state):
    c = from_state(bell_state, PartyPartition.from_sizes((1, 1)))
    assert _lists(c) == BELL_MATRICES


def test_ghz_from_state(ghz3_state, singles3):
    assert _lists(from_state(ghz3_state, singles3)) == GHZ3_MATRICES


def test_qutrit_from_state_and_graph(qutrit_graph):
    p = PartyPartition.from_sizes((1, 1, 1, 1))
    assert _lists(from_state(graph_state(qutrit_graph), p)) == QUTRIT_MATRICES
    assert _lists(from_graph(qutrit_graph, p)) == QUTRIT_MATRICES


def test_single_edge_graph_gives_bell_tuple(bell_graph):
    assert _lists(from_graph(bell_graph, PartyPartition.from_sizes((1, 1)))) == BELL_MATRICES


def test_ghz_basis_change_gives_tilde_tuple(ghz3_tuple):
    q = PrimeFieldMatrix(GHZ3_BASIS_CHANGE, 2)
    assert _lists(change_basis(ghz3_tuple, q)) == GHZ3_TILDE_MATRICES


def test_change_basis_rejects_singular(ghz3_tuple):
    with pytest.raises(SingularMatrixError):
        change_basis(ghz3_tuple, PrimeFieldMatrix(np.ones((3, 3), dtype=np.int64), 2))


@pytest.mark.parametrize("d", [2, 3, 5])
def test_from_graph_matches_from_state(d):
    rng = np.random.default_rng(100 + d)
    for _ in range(10):
        n = int(rng.integers(2, 7))
        g = random_graph(n, d, rng)
        p = random_partition(n, int(rng.integers(1, n + 1)), rng)
        assert from_graph(g, p).matrices == from_state(graph_state(g), p).matrices


def test_merge_parties(ghz3_tuple):
    merged = merge_parties(ghz3_tuple, 0, 1)
    assert merged.M == 2
    assert merged[0].tolist() == [[0, 0, 0], [0, 0, 1], [0, 1, 0]]
    assert validate(merged).valid


def test_permute_parties(ghz3_tuple):
    permuted = permute_parties(ghz3_tuple, (2, 0, 1))
    assert permuted[0] == ghz3_tuple[2]
    with pytest.raises(InvalidTupleError):
        permute_parties(ghz3_tuple, (0, 0, 1))


def test_validate_lists_violations():
    not_alternating = CommutationTuple((PrimeFieldMatrix([[1, 0], [0, 0]], 3), PrimeFieldMatrix([[2, 0], [0, 0]], 3)))
    report = validate(not_alternating)
    assert not report.valid
    assert report.violations

    not_zero_sum = CommutationTuple((PrimeFieldMatrix([[0, 1], [1, 0]], 2), PrimeFieldMatrix([[0, 0], [0, 0]], 2)))
    report = validate(not_zero_sum)
    assert any(v.startswith("zero-sum") for v in report.violations)


def test_rank_condition_fixtures(bell_tuple, ghz3_tuple, qutrit_tuple):
    assert rank_condition(bell_tuple)
    assert rank_condition(ghz3_tuple)
    assert rank_condition(qutrit_tuple)


def test_non_state_family_fails_rank_condition(non_state_family):
    c = CommutationTuple(non_state_family)
    assert validate(c).valid
    assert not rank_condition(c)
    lhs = 2 * rank(hstack(list(non_state_family)))
    rhs = sum(rank(m) for m in non_state_family)
    assert lhs < rhs
    assert rank_inequality_check(non_state_family)


@pytest.mark.parametrize("d", [2, 3, 5])
def test_rank_inequality_on_random_families(d):
    rng = np.random.default_rng(d)
    for _ in range(20):
        mats = random_alternating_family(int(rng.integers(1, 7)), int(rng.integers(2, 5)), d, rng)
        assert rank_inequality_check(mats)


def test_rank_inequality_rejects_non_zero_sum():
    with pytest.raises(InvalidTupleError):
        rank_inequality_check([PrimeFieldMatrix([[0, 1], [1, 0]], 2)])


def test_dickson_normal_form_of_ghz_middle_matrix(ghz3_tuple):
    form = dickson_normal_form(ghz3_tuple[1])
    assert form.rank == 2
    assert form.zero_indices == (2,)
    reduced = form.transform @ ghz3_tuple[1] @ form.transform.T
    assert reduced.tolist() == [[0, 1, 0], [1, 0, 0], [0, 0, 0]]


def test_dickson_normal_form_qutrit_block():
    c = PrimeFieldMatrix([[0, 2], [1, 0]], 3)
    form = dickson_normal_form(c)
    reduced = form.transform @ c @ form.transform.T
    assert reduced.tolist() == [[0, 1], [2, 0]]


def test_extractable_zero_count():
    assert extractable_zero_count(zero_tuple(2, 3)) == 2
    c = direct_sum(CommutationTuple((PrimeFieldMatrix([[0, 1], [1, 0]], 2),) * 2), zero_tuple(1, 2))
    assert extractable_zero_count(c) == 1


def test_synthesize_bell(bell_tuple):
    result = synthesize_state(bell_tuple)
    assert result.tableau.n == 2
    assert result.partition.sizes == (1, 1)
    assert from_state(result.tableau, result.partition).matrices == bell_tuple.matrices


def test_synthesize_zero_tuple_gives_ket_zero():
    result = synthesize_state(zero_tuple(1, 1))
    assert result.tableau.generators.tolist() == [[0, 1]]
    assert result.partition.parties == ((0,),)


def test_synthesize_rejects_non_state_family(non_state_family):
    with pytest.raises(StabilizerCodeTupleError):
        synthesize_state(CommutationTuple(non_state_family))


@pytest.mark.parametrize("d", [2, 3])
def test_synthesize_random_tuples(d):
    rng = np.random.default_rng(7 * d)
    for _ in range(15):
        n = int(rng.integers(1, 7))
        c = random_commutation_tuple(n, int(rng.integers(1, min(n, 4) + 1)), d, rng)
        result = synthesize_state(c)
        assert is_valid_stabilizer(result.tableau)
        assert from_state(result.tableau, result.partition).matrices == c.matrices


def test_tuple_json_round_trip(qutrit_tuple):
    data = qutrit_tuple.to_dict()
    assert data["parties"] == 4
    assert CommutationTuple.from_dict(data).matrices == qutrit_tuple.matrices
    with pytest.raises(InvalidTupleError):
        CommutationTuple.from_dict({"n": 2, "d": 2, "parties": 3, "matrices": [[[0, 0], [0, 0]]]})
