import networkx as nx
import numpy as np
import pytest

from src.errors import FieldMismatchError, InvalidStateError
from src.field_linalg import PrimeFieldMatrix
from src.stabilizer_states import (
    GraphAdjacency,
    LCEMove,
    StabilizerTableau,
    apply_lce_sequence,
    colocal_subspace,
    graph_state,
    is_valid_stabilizer,
    lce_orbit,
    local_complement,
    local_subspace_dim,
    product_state,
    qudit_local_complement,
    random_graph,
    random_partition,
    random_tree,
    reduced_rank_exponent,
    tensor_product,
)
from src.symplectic_pauli import PartyPartition


def test_graph_state_canonical_generators(ghz3_state):
    # X1Z2, Z1X2Z3, Z2X3
    assert ghz3_state.generators.tolist() == [
        [1, 0, 0, 1, 0, 0],
        [0, 1, 1, 0, 0, 1],
        [0, 0, 0, 1, 1, 0],
    ]
    assert is_valid_stabilizer(ghz3_state)


def test_qutrit_graph_state_is_valid(qutrit_graph):
    state = graph_state(qutrit_graph)
    assert is_valid_stabilizer(state)
    # g3 = X3 Z4^2
    assert state.generators.tolist()[2] == [0, 0, 0, 0, 1, 0, 0, 2]


def test_validation_reports_every_violation():
    t = StabilizerTableau.from_pauli_strings(["XI", "ZI"])
    report = is_valid_stabilizer(t)
    assert not report
    assert any(v.startswith("isotropy") for v in report.violations)

    dependent = StabilizerTableau.from_pauli_strings(["ZZ", "ZZ"])
    assert any(v.startswith("rank") for v in is_valid_stabilizer(dependent).violations)

    short = StabilizerTableau.from_pauli_strings(["ZZ"])
    assert any(v.startswith("count") for v in is_valid_stabilizer(short).violations)


def test_phase_of_y_generator():
    assert not is_valid_stabilizer(StabilizerTableau.from_pauli_strings(["Y"]))
    assert is_valid_stabilizer(StabilizerTableau.from_pauli_strings(["Y"], [1]))


def test_adjacency_rejects_loops_and_asymmetry():
    with pytest.raises(InvalidStateError):
        GraphAdjacency(PrimeFieldMatrix([[1, 0], [0, 0]], 2))
    with pytest.raises(InvalidStateError):
        GraphAdjacency(PrimeFieldMatrix([[0, 1], [0, 0]], 2))
    with pytest.raises(InvalidStateError):
        GraphAdjacency.from_edges(2, [(0, 0)])


def test_local_subspace_of_ghz(ghz3_state, singles3):
    assert [local_subspace_dim(ghz3_state, singles3, a) for a in range(3)] == [0, 0, 0]
    assert [reduced_rank_exponent(ghz3_state, singles3, a) for a in range(3)] == [1, 1, 1]


def test_colocal_subspace_of_ghz(ghz3_state, singles3):
    # g1 = X1Z2 在位点 3 上为零
    colocal = colocal_subspace(ghz3_state, singles3, 2)
    assert colocal.tolist() == [[1, 0, 0, 1, 0, 0]]


def test_product_state_is_all_local():
    t = product_state(3)
    p = PartyPartition.from_sizes((1, 2))
    assert is_valid_stabilizer(t)
    assert local_subspace_dim(t, p, 0) == 1
    assert local_subspace_dim(t, p, 1) == 2


def test_tensor_product_sites(bell_state):
    t = tensor_product(bell_state, product_state(1))
    assert t.n == 3
    assert is_valid_stabilizer(t)


def test_local_complement_of_star_gives_complete_graph():
    star = GraphAdjacency.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    complete = local_complement(star, 0)
    assert sorted((i, j) for i, j, _ in complete.edges()) == [
        (0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)
    ]


def test_local_complement_requires_qubits(qutrit_graph):
    with pytest.raises(FieldMismatchError):
        local_complement(qutrit_graph, 0)


def test_qudit_local_complement_formula():
    g = GraphAdjacency.from_edges(3, [(0, 1, 1), (0, 2, 2)], 3)
    out = qudit_local_complement(g, 0, 1)
    # Γ_12 += Γ_01·Γ_02 = 2
    assert out.matrix.tolist() == [[0, 1, 2], [1, 0, 2], [2, 2, 0]]


def test_cross_party_toggle_rejected(ghz3_graph, singles3):
    with pytest.raises(InvalidStateError):
        apply_lce_sequence(ghz3_graph, singles3, [LCEMove.toggle(0, 1)])


def test_intra_party_toggle_allowed(ghz3_graph):
    p = PartyPartition.parse("1,2|3")
    out = apply_lce_sequence(ghz3_graph, p, [LCEMove.toggle(0, 1)])
    assert [(i, j) for i, j, _ in out.edges()] == [(1, 2)]


def test_lce_orbit_contains_start(ghz3_graph, singles3):
    orbit = lce_orbit(ghz3_graph, singles3)
    assert orbit[0] == ghz3_graph
    assert len(orbit) > 1
    assert all(is_valid_stabilizer(graph_state(g)) for g in orbit)


@pytest.mark.parametrize("d", [2, 3, 5])
def test_random_graph_states_are_valid(d):
    rng = np.random.default_rng(d)
    for _ in range(10):
        g = random_graph(int(rng.integers(1, 7)), d, rng)
        assert is_valid_stabilizer(graph_state(g))


def test_random_tree_is_a_tree():
    tree = random_tree(7, 3, seed=4)
    assert len(tree.edges()) == 6
    graph = tree.to_networkx()
    assert nx.is_tree(graph)


def test_random_partition_nonempty():
    p = random_partition(6, 4, seed=2)
    assert p.M == 4
    assert all(p.sizes)
    with pytest.raises(InvalidStateError):
        random_partition(2, 3)
