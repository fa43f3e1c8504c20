import pytest

from src import decomposition
from src.commutation import CommutationTuple, change_basis, direct_sum, zero_tuple
from src.decomposition import (
    decompose,
    decomposition_order_invariance,
    ghz_extraction_condition,
    ghz_extraction_count,
    name_block,
    reference_ghz_tuple,
    sizes_force_decomposable,
    tripartite_canonical_counts,
)
from src.errors import PreconditionError, StabilizerCodeTupleError
from src.field_linalg import random_invertible
from src.stabilizer_states import GraphAdjacency, graph_state, product_state, tensor_product
from src.symplectic_pauli import PartyPartition


@pytest.fixture
def mixed_tuple():
    """Bell(1,2) ⊕ GHZ(1,2,3) ⊕ |0>，随机换基"""
    total = direct_sum(reference_ghz_tuple([0, 1], 3), reference_ghz_tuple([0, 1, 2], 3))
    total = direct_sum(total, zero_tuple(1, 3))
    return change_basis(total, random_invertible(6, 2, 5))


@pytest.fixture
def mixed_state():
    """位点: GHZ 路径 0-1-2, Bell 3-4, |0> 5"""
    ghz = graph_state(GraphAdjacency.from_edges(3, [(0, 1), (1, 2)]))
    bell = graph_state(GraphAdjacency.from_edges(2, [(0, 1)]))
    state = tensor_product(tensor_product(ghz, bell), product_state(1))
    partition = PartyPartition(6, ((0, 3, 5), (1, 4), (2,)))
    return state, partition


def test_reference_tuples_are_named():
    assert name_block(reference_ghz_tuple([0, 1], 3)) == "bell:1,2"
    assert name_block(reference_ghz_tuple([0, 2], 3)) == "bell:1,3"
    assert name_block(reference_ghz_tuple([0, 1, 2], 3)) == "ghz:1,2,3"
    assert name_block(zero_tuple(1, 3)) == "zero"


def test_reference_ghz_centre_does_not_matter():
    assert name_block(reference_ghz_tuple([2, 0, 1], 3)) == "ghz:1,2,3"


def test_ghz_is_single_block(ghz3_tuple):
    report = decompose(ghz3_tuple)
    assert report.complete
    assert report.sizes == [3]
    assert report.names == ["ghz:1,2,3"]


def test_decompose_mixed_tuple(mixed_tuple):
    report = decompose(mixed_tuple)
    assert report.complete
    assert sorted(report.sizes) == [1, 2, 3]
    assert sorted(report.names) == ["bell:1,2", "ghz:1,2,3", "zero"]
    counts = report.named_counts()
    assert counts == {"zero": 1, "bell": {"1,2": 1}, "ghz": {"1,2,3": 1}, "other": 0}

    total = report.blocks[0]
    for block in report.blocks[1:]:
        total = direct_sum(total, block)
    assert change_basis(mixed_tuple, report.witness).matrices == total.matrices


def test_decompose_to_dict_keys(ghz3_tuple):
    data = decompose(ghz3_tuple).to_dict()
    assert sorted(data) == ["blocks", "complete", "named_counts", "names", "sizes", "unresolved_blocks", "witness"]


def test_decompose_forwards_budget_to_naming(ghz3_tuple, monkeypatch):
    seen = []
    original = decomposition.congruence_equivalent

    def recording(a, b, budget=None, **kwargs):
        seen.append(budget)
        return original(a, b, budget=budget, **kwargs)

    monkeypatch.setattr(decomposition, "congruence_equivalent", recording)
    report = decompose(ghz3_tuple, budget=1234)
    assert report.names == ["ghz:1,2,3"]
    assert seen == [1234]

    seen.clear()
    decompose(ghz3_tuple, budget=1234, naming_budget=77)
    assert seen == [77]


def test_decompose_rejects_non_state_family(non_state_family):
    with pytest.raises(StabilizerCodeTupleError):
        decompose(CommutationTuple(non_state_family))


def test_tripartite_counts(mixed_state):
    state, partition = mixed_state
    counts = tripartite_canonical_counts(state, partition)
    assert counts.zeros == (1, 0, 0)
    assert counts.bell == (1, 0, 0)
    assert counts.ghz == 1
    assert counts.to_dict()["bell"]["1,2"] == 1


def test_tripartite_counts_need_three_parties(bell_state):
    with pytest.raises(PreconditionError):
        tripartite_canonical_counts(bell_state, PartyPartition.from_sizes((1, 1)))


def test_ghz_extraction_count(ghz3_state, singles3):
    assert ghz_extraction_count(ghz3_state, singles3) == 1
    assert ghz_extraction_count(product_state(3), singles3) == 0


def test_ghz_extraction_condition_holds_for_ghz(ghz3_state, singles3):
    result = ghz_extraction_condition(ghz3_state, singles3)
    assert result
    assert result.targets == (1,)
    assert len(result.witnesses) == 1
    # 见证元素在被排除的第三方上为恒等
    assert not result.witnesses[0].as_int()[0, 4:6].any()


def test_ghz_extraction_condition_reads_configured_anchor(ghz3_state, singles3, monkeypatch):
    monkeypatch.setitem(decomposition.EGS, "anchor_party", 1)
    result = ghz_extraction_condition(ghz3_state, singles3)
    assert result.anchor == 1
    assert result.targets == (0,)
    assert result


def test_ghz_extraction_condition_requires_full_local_rank(mixed_state):
    state, partition = mixed_state
    with pytest.raises(PreconditionError):
        ghz_extraction_condition(state, partition)


def test_ghz_extraction_condition_fails_on_bell_pairs():
    # Bell(1,2) ⊗ Bell(2,3): 第一方与第二方之间没有只支撑在它们上的公共元素
    pairs = GraphAdjacency.from_edges(4, [(0, 1), (2, 3)])
    partition = PartyPartition(4, ((0,), (1, 2), (3,)))
    result = ghz_extraction_condition(graph_state(pairs), partition, anchor=0, excluded=1)
    assert result.targets == (2,)
    assert not result


@pytest.mark.parametrize("sizes,expected", [
    ((3, 1, 1, 1), True),
    ((1, 1, 1, 5), True),
    ((2, 1, 1, 1), False),
    ((2, 2, 1, 1), False),
    ((4, 2, 2, 2), False),
    ((5, 2, 2, 2), True),
])
def test_sizes_force_decomposable(sizes, expected):
    assert sizes_force_decomposable(sizes) is expected
    assert sizes_force_decomposable(PartyPartition.from_sizes(sizes)) is expected


def test_sizes_force_decomposable_needs_four_parties():
    with pytest.raises(PreconditionError):
        sizes_force_decomposable((3, 1, 1))


def test_decomposition_order_invariance(mixed_tuple):
    result = decomposition_order_invariance(mixed_tuple, trials=3, seed=1)
    assert result.consistent
    assert result.trials == 3
    assert all(sizes == [1, 2, 3] for sizes in result.block_sizes)
