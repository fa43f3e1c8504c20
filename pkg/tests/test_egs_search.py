"""
EGS 搜索: 小配置上的完整运行，大配置标记为 slow
"""
import pytest

from src.cache_manager import CacheManager
from src.commutation import from_graph
from src.equivalence import Verdict, congruence_equivalent
from src.errors import BudgetExceededError, InvalidStateError
from src.stabilizer_states import GraphAdjacency
from src.symplectic_pauli import PartyPartition
from src.tasks.egs_search import (
    PartyConfiguration,
    check_report_invariants,
    edge_layout,
    egs_search,
    egs_search_from_orbit_database,
    enumerate_graph_states,
    party_assignments,
    qutrit_egs_search,
    relabel_equivalent,
    spiral_graph,
)

SINGLES = PartyPartition.from_sizes((1, 1, 1, 1))
STAR4 = GraphAdjacency.from_edges(4, [(0, 1), (0, 2), (0, 3)])
PATH4 = GraphAdjacency.from_edges(4, [(0, 1), (1, 2), (2, 3)])


def _run(sizes, d=2, **kwargs):
    kwargs.setdefault("max_workers", 1)
    kwargs.setdefault("use_cache", False)
    return egs_search(sizes, d=d, **kwargs)


def _contains_class(report, graph, partition):
    target = from_graph(graph, partition)
    return any(
        congruence_equivalent(target, rep.commutation).verdict == Verdict.EQUIVALENT
        for rep in report.representatives
    )


def test_party_configuration():
    config = PartyConfiguration.parse("2,1,1,1")
    assert config.n == 5
    assert config.M == 4
    assert str(config) == "2,1,1,1"
    assert len(config.site_permutations()) == 2
    assert len(config.party_relabelings()) == 6
    with pytest.raises(InvalidStateError):
        PartyConfiguration((2, 0, 1))


def test_edge_layout_drops_intra_party_pairs():
    config = PartyConfiguration((2, 1, 1, 1))
    assert len(edge_layout(config, False)) == 10
    assert (0, 1) not in edge_layout(config, True)
    assert len(edge_layout(config, True)) == 9


def test_enumeration_budget():
    with pytest.raises(BudgetExceededError):
        list(enumerate_graph_states((1, 1, 1, 1), budget=10))
    assert len(list(enumerate_graph_states((1, 1, 1, 1)))) == 64


def test_canonical_filter_keeps_one_graph_per_orbit():
    # 参与方 (2) 内交换两个位点: 9 条边的编号轨道
    plain = list(enumerate_graph_states((2, 1, 1, 1), drop_intra_party_edges=True))
    canonical = list(enumerate_graph_states((2, 1, 1, 1), drop_intra_party_edges=True, canonical_filter=True))
    assert len(plain) == 512
    assert len(plain) / 2 < len(canonical) < len(plain)


def test_spiral_graph_layout():
    graph, partition = spiral_graph(5)
    assert partition.sizes == (2, 1, 1, 1)
    assert graph.edges() == [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1)]
    with pytest.raises(InvalidStateError):
        spiral_graph(3)


def test_party_assignments():
    assignments = list(party_assignments(4, (2, 1, 1)))
    assert len(assignments) == 12
    assert ((0, 1), (2,), (3,)) in assignments
    assert list(party_assignments(4, (2, 1))) == []


def test_four_qubit_singles():
    report = _run((1, 1, 1, 1))
    assert report.complete
    assert report.class_count_up_to_relabeling == 2
    assert _contains_class(report, STAR4, SINGLES)
    assert _contains_class(report, PATH4, SINGLES)
    assert check_report_invariants(report) == []


def test_five_qubits_two_one_one_one_is_spiral_only():
    report = _run((2, 1, 1, 1))
    assert report.complete
    assert report.class_count_up_to_relabeling == 1
    graph, partition = spiral_graph(5)
    spiral = from_graph(graph, partition)
    relabelings = PartyConfiguration((2, 1, 1, 1)).party_relabelings()
    assert relabel_equivalent(spiral, report.representatives[0].commutation, relabelings) == Verdict.EQUIVALENT


def test_size_forced_configuration_has_no_classes():
    report = _run((3, 1, 1, 1))
    assert report.class_count == 0
    assert report.stats["examined"] == 0
    assert any("force decomposability" in note for note in report.notes)


def test_truncated_enumeration_is_partial():
    report = _run((1, 1, 1, 1), budgets={"graph_enumeration": 16})
    assert report.status == "PARTIAL"
    assert report.stats["examined"] == 16


def test_report_to_dict():
    data = _run((1, 1, 1, 1)).to_dict()
    assert data["status"] == "COMPLETE"
    assert data["configuration"] == [1, 1, 1, 1]
    assert data["source"] == "enumeration"
    assert "class counts cover indecomposable PLC classes only" in data["notes"]
    for rep in data["representatives"]:
        assert rep["n"] == 4
        assert all(1 <= i < j <= 4 for i, j, _ in rep["edges"])


def test_chunk_cache_is_reused(tmp_path):
    cache = CacheManager(str(tmp_path), enabled=True)
    first = _run((1, 1, 1, 1), cache=cache, use_cache=True)
    second = _run((1, 1, 1, 1), cache=cache, use_cache=True)
    assert cache.get_cache_stats()["hits"] >= 1
    assert first.to_dict() == second.to_dict()


def test_qutrit_singles_include_loop_with_one_double_edge():
    report = qutrit_egs_search((1, 1, 1, 1), max_workers=1, use_cache=False)
    assert report.complete
    loop = GraphAdjacency.from_edges(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 2)], 3)
    star = GraphAdjacency.from_edges(4, [(0, 1), (0, 2), (0, 3)], 3)
    assert _contains_class(report, loop, SINGLES)
    assert _contains_class(report, star, SINGLES)


def test_orbit_database_source():
    report = egs_search_from_orbit_database([STAR4, PATH4], (1, 1, 1, 1), max_workers=1)
    assert report.source == "orbit-database"
    assert report.stats["database_graphs"] == 2
    assert report.class_count_up_to_relabeling == 2


def test_orbit_database_skips_other_sizes():
    triangle = GraphAdjacency.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    report = egs_search_from_orbit_database([triangle, STAR4], (1, 1, 1, 1), max_workers=1)
    assert report.stats["size_mismatch"] == 1
    assert report.class_count == 1


@pytest.mark.slow
@pytest.mark.parametrize("sizes", [(2, 2, 1, 1), (2, 2, 2, 1)])
def test_larger_configurations_are_consistent(sizes):
    report = _run(sizes)
    assert check_report_invariants(report) == []


@pytest.mark.slow
def test_six_qubits_five_parties():
    report = _run((2, 1, 1, 1, 1))
    assert report.complete
    assert report.class_count == 19
    # 四个单比特参与方的全部 24 个置换: 轨道大小 6, 6, 6, 1
    assert report.class_count_up_to_relabeling == 4
    assert sorted(len(cls) for cls in report.relabel_classes) == [1, 6, 6, 6]
