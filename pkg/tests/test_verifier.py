import pytest

from src.commutation import from_graph
from src.equivalence import fitting_split
from src.tasks.egs_search import spiral_graph
from src.tasks.verifier import (
    PropertyCheck,
    merged_pair,
    run_oracle_suite,
    run_property_suite,
    run_suite,
    run_tripartite_suite,
    spiral_support_profile,
    verify_cosets,
    verify_spiral_family,
)


def test_spiral_support_profile():
    assert spiral_support_profile(6) == [2, 3, 3, 3, 3, 2]


def test_spiral_family_is_indecomposable():
    report = verify_spiral_family(range(4, 8), d=2, merged=False)
    assert report.passed
    assert [e.n for e in report.entries] == [4, 5, 6, 7]
    assert all(e.layout_ok for e in report.entries)
    assert report.to_dict()["suite"] == "spiral"


def test_merged_pair_splits_for_qutrits_only():
    qutrit = verify_spiral_family([4], d=3)
    qubit = verify_spiral_family([4], d=2)
    assert qutrit.entries[0].status == "indecomposable"
    assert qutrit.entries[0].merged_status == "decomposable"
    assert qubit.entries[0].merged_status == "indecomposable"


def test_merged_pair_has_two_matrices():
    graph, partition = spiral_graph(4, 3)
    pair = merged_pair(from_graph(graph, partition))
    assert pair.M == 2
    assert fitting_split(pair).splits


def test_cosets():
    assert verify_cosets().passed


def test_property_check_minimal_failure():
    check = PropertyCheck("demo")
    for trial, n in enumerate([5, 3, 3, 7]):
        check.trials += 1
        check.fail({"trial": trial, "n": n})
    assert not check.passed
    assert check.minimal_failure() == {"trial": 1, "n": 3}


def test_small_property_suite(quiet_budgets):
    report = run_property_suite(trials=10, seed=7, budgets=quiet_budgets)
    assert [c.name for c in report.checks] == [
        "rank_condition", "rank_inequality", "synthesis_round_trip",
        "lce_orbit", "qutrit_tree_multiplicities", "size_forced_decomposable",
    ]
    assert report.passed, report.to_dict()


def test_property_suite_selects_checks():
    report = run_property_suite(trials=5, seed=1, names=["rank_inequality"])
    assert [c.name for c in report.checks] == ["rank_inequality"]
    assert report.checks[0].trials == 5


def test_small_oracle_suite(quiet_budgets):
    report = run_oracle_suite(count=8, max_n=3, seed=2, budgets=quiet_budgets)
    assert report.passed, report.to_dict()


def test_small_tripartite_suite(quiet_budgets):
    report = run_tripartite_suite(trials=4, max_n=5, order_trials=2, seed=3, budgets=quiet_budgets)
    assert report.passed, report.to_dict()


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("nope")


@pytest.mark.slow
def test_full_oracle_suite():
    assert run_suite("oracle", trials=50, max_n=4, seed=0).passed


@pytest.mark.slow
def test_spiral_suite_to_twelve():
    assert run_suite("spiral", max_n=12).passed
