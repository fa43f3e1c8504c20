import numpy as np
import pytest

from src.clifford_cosets import (
    COSET_TABLE,
    compose_sequence,
    coset_key,
    is_symplectic,
    lce_generators,
    local_subgroup,
    right_cosets,
    symplectic_group,
    verify_coset_table,
)
from src.field_linalg import identity


@pytest.fixture(scope="module")
def group():
    return symplectic_group()


@pytest.fixture(scope="module")
def local():
    return local_subgroup()


def test_generators_are_symplectic():
    assert all(is_symplectic(g) for g in lce_generators())


def test_cz_is_an_involution():
    cz = lce_generators()[0]
    assert cz @ cz == identity(4, 2)
    assert cz.tolist()[3] == [1, 0, 0, 1]


def test_compose_sequence_applies_left_to_right():
    generators = lce_generators()
    assert compose_sequence([]) == identity(4, 2)
    assert compose_sequence([0, 1]) == generators[1] @ generators[0]
    with pytest.raises(ValueError):
        compose_sequence([5])


def test_group_orders(group, local):
    assert len(group) == 720
    assert len(local) == 36


def test_twenty_right_cosets_of_equal_size(group, local):
    cosets = right_cosets(group, local)
    assert len(cosets) == 20
    assert set(cosets.values()) == {36}


def test_local_elements_share_the_identity_coset(local):
    key = coset_key(np.eye(4, dtype=np.int64), local)
    assert all(coset_key(s, local) == key for s in local[:5])


def test_coset_table():
    report = verify_coset_table()
    assert report.failures == []
    assert report.passed
    assert report.table_matches == len(COSET_TABLE) == 20
    assert report.to_dict()["coset_count"] == 20


def test_coset_table_detects_duplicate_sequences():
    table = COSET_TABLE[:19] + (COSET_TABLE[0],)
    report = verify_coset_table(table)
    assert not report.passed
    assert any("同一个陪集" in f for f in report.failures)
