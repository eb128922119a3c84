import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crpmap import (
    CapacityError,
    InvalidPartitionError,
    Partition,
    bell_number,
    crp_log_prior,
    enumerate_partitions,
)
from oracles import bell_binomial, crp_prior_direct, set_partitions

label_lists = st.lists(st.integers(min_value=0, max_value=6), min_size=1, max_size=12)


def test_bell_numbers_match_binomial_recurrence():
    for n in range(1, 15):
        assert bell_number(n) == bell_binomial(n)


@pytest.mark.parametrize("n", range(1, 10))
def test_enumeration_count_and_uniqueness(n):
    parts = list(enumerate_partitions(n))
    assert len(parts) == bell_binomial(n)
    assert len({p.labels for p in parts}) == len(parts)


def test_enumeration_matches_blockwise_recursion():
    # same partitions found by an unrelated recursive construction
    for n in range(1, 8):
        via_blocks = {
            Partition.from_blocks(blocks, n).labels
            for blocks in set_partitions(list(range(n)))
        }
        via_rgs = {p.labels for p in enumerate_partitions(n)}
        assert via_blocks == via_rgs


def test_enumeration_is_lexicographic():
    parts = [p.labels for p in enumerate_partitions(6)]
    assert parts == sorted(parts)


def test_enumeration_guard():
    with pytest.raises(CapacityError):
        next(enumerate_partitions(14))
    with pytest.raises(InvalidPartitionError):
        next(enumerate_partitions(0))


def test_rgs_validation():
    Partition((0, 1, 0, 2))
    with pytest.raises(InvalidPartitionError):
        Partition((1, 0))  # first label must be 0
    with pytest.raises(InvalidPartitionError):
        Partition((0, 2))  # skips label 1
    with pytest.raises(InvalidPartitionError):
        Partition(())


def test_from_blocks_validation():
    p = Partition.from_blocks([[2, 0], [1]])
    assert p.blocks == ((0, 2), (1,))
    with pytest.raises(InvalidPartitionError):
        Partition.from_blocks([[0, 1], [1, 2]])
    with pytest.raises(InvalidPartitionError):
        Partition.from_blocks([[0], [2]])
    with pytest.raises(InvalidPartitionError):
        Partition.from_blocks([[0], []])


def test_named_constructors():
    assert Partition.one_block(4).labels == (0, 0, 0, 0)
    assert Partition.singletons(3).labels == (0, 1, 2)
    assert Partition.one_block(4).n_blocks == 1
    assert Partition.singletons(3).n_blocks == 3


@given(label_lists)
def test_from_labels_canonical_and_idempotent(raw):
    p = Partition.from_labels(raw)
    # canonical: valid RGS, same grouping as the input labels
    assert Partition(p.labels).labels == p.labels
    assert Partition.from_labels(p.labels).labels == p.labels
    for i in range(len(raw)):
        for j in range(len(raw)):
            assert (raw[i] == raw[j]) == (p.labels[i] == p.labels[j])


@given(label_lists, st.randoms(use_true_random=False))
def test_permuted_preserves_blocks_as_sets(raw, rnd):
    p = Partition.from_labels(raw)
    perm = list(range(p.n))
    rnd.shuffle(perm)
    q = p.permuted(perm)
    moved = {frozenset(perm[i] for i in b) for b in p.blocks}
    assert {frozenset(b) for b in q.blocks} == moved


@given(label_lists)
def test_sizes_and_blocks_consistent(raw):
    p = Partition.from_labels(raw)
    assert sum(p.block_sizes) == p.n
    assert tuple(len(b) for b in p.blocks) == p.block_sizes
    assert sorted(i for b in p.blocks for i in b) == list(range(p.n))


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_crp_prior_matches_direct_formula(alpha):
    for part in enumerate_partitions(6):
        direct = crp_prior_direct([list(b) for b in part.blocks], alpha)
        assert crp_log_prior(part, alpha) == pytest.approx(math.log(direct), abs=1e-12)


@settings(max_examples=40)
@given(st.integers(min_value=1, max_value=7), st.sampled_from([0.5, 1.0, 2.0]))
def test_crp_prior_invariant_under_item_permutation(n, alpha):
    # exchangeability: the prior depends only on the block size multiset
    import numpy as np

    rng = np.random.default_rng(n)
    for part in enumerate_partitions(n):
        perm = rng.permutation(n)
        assert crp_log_prior(part.permuted(list(perm)), alpha) == pytest.approx(
            crp_log_prior(part, alpha), abs=1e-12
        )
