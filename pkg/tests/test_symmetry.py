from itertools import combinations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.core import spectral, symmetry
from src.types.errors import ParticleIndexError
from tests.strategies import coin_vectors

FIGURE_K = 0b1001010
RELABELED_K = 0b0110100


def test_partition_of_the_seven_particle_eigenstate():
    split = symmetry.partition(7, FIGURE_K)
    assert split.up == (1, 4, 6)
    assert split.down == (2, 3, 5, 7)
    assert split.p == 9
    assert symmetry.count_preserving_swaps(7, FIGURE_K) == 9


def test_odd_k_shares_the_partition_of_k_minus_one():
    assert symmetry.partition(7, FIGURE_K + 1).up == symmetry.partition(7, FIGURE_K).up


@pytest.mark.parametrize('n', range(2, 7))
def test_preserving_swaps_follow_the_subgraphs(n):
    for k in range(2**n):
        split = symmetry.partition(n, k)
        preserved = set(symmetry.preserving_swaps(n, k))
        assert len(preserved) == split.p
        for i, j in combinations(range(1, n + 1), 2):
            assert ((i, j) in preserved) == symmetry.lemma_predicts_preserved(n, k, i, j)
        assert symmetry.mu_from_swaps(n, k) == spectral.mu(n, k)


@pytest.mark.slow
@pytest.mark.parametrize('n', [7, 8])
def test_swap_count_relation_for_larger_n(n):
    for k in range(0, 2**n, 2):
        symmetry.check_mu_relation(n, k)
        assert symmetry.count_preserving_swaps(n, k) == symmetry.partition(n, k).p


@pytest.mark.parametrize('n', [3, 4, 5])
def test_no_eigenstate_is_antisymmetric_beyond_two_particles(n):
    assert not any(symmetry.has_antisymmetric_swap(n, k) for k in range(2**n))


@pytest.mark.parametrize('n', [4, 5, 6])
def test_more_preserving_swaps_mean_a_smaller_eigenvalue(n):
    pairs = sorted(
        {(symmetry.partition(n, k).p, spectral.eta(n, k)) for k in range(0, 2**n, 2)}
    )
    etas = [eta for _, eta in pairs]
    assert all(a > b for a, b in zip(etas, etas[1:]))


def test_relabeling_maps_one_eigenstate_onto_the_other():
    permutation = symmetry.relabeling_permutation(7, FIGURE_K, RELABELED_K)
    moved = symmetry.relabel(spectral.eigenvector_P(7, FIGURE_K), permutation)
    np.testing.assert_array_equal(moved, spectral.eigenvector_P(7, RELABELED_K))
    value = symmetry.check_relabeling(7, FIGURE_K, RELABELED_K)
    assert value == pytest.approx(spectral.c2(spectral.normalized_eigenstate(7, RELABELED_K)))


def test_relabeling_needs_equal_subgraph_sizes():
    with pytest.raises(ValueError):
        symmetry.relabeling_permutation(7, FIGURE_K, 0b0000010)


@given(coin=coin_vectors(3), pair=st.sampled_from([(1, 2), (1, 3), (2, 3)]))
def test_c2_is_invariant_under_particle_swaps(coin, pair):
    swapped = symmetry.permuted_coin(coin, *pair)
    assert spectral.c2(swapped) == pytest.approx(spectral.c2(coin), abs=1e-12)


def test_transposition_is_an_involution():
    vector = np.arange(16.0)
    once = symmetry.apply_transposition(vector, 1, 3)
    np.testing.assert_array_equal(symmetry.apply_transposition(once, 1, 3), vector)
    assert not np.array_equal(once, vector)


@pytest.mark.parametrize('i, j', [(2, 2), (0, 1), (1, 5)])
def test_bad_transpositions_are_rejected(i, j):
    with pytest.raises(ParticleIndexError):
        symmetry.apply_transposition(np.zeros(16), i, j)


def test_vector_length_must_be_a_power_of_two():
    with pytest.raises(ValueError):
        symmetry.apply_transposition(np.zeros(6), 1, 2)


def test_partition_rejects_out_of_range_k():
    with pytest.raises(ValueError):
        symmetry.partition(3, 8)
