import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.config.settings import BRUTE_FORCE_MAX_T
from src.core import multiparticle as mp
from src.core.oracle import BruteForceOracle
from src.core.spectral import normalized_eigenstate
from src.core.symmetry import preserving_swaps
from src.core.walk import evolve
from src.types.errors import InvalidCoinError, ParticleIndexError
from src.types.walks import DOWN, UP, CoinVector
from tests.strategies import coin_vectors

S_UP = (1, 4, 6)
S_DOWN = (2, 3, 5, 7)


def bell(n: int = 2) -> CoinVector:
    amplitudes = np.zeros(2**n, dtype=np.complex128)
    amplitudes[0] = amplitudes[-1] = 1.0 / np.sqrt(2.0)
    return CoinVector(n, amplitudes)


def test_moment_table_matches_a_single_walker():
    t = 15
    table = mp.moment_table(t)
    for s in (DOWN, UP):
        probabilities = evolve(s, t).probabilities()
        offsets = np.arange(-t, t + 1)
        assert table.X[s, s].real == pytest.approx(np.sum(offsets * probabilities), abs=1e-12)
        assert table.X2[s, s].real == pytest.approx(np.sum(offsets**2 * probabilities), abs=1e-10)


def test_transfer_tensor_is_identity_at_zero_steps():
    T = mp.moment_table(0).T
    for c in (DOWN, UP):
        for s in (DOWN, UP):
            expected = 1.0 if c == s else 0.0
            assert T[c, c, s, s] == pytest.approx(expected)


def test_product_coin_reduces_to_single_walkers():
    t = 20
    coin = mp.product_coin([np.array([0.0, 1.0]), np.array([1.0, 0.0])])
    assert mp.mean_x2(1, coin, t) == pytest.approx(mp.moment_table(t).X2[UP, UP].real)
    assert mp.mean_x2(2, coin, t) == pytest.approx(mp.moment_table(t).X2[DOWN, DOWN].real)
    expected = mp.moment_table(t).X[UP, UP].real * mp.moment_table(t).X[DOWN, DOWN].real
    assert mp.pair_moment(1, 2, coin, t) == pytest.approx(expected, abs=1e-10)


def test_positions_shift_the_moments():
    coin = bell()
    t = 10
    base = mp.mean_x(1, coin, t)
    assert mp.mean_x(1, coin, t, positions=(3, -2)) == pytest.approx(base + 3)
    assert mp.mean_x(2, coin, t, positions=(3, -2)) == pytest.approx(mp.mean_x(2, coin, t) - 2)


@settings(max_examples=15)
@given(coin=coin_vectors(2), t=st.integers(min_value=0, max_value=BRUTE_FORCE_MAX_T))
def test_two_particle_moments_match_the_tensor_product_oracle(coin, t):
    oracle = BruteForceOracle(coin, t)
    for i in (1, 2):
        assert mp.mean_x(i, coin, t) == pytest.approx(oracle.mean_x(i), abs=1e-10)
        assert mp.mean_x2(i, coin, t) == pytest.approx(oracle.mean_x2(i), abs=1e-10)
    assert mp.pair_moment(1, 2, coin, t) == pytest.approx(oracle.pair_moment(1, 2), abs=1e-10)
    np.testing.assert_allclose(
        mp.joint_distribution(1, 2, coin, t).grid, oracle.joint_distribution(1, 2).grid, atol=1e-10
    )


@settings(max_examples=8)
@given(coin=coin_vectors(3), t=st.integers(min_value=0, max_value=BRUTE_FORCE_MAX_T))
def test_three_particle_joint_distribution_matches_the_oracle(coin, t):
    oracle = BruteForceOracle(coin, t, positions=(0, 1, -1))
    for j, k in ((1, 3), (3, 2)):
        factorized = mp.joint_distribution(j, k, coin, t, positions=(0, 1, -1))
        reference = oracle.joint_distribution(j, k)
        np.testing.assert_allclose(factorized.grid, reference.grid, atol=1e-10)
        np.testing.assert_array_equal(factorized.positions_j, reference.positions_j)


def test_joint_distribution_sums_to_one():
    joint = mp.joint_distribution(1, 2, bell(), 12)
    assert joint.grid.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(joint.grid >= 0.0)


def test_reduced_density_matches_the_oracle():
    coin = CoinVector(3, np.arange(1, 9) / np.linalg.norm(np.arange(1, 9)))
    t = 4
    oracle = BruteForceOracle(coin, t)
    for subset in ((1,), (2,), (1, 3), (2, 3)):
        factorized = mp.reduced_coin_density(coin, t, subset)
        np.testing.assert_allclose(factorized, oracle.reduced_coin_density(subset), atol=1e-12)


def test_reduced_density_at_zero_steps_is_the_coin_marginal():
    rho = mp.reduced_coin_density(bell(), 0, (1,))
    np.testing.assert_allclose(rho, np.eye(2) / 2, atol=1e-15)


def test_coin_entropy_grows_from_a_product_state():
    coin = mp.product_coin([np.array([0.0, 1.0]), np.array([0.0, 1.0])])
    series = mp.coin_entropy_series(coin, [0, 5], (2,))
    assert series[0] == pytest.approx(0.0, abs=1e-12)
    assert series[1] > series[0]


def test_coin_entropy_of_an_eigenstate_rises_then_oscillates():
    coin = normalized_eigenstate(7, 0b1001010)
    series = mp.coin_entropy_series(coin, range(0, 51), (2,))
    assert series[5] > series[0]
    tail = np.diff(series[5:])
    assert np.any(tail > 0) and np.any(tail < 0)


def test_full_particle_cut_entropy_is_time_invariant():
    coin = bell()
    initial = BruteForceOracle(coin, 0).particle_cut_entropy((1,))
    later = BruteForceOracle(coin, 6).particle_cut_entropy((1,))
    assert initial == pytest.approx(1.0, abs=1e-12)
    assert later == pytest.approx(initial, abs=1e-10)


def test_within_subgraph_moments_are_equal():
    coin = normalized_eigenstate(7, 0b1001010)
    squares, table = mp.all_moments(coin, 100)
    for group in (S_UP, S_DOWN):
        values = [squares[i - 1] for i in group]
        np.testing.assert_allclose(values, values[0], rtol=0, atol=1e-10 * max(values))
    assert table[0, 3] == pytest.approx(table[0, 5], rel=1e-10, abs=1e-8)
    assert table[1, 2] == pytest.approx(table[4, 6], rel=1e-10, abs=1e-8)
    assert table[0, 1] == pytest.approx(table[5, 6], rel=1e-10, abs=1e-8)


@pytest.mark.parametrize('n', [3, 4, 5])
def test_preserved_swaps_leave_joint_distributions_symmetric(n):
    t = 6
    for k in range(0, 2**n, 2):
        coin = normalized_eigenstate(n, k)
        for i, j in preserving_swaps(n, k):
            grid = mp.joint_distribution(i, j, coin, t).grid
            np.testing.assert_allclose(grid, grid.T, atol=1e-12)
            for m in set(range(1, n + 1)) - {i, j}:
                np.testing.assert_allclose(
                    mp.joint_distribution(i, m, coin, t).grid,
                    mp.joint_distribution(j, m, coin, t).grid,
                    atol=1e-12,
                )


def test_pair_moments_are_positive_within_and_negative_across_subgraphs():
    _, table = mp.all_moments(normalized_eigenstate(7, 0b1001010), 100)
    assert table[0, 3] > 0 and table[1, 2] > 0
    assert table[0, 1] < 0 and table[3, 6] < 0


def test_cross_subgraph_pair_separates_in_sign():
    coin = normalized_eigenstate(7, 0b1001010)
    joint = mp.joint_distribution(1, 2, coin, 30)
    assert joint.sign_pattern_mass(-1, 1) > joint.sign_pattern_mass(1, -1)


def test_coin_expectation_takes_one_based_particles():
    coin = mp.product_coin([np.array([0.0, 1.0]), np.array([1.0, 0.0])])
    z = np.diag([-1.0, 1.0])
    assert mp.coin_expectation(coin, [(1, z)]) == pytest.approx(1.0)
    assert mp.coin_expectation(coin, [(2, z)]) == pytest.approx(-1.0)
    with pytest.raises(ParticleIndexError):
        mp.coin_expectation(coin, [(3, z)])


@pytest.mark.parametrize('j, k', [(1, 1), (0, 2), (1, 3)])
def test_bad_pairs_are_rejected(j, k):
    with pytest.raises(ParticleIndexError):
        mp.pair_moment(j, k, bell(), 3)


@pytest.mark.parametrize('subset', [(), (1, 2), (3,)])
def test_bad_subsets_are_rejected(subset):
    with pytest.raises(ParticleIndexError):
        mp.reduced_coin_density(bell(), 2, subset)


def test_unnormalized_coins_are_rejected():
    with pytest.raises(InvalidCoinError):
        mp.mean_x2(1, CoinVector(2, np.ones(4)), 3)


def test_position_count_must_match():
    with pytest.raises(ValueError):
        mp.mean_x(1, bell(), 3, positions=(0, 0, 0))
