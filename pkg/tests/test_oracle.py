import numpy as np
import pytest

from src.config.settings import BRUTE_FORCE_MAX_N, BRUTE_FORCE_MAX_T
from src.core.multiparticle import product_coin
from src.core.oracle import BruteForceOracle, brute_force_state
from src.core.walk import evolve
from src.types.errors import ParticleIndexError, SizeBudgetError
from src.types.walks import CoinVector


def test_joint_state_stays_normalized():
    coin = CoinVector(3, np.ones(8) / np.sqrt(8.0))
    state = brute_force_state(coin, 7)
    assert state.norm_squared() == pytest.approx(1.0, abs=1e-12)
    assert state.amplitudes.shape == (15, 2) * 3


def test_single_particle_marginal_matches_the_walker():
    coin = product_coin([np.array([0.0, 1.0]), np.array([1.0, 0.0])])
    state = brute_force_state(coin, 6)
    marginal = state.position_probabilities().sum(axis=1)
    np.testing.assert_allclose(marginal, evolve('up', 6).probabilities(), atol=1e-14)


def test_origins_are_carried():
    coin = product_coin([np.array([1.0, 0.0])] * 2)
    oracle = BruteForceOracle(coin, 2, positions=(4, -1))
    single = evolve('down', 2).probabilities() @ np.arange(-2, 3)
    assert oracle.mean_x(1) == pytest.approx(single + 4)
    assert oracle.mean_x(2) == pytest.approx(single - 1)


@pytest.mark.parametrize('n, t', [(BRUTE_FORCE_MAX_N + 1, 1), (2, BRUTE_FORCE_MAX_T + 1)])
def test_size_budget_is_enforced(n, t):
    coin = CoinVector.basis(n, 0)
    with pytest.raises(SizeBudgetError):
        brute_force_state(coin, t)


def test_particle_cut_needs_a_proper_subset():
    oracle = BruteForceOracle(CoinVector.basis(2, 0), 2)
    with pytest.raises(ParticleIndexError):
        oracle.particle_cut_entropy((1, 2))
