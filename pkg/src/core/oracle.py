"""
Brute-force oracle: explicit tensor-product evolution of up to three walkers.

Used only to validate the factorized observables of multiparticle and distance;
the joint grid grows like (2(2t+1))^n, so the size budget is enforced.
"""

import logging
from typing import Iterable, Optional, Sequence

import numpy as np

from src.config.settings import BRUTE_FORCE_MAX_N, BRUTE_FORCE_MAX_T
from src.core.entanglement import von_neumann_entropy
from src.core.multiparticle import check_pair, check_particle, require_coin, resolve_positions
from src.types.errors import ParticleIndexError, SizeBudgetError
from src.types.walks import DOWN, UP, CoinVector, JointDistribution, JointWave

logger = logging.getLogger(__name__)

SQRT2 = np.sqrt(2.0)


def _step_particle(amplitudes: np.ndarray, particle: int) -> np.ndarray:
    """One coin flip and shift of a single particle inside the joint grid."""
    axes = (2 * particle, 2 * particle + 1)
    front = np.moveaxis(amplitudes, axes, (0, 1))
    down, up = front[:, DOWN], front[:, UP]

    grown = np.zeros((front.shape[0] + 2, 2) + front.shape[2:], dtype=np.complex128)
    grown[2:, UP] = (up + down) / SQRT2
    grown[:-2, DOWN] = (up - down) / SQRT2
    return np.moveaxis(grown, (0, 1), axes)


def brute_force_state(
    coin: CoinVector, t: int, positions: Optional[Sequence[int]] = None
) -> JointWave:
    """
    Evolve the full n-particle state for t steps.

    Raises:
        SizeBudgetError: If n > BRUTE_FORCE_MAX_N or t > BRUTE_FORCE_MAX_T
    """
    n = coin.n
    if n > BRUTE_FORCE_MAX_N or t > BRUTE_FORCE_MAX_T:
        raise SizeBudgetError(
            f'Brute-force oracle is limited to n <= {BRUTE_FORCE_MAX_N} and '
            f't <= {BRUTE_FORCE_MAX_T}, got n={n}, t={t}'
        )
    if t < 0:
        raise ValueError(f'Step count must be non-negative, got {t}')

    origins = resolve_positions(n, positions)
    amplitudes = require_coin(coin).reshape((1, 2) * n).astype(np.complex128)
    for _ in range(t):
        for particle in range(n):
            amplitudes = _step_particle(amplitudes, particle)

    logger.debug(f'Brute-force state for n={n}, t={t}: {amplitudes.size} amplitudes')
    return JointWave(n, t, origins, amplitudes)


class BruteForceOracle:
    """Observables read directly off the full joint state."""

    def __init__(self, coin: CoinVector, t: int, positions: Optional[Sequence[int]] = None):
        self.state = brute_force_state(coin, t, positions)
        self.n = coin.n
        self.t = t
        self._probabilities = self.state.position_probabilities()

    def _sites(self, i: int) -> np.ndarray:
        return self.state.origins[i - 1] + np.arange(-self.t, self.t + 1)

    def _coordinate(self, i: int) -> np.ndarray:
        """Position of particle i broadcast over the n-dimensional probability grid."""
        shape = [1] * self.n
        shape[i - 1] = -1
        return self._sites(i).reshape(shape)

    def mean_x(self, i: int) -> float:
        check_particle(i, self.n)
        return float(np.sum(self._coordinate(i) * self._probabilities))

    def mean_x2(self, i: int) -> float:
        check_particle(i, self.n)
        return float(np.sum(self._coordinate(i) ** 2 * self._probabilities))

    def pair_moment(self, j: int, k: int) -> float:
        check_pair(j, k, self.n)
        return float(np.sum(self._coordinate(j) * self._coordinate(k) * self._probabilities))

    def mean_distance(self) -> float:
        """<sum_i (x_i - mean)^2> summed site by site."""
        coords = [self._coordinate(i) for i in range(1, self.n + 1)]
        centre = sum(coords) / self.n
        spread = sum((x - centre) ** 2 for x in coords)
        return float(np.sum(spread * self._probabilities))

    def joint_distribution(self, j: int, k: int) -> JointDistribution:
        check_pair(j, k, self.n)
        others = tuple(axis for axis in range(self.n) if axis not in (j - 1, k - 1))
        marginal = self._probabilities.sum(axis=others) if others else self._probabilities
        if j > k:
            marginal = marginal.T
        return JointDistribution((j, k), self._sites(j), self._sites(k), marginal)

    def reduced_coin_density(self, subset: Iterable[int]) -> np.ndarray:
        """Coin density of the subset with all positions and other coins traced out."""
        kept = self._proper_subset(subset)
        m = len(kept)
        coin_axes = [2 * (i - 1) + 1 for i in kept]
        front = np.moveaxis(self.state.amplitudes, coin_axes, list(range(m)))
        front = front.reshape(2**m, -1)
        return front @ front.conj().T

    def particle_cut_entropy(self, subset: Iterable[int]) -> float:
        """Entanglement (bits) between whole particles, position and coin together."""
        kept = self._proper_subset(subset)
        axes = [a for i in kept for a in (2 * (i - 1), 2 * (i - 1) + 1)]
        front = np.moveaxis(self.state.amplitudes, axes, list(range(len(axes))))
        rows = int(np.prod(front.shape[: len(axes)]))
        matrix = front.reshape(rows, -1)
        # both Gram matrices share the non-zero spectrum; diagonalize the smaller one
        if matrix.shape[0] > matrix.shape[1]:
            return von_neumann_entropy(matrix.conj().T @ matrix)
        return von_neumann_entropy(matrix @ matrix.conj().T)

    def _proper_subset(self, subset: Iterable[int]) -> list:
        kept = sorted(set(subset))
        if not kept or len(kept) == self.n:
            raise ParticleIndexError(
                f'Subset must be non-empty and proper, got {kept} for n={self.n}'
            )
        for i in kept:
            check_particle(i, self.n)
        return kept
