"""
Value types shared by the single- and multi-particle walk code.

Coin convention: index 0 is down, index 1 is up. Multi-particle coin labels
are integers xi whose most significant of n bits is the coin of particle 1.
"""

from dataclasses import dataclass, field
from typing import Literal, Tuple, Union

import numpy as np

DOWN = 0
UP = 1

CoinLabel = Literal[0, 1]
CoinLike = Union[int, str, np.ndarray, Tuple[complex, complex]]


def _freeze(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class WalkerWave:
    """Single-particle amplitudes psi(origin + o, c) for o in [-steps, steps]."""

    origin: int
    steps: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if amplitudes.shape != (2 * self.steps + 1, 2):
            raise ValueError(
                f'Amplitude grid must have shape {(2 * self.steps + 1, 2)}, '
                f'got {amplitudes.shape}'
            )
        object.__setattr__(self, 'amplitudes', _freeze(amplitudes))

    @property
    def offsets(self) -> np.ndarray:
        return np.arange(-self.steps, self.steps + 1)

    @property
    def positions(self) -> np.ndarray:
        return self.origin + self.offsets

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def amplitude(self, x: int, coin: int) -> complex:
        """Amplitude at absolute site x; zero outside the light cone."""
        offset = x - self.origin
        if abs(offset) > self.steps:
            return 0j
        return complex(self.amplitudes[offset + self.steps, coin])

    def probabilities(self) -> np.ndarray:
        """Site probabilities summed over the coin."""
        return np.sum(np.abs(self.amplitudes) ** 2, axis=1)


@dataclass(frozen=True)
class CoinEigenSystem:
    """Eigenpairs of the momentum-space walk operator U_K.

    eigenvectors[:, j] is d_{j+1}(K) in the (down, up) basis.
    """

    momentum: float
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        d = self.eigenvectors
        return sum(
            self.eigenvalues[j] * np.outer(d[:, j], d[:, j].conj()) for j in range(2)
        )


@dataclass(frozen=True)
class CoinVector:
    """Joint coin amplitudes a_xi of n particles."""

    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amplitudes = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if self.n < 1:
            raise ValueError(f'Particle count must be >= 1, got {self.n}')
        if amplitudes.size != 2**self.n:
            raise ValueError(
                f'Coin vector for n={self.n} needs {2**self.n} amplitudes, got {amplitudes.size}'
            )
        object.__setattr__(self, 'amplitudes', _freeze(amplitudes))

    @classmethod
    def basis(cls, n: int, xi: int) -> 'CoinVector':
        amplitudes = np.zeros(2**n, dtype=np.complex128)
        amplitudes[xi] = 1.0
        return cls(n, amplitudes)

    def as_tensor(self) -> np.ndarray:
        """View with one axis per particle, particle 1 first."""
        return self.amplitudes.reshape((2,) * self.n)

    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


@dataclass(frozen=True)
class MomentTable:
    """Exact finite-t single-particle moments between the evolved kets of |0,s>.

    X[s', s] = <U^t(0,s')| x |U^t(0,s)>, X2 likewise for x^2 and
    T[c', c, s', s] = sum_x conj(psi_s'(x, c')) psi_s(x, c).
    """

    t: int
    X: np.ndarray
    X2: np.ndarray
    T: np.ndarray

    def __post_init__(self):
        for name in ('X', 'X2', 'T'):
            object.__setattr__(self, name, _freeze(getattr(self, name)))

    def shifted(self, x0: int) -> Tuple[np.ndarray, np.ndarray]:
        """Position moments of a walker that starts at x0 instead of the origin."""
        eye = np.eye(2)
        return self.X + x0 * eye, self.X2 + 2 * x0 * self.X + x0**2 * eye


@dataclass(frozen=True)
class JointDistribution:
    """P(x_j = a, x_k = b) on the light-cone windows of particles j and k."""

    pair: Tuple[int, int]
    positions_j: np.ndarray
    positions_k: np.ndarray
    grid: np.ndarray

    def __post_init__(self):
        for name in ('positions_j', 'positions_k', 'grid'):
            object.__setattr__(self, name, _freeze(getattr(self, name)))

    def sign_pattern_mass(self, sign_j: int, sign_k: int) -> float:
        """Probability that x_j and x_k carry the given strict signs."""
        rows = np.sign(self.positions_j) == sign_j
        cols = np.sign(self.positions_k) == sign_k
        return float(self.grid[np.ix_(rows, cols)].sum())


@dataclass(frozen=True)
class DistanceCurve:
    """Samples of <D> against t together with the fitted t^2 coefficient."""

    n: int
    samples: Tuple[Tuple[int, float], ...]
    fitted_c2: float = field(default=float('nan'))

    @property
    def steps(self) -> np.ndarray:
        return np.array([t for t, _ in self.samples])

    @property
    def values(self) -> np.ndarray:
        return np.array([d for _, d in self.samples])


@dataclass(frozen=True)
class JointWave:
    """Full n-particle amplitudes with axes (x_1, c_1, ..., x_n, c_n).

    Position axis i covers origins[i] + [-steps, steps].
    """

    n: int
    steps: int
    origins: Tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'amplitudes', _freeze(self.amplitudes))

    def position_probabilities(self) -> np.ndarray:
        """P(x_1, ..., x_n) with every coin summed out."""
        weights = np.abs(self.amplitudes) ** 2
        return weights.sum(axis=tuple(range(1, 2 * self.n, 2)))

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))
