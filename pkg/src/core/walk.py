"""
Single-particle Hadamard walk.

Direct stepping on the lattice, the momentum-space operator U_K with its
eigen-decomposition, and momentum-space evolution used to cross-check the
direct path.
"""

import logging
from typing import Optional, Tuple, Union

import numpy as np

from src.config.settings import COIN_NORM_TOL, NORM_TOL, QUAD_ABS_TOL
from src.types.errors import InvalidCoinError, InvariantViolation
from src.types.walks import DOWN, UP, CoinEigenSystem, CoinLike, WalkerWave
from src.utils.quadrature import complex_quad

logger = logging.getLogger(__name__)

SQRT2 = np.sqrt(2.0)

_COIN_NAMES = {
    'up': UP,
    'u': UP,
    '↑': UP,
    '1': UP,
    'down': DOWN,
    'd': DOWN,
    '↓': DOWN,
    '0': DOWN,
}


def hadamard() -> np.ndarray:
    """Hadamard coin in the (down, up) basis: up -> (up + down)/√2, down -> (up - down)/√2."""
    return np.array([[-1.0, 1.0], [1.0, 1.0]], dtype=np.complex128) / SQRT2


def momentum_operator(momentum: float) -> np.ndarray:
    """U_K = (e^{-iK}|up><up| + e^{iK}|down><down|) H."""
    phases = np.array([np.exp(1j * momentum), np.exp(-1j * momentum)])
    return phases[:, None] * hadamard()


def as_coin_vector(coin: CoinLike) -> np.ndarray:
    """
    Normalize the accepted coin spellings to a complex (down, up) vector.

    Args:
        coin: 0/1, 'up'/'down' (or arrows), or two complex amplitudes (down, up)

    Returns:
        np.ndarray: Unit-norm complex vector of length 2

    Raises:
        InvalidCoinError: If the label is unknown, the vector has the wrong size
            or is not normalized within COIN_NORM_TOL
    """
    if isinstance(coin, str):
        label = _COIN_NAMES.get(coin.strip().lower())
        if label is None:
            raise InvalidCoinError(f'Unknown coin label: {coin!r}')
        coin = label
    if isinstance(coin, (int, np.integer)) and not isinstance(coin, bool):
        if coin not in (DOWN, UP):
            raise InvalidCoinError(f'Coin label must be 0 (down) or 1 (up), got {coin}')
        vector = np.zeros(2, dtype=np.complex128)
        vector[coin] = 1.0
        return vector

    vector = np.asarray(coin, dtype=np.complex128).reshape(-1)
    if vector.size != 2:
        raise InvalidCoinError(f'Single-particle coin needs 2 amplitudes, got {vector.size}')
    norm = float(np.vdot(vector, vector).real)
    if abs(norm - 1.0) > COIN_NORM_TOL:
        raise InvalidCoinError(f'Coin vector is not normalized (|a|^2 = {norm:.12g})')
    return vector


def initial_wave(coin: CoinLike, origin: int = 0) -> WalkerWave:
    return WalkerWave(origin, 0, as_coin_vector(coin).reshape(1, 2))


def step(wave: WalkerWave) -> WalkerWave:
    """Apply one coin flip followed by the coin-conditioned shift."""
    down = wave.amplitudes[:, DOWN]
    up = wave.amplitudes[:, UP]

    grown = np.zeros((wave.amplitudes.shape[0] + 2, 2), dtype=np.complex128)
    # up moves one site right, down one site left; the window grows by one on each side
    grown[2:, UP] = (up + down) / SQRT2
    grown[:-2, DOWN] = (up - down) / SQRT2
    return WalkerWave(wave.origin, wave.steps + 1, grown)


def evolve(coin: CoinLike, t: int, origin: int = 0) -> WalkerWave:
    """
    Evolve |origin, coin> for t steps by direct stepping.

    Raises:
        ValueError: If t is negative
        InvalidCoinError: If the coin is malformed or not normalized
    """
    if t < 0:
        raise ValueError(f'Step count must be non-negative, got {t}')

    wave = initial_wave(coin, origin)
    for _ in range(t):
        wave = step(wave)
    logger.debug(f'Evolved single walker for {t} steps ({wave.amplitudes.shape[0]} sites)')
    return wave


def validate_wave(wave: WalkerWave) -> None:
    """
    Check norm and parity of a walker wave.

    Raises:
        InvariantViolation: On norm drift above NORM_TOL or amplitude on a forbidden site
    """
    drift = abs(wave.norm_squared() - 1.0)
    if drift > NORM_TOL:
        raise InvariantViolation(f'Norm drift {drift:.3e} after {wave.steps} steps')

    forbidden = (wave.offsets + wave.steps) % 2 == 1
    if np.any(wave.amplitudes[forbidden] != 0):
        raise InvariantViolation(f'Non-zero amplitude on odd-parity site after {wave.steps} steps')


def position_distribution(wave: WalkerWave) -> np.ndarray:
    """
    Per-site probabilities of a walker wave.

    Returns:
        np.ndarray: Rows (x, P_up, P_down, P_total) for every site in the window
    """
    weights = np.abs(wave.amplitudes) ** 2
    return np.column_stack(
        [wave.positions, weights[:, UP], weights[:, DOWN], weights.sum(axis=1)]
    )


def _half_norms(momentum: float) -> Tuple[float, float]:
    """Return 1/sqrt(2 N(K)) and 1/sqrt(2 N(pi - K))."""
    cos_k = np.cos(momentum)
    root = np.sqrt(1.0 + cos_k**2)
    # N(K) = root (root + cos K), N(pi - K) = root (root - cos K); root > |cos K|
    return 1.0 / np.sqrt(2.0 * root * (root + cos_k)), 1.0 / np.sqrt(2.0 * root * (root - cos_k))


def coin_eigensystem(momentum: float) -> CoinEigenSystem:
    """
    Eigenpairs of U_K.

    lambda_{1,2} = -/+ sqrt(3 + cos 2K)/2 - i sin K/√2, with the positive real root.
    """
    real_part = 0.5 * np.sqrt(3.0 + np.cos(2.0 * momentum))
    imag_part = np.sin(momentum) / SQRT2
    eigenvalues = np.array([-real_part - 1j * imag_part, real_part - 1j * imag_part])

    alpha, beta = _half_norms(momentum)
    phase = np.exp(-1j * momentum)
    eigenvectors = np.array(
        [
            [beta, alpha],
            [-phase * alpha, phase * beta],
        ],
        dtype=np.complex128,
    )
    return CoinEigenSystem(float(momentum), eigenvalues, eigenvectors)


def angular_frequency(momentum: float) -> float:
    """omega(K) with lambda_2 = e^{-i omega}; lambda_1 = -e^{i omega}."""
    return float(np.arctan2(np.sin(momentum) / SQRT2, 0.5 * np.sqrt(3.0 + np.cos(2.0 * momentum))))


def frequency_derivatives(momentum: float) -> np.ndarray:
    """
    First and second K-derivatives of the eigenphases.

    Returns:
        np.ndarray: Shape (2, 2); row d holds (omega_d', omega_d'') where lambda_d = e^{-i omega_d}
    """
    cos_k, sin_k = np.cos(momentum), np.sin(momentum)
    r = 1.0 / np.sqrt(1.0 + cos_k**2)
    first = cos_k * r
    second = -sin_k * r**3
    return np.array([[-first, -second], [first, second]])


def projector_derivatives(momentum: float) -> np.ndarray:
    """
    Spectral projectors of U_K and their first two K-derivatives.

    Pi_2 = (I + G)/2, Pi_1 = (I - G)/2 with the Hermitian involution
    G = (1 + cos^2 K)^{-1/2} [[-cos K, e^{iK}], [e^{-iK}, cos K]] in the (down, up) basis.

    Returns:
        np.ndarray: Shape (3, 2, 2, 2) indexed [order, d, row, col], d = 0 for Pi_1
    """
    cos_k, sin_k = np.cos(momentum), np.sin(momentum)
    e = np.exp(1j * momentum)
    r = 1.0 / np.sqrt(1.0 + cos_k**2)
    dr = cos_k * sin_k * r**3
    ddr = (cos_k**2 - sin_k**2) * r**3 + 3.0 * cos_k**2 * sin_k**2 * r**5

    g = np.array([[-cos_k, e], [np.conj(e), cos_k]])
    dg = np.array([[sin_k, 1j * e], [-1j * np.conj(e), -sin_k]])
    ddg = np.array([[cos_k, -e], [-np.conj(e), -cos_k]])

    involution = np.stack([r * g, dr * g + r * dg, ddr * g + 2.0 * dr * dg + r * ddg])
    identity = np.stack([np.eye(2), np.zeros((2, 2)), np.zeros((2, 2))])

    result = np.empty((3, 2, 2, 2), dtype=np.complex128)
    result[:, 0] = 0.5 * (identity - involution)
    result[:, 1] = 0.5 * (identity + involution)
    return result


def projectors(momentum: float) -> np.ndarray:
    """Pi_1(K), Pi_2(K) stacked along the first axis."""
    return projector_derivatives(momentum)[0]


def evolve_via_momentum(
    coin: CoinLike,
    t: int,
    x: int,
    coin_out: Optional[int] = None,
    epsabs: float = QUAD_ABS_TOL,
) -> Union[complex, np.ndarray]:
    """
    Amplitude <x, c| U^t |0, coin> by quadrature over the Brillouin zone.

    Args:
        coin: Initial coin of the walker at the origin
        t: Step count
        x: Lattice site
        coin_out: Coin c of the amplitude; both coins are returned when omitted
        epsabs: Absolute tolerance handed to the quadrature

    Returns:
        complex amplitude, or (down, up) amplitudes when coin_out is None

    Raises:
        QuadratureError: If the adaptive rule fails to reach the tolerance
    """
    if t < 0:
        raise ValueError(f'Step count must be non-negative, got {t}')
    vector = as_coin_vector(coin)
    if abs(x) > t or (x + t) % 2:
        # outside the light cone or on the wrong sublattice
        zero = np.zeros(2, dtype=np.complex128)
        return 0j if coin_out is not None else zero

    def integrand(momentum: float, c: int) -> complex:
        system = coin_eigensystem(momentum)
        d = system.eigenvectors
        evolved = d @ (system.eigenvalues**t * (d.conj().T @ vector))
        return np.exp(1j * momentum * x) * evolved[c] / (2.0 * np.pi)

    coins = (DOWN, UP) if coin_out is None else (coin_out,)
    values = [
        complex_quad(
            lambda k, c=c: integrand(k, c),
            -np.pi,
            np.pi,
            epsabs=epsabs,
            label=f'amplitude(t={t}, x={x}, c={c})',
        )
        for c in coins
    ]
    if coin_out is not None:
        return values[0]
    return np.array(values)
