"""
Observables of n non-interacting walkers whose coins start entangled.

The initial state is a product of position kets times an arbitrary joint coin
vector. Because the evolved kets of |x, down> and |x, up> stay orthonormal,
every observable reduces to 2x2 single-particle moments applied to the coin
tensor, so the (2(2t+1))^n joint state is never built here.
"""

import logging
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.config.settings import COIN_NORM_TOL, OBSERVABLE_IMAG_TOL
from src.core.entanglement import von_neumann_entropy
from src.core.walk import evolve
from src.types.errors import InvalidCoinError, InvariantViolation, ParticleIndexError
from src.types.walks import DOWN, UP, CoinVector, JointDistribution, MomentTable

logger = logging.getLogger(__name__)

RESIDUE_WARN_TOL = 1e-12


@lru_cache(maxsize=64)
def _evolved_pair(t: int) -> np.ndarray:
    """Amplitudes of U^t|0,down> and U^t|0,up>, shape (2 [s], 2t+1 [x], 2 [c])."""
    waves = [evolve(DOWN, t), evolve(UP, t)]
    stacked = np.stack([wave.amplitudes for wave in waves])
    stacked.setflags(write=False)
    return stacked


def site_overlaps(t: int) -> np.ndarray:
    """
    Coin-summed overlaps of the two evolved kets on every site.

    Returns:
        np.ndarray: W[x, s', s] = sum_c conj(psi_s'(x, c)) psi_s(x, c) over offsets -t..t
    """
    psi = _evolved_pair(t)
    return np.einsum('pxc,qxc->xpq', psi.conj(), psi)


@lru_cache(maxsize=64)
def moment_table(t: int) -> MomentTable:
    """
    Exact position moments and the coin transfer tensor after t steps.

    Raises:
        ValueError: If t is negative
    """
    if t < 0:
        raise ValueError(f'Step count must be non-negative, got {t}')

    psi = _evolved_pair(t)
    offsets = np.arange(-t, t + 1)
    X = np.einsum('pxc,x,qxc->pq', psi.conj(), offsets, psi)
    X2 = np.einsum('pxc,x,qxc->pq', psi.conj(), offsets**2, psi)
    T = np.einsum('pxa,qxb->abpq', psi.conj(), psi)
    logger.debug(f'Moment table for t={t} from {offsets.size} sites')
    return MomentTable(t, X, X2, T)


def require_coin(coin: CoinVector) -> np.ndarray:
    """Coin tensor of a normalized coin vector, one axis per particle."""
    norm = coin.norm_squared()
    if abs(norm - 1.0) > COIN_NORM_TOL:
        raise InvalidCoinError(f'Coin vector is not normalized (|a|^2 = {norm:.12g})')
    return coin.as_tensor()


def resolve_positions(n: int, positions: Optional[Sequence[int]]) -> Tuple[int, ...]:
    if positions is None:
        return (0,) * n
    positions = tuple(int(x) for x in positions)
    if len(positions) != n:
        raise ValueError(f'Expected {n} initial positions, got {len(positions)}')
    return positions


def check_particle(i: int, n: int) -> None:
    if not 1 <= i <= n:
        raise ParticleIndexError(f'Particle index {i} outside 1..{n}')


def check_pair(j: int, k: int, n: int) -> None:
    check_particle(j, n)
    check_particle(k, n)
    if j == k:
        raise ParticleIndexError(f'Pair needs two distinct particles, got ({j}, {k})')


def real_observable(value: complex, label: str) -> float:
    """Drop the imaginary residue of an observable that must be real."""
    residue = abs(complex(value).imag)
    if residue > OBSERVABLE_IMAG_TOL:
        raise InvariantViolation(f'{label} has imaginary part {residue:.3e}')
    if residue > RESIDUE_WARN_TOL:
        logger.warning(f'Discarding imaginary residue {residue:.3e} of {label}')
    return float(complex(value).real)


def _apply(operator: np.ndarray, tensor: np.ndarray, axis: int) -> np.ndarray:
    """Act with a 2x2 operator on one particle axis of the coin tensor."""
    moved = np.tensordot(operator, tensor, axes=([1], [axis]))
    return np.moveaxis(moved, 0, axis)


def _expectation(tensor: np.ndarray, operators: Iterable[Tuple[int, np.ndarray]]) -> complex:
    result = tensor
    for axis, operator in operators:
        result = _apply(operator, result, axis)
    return complex(np.vdot(tensor, result))


def coin_expectation(coin: CoinVector, operators: Iterable[Tuple[int, np.ndarray]]) -> complex:
    """
    <a| O_1 ... O_m |a> for 2x2 operators acting on the given particles.

    Args:
        coin: Normalized joint coin vector
        operators: Pairs (particle index, 2x2 operator), particle indices 1-based
    """
    tensor = require_coin(coin)
    placed = []
    for i, operator in operators:
        check_particle(i, coin.n)
        placed.append((i - 1, np.asarray(operator)))
    return _expectation(tensor, placed)


def mean_x(i: int, coin: CoinVector, t: int, positions: Optional[Sequence[int]] = None) -> float:
    """<x_i> after t steps."""
    check_particle(i, coin.n)
    tensor = require_coin(coin)
    x0 = resolve_positions(coin.n, positions)[i - 1]
    X, _ = moment_table(t).shifted(x0)
    return real_observable(_expectation(tensor, [(i - 1, X)]), f'<x_{i}>')


def mean_x2(i: int, coin: CoinVector, t: int, positions: Optional[Sequence[int]] = None) -> float:
    """<x_i^2> after t steps."""
    check_particle(i, coin.n)
    tensor = require_coin(coin)
    x0 = resolve_positions(coin.n, positions)[i - 1]
    _, X2 = moment_table(t).shifted(x0)
    return real_observable(_expectation(tensor, [(i - 1, X2)]), f'<x_{i}^2>')


def pair_moment(
    j: int, k: int, coin: CoinVector, t: int, positions: Optional[Sequence[int]] = None
) -> float:
    """
    <x_j x_k> after t steps.

    Raises:
        ParticleIndexError: If j == k or either index is out of range
    """
    check_pair(j, k, coin.n)
    tensor = require_coin(coin)
    starts = resolve_positions(coin.n, positions)
    table = moment_table(t)
    X_j, _ = table.shifted(starts[j - 1])
    X_k, _ = table.shifted(starts[k - 1])
    value = _expectation(tensor, [(j - 1, X_j), (k - 1, X_k)])
    return real_observable(value, f'<x_{j} x_{k}>')


def all_moments(
    coin: CoinVector, t: int, positions: Optional[Sequence[int]] = None
) -> Tuple[List[float], np.ndarray]:
    """
    Every <x_i^2> and the symmetric table of <x_j x_k>.

    Returns:
        Tuple of per-particle second moments and an n x n array whose diagonal
        repeats <x_i^2> and whose off-diagonal entries are pair moments
    """
    n = coin.n
    squares = [mean_x2(i, coin, t, positions) for i in range(1, n + 1)]
    table = np.diag(squares)
    for j in range(1, n + 1):
        for k in range(j + 1, n + 1):
            table[j - 1, k - 1] = table[k - 1, j - 1] = pair_moment(j, k, coin, t, positions)
    return squares, table


def joint_distribution(
    j: int, k: int, coin: CoinVector, t: int, positions: Optional[Sequence[int]] = None
) -> JointDistribution:
    """
    Two-particle position distribution P(x_j = a, x_k = b).

    Raises:
        ParticleIndexError: If j == k or either index is out of range
    """
    check_pair(j, k, coin.n)
    tensor = require_coin(coin)
    starts = resolve_positions(coin.n, positions)

    paired = np.moveaxis(tensor, [j - 1, k - 1], [0, 1]).reshape(2, 2, -1)
    # sigma[p, q, r, u] = sum over the other coins of conj(a_{p q ...}) a_{r u ...}
    sigma = np.einsum('pqz,ruz->pqru', paired.conj(), paired)
    overlaps = site_overlaps(t)
    grid = np.einsum('pqru,apr,bqu->ab', sigma, overlaps, overlaps)

    residue = float(np.max(np.abs(grid.imag))) if grid.size else 0.0
    if residue > OBSERVABLE_IMAG_TOL:
        raise InvariantViolation(f'Joint distribution has imaginary residue {residue:.3e}')
    grid = np.clip(grid.real, 0.0, None)

    offsets = np.arange(-t, t + 1)
    return JointDistribution(
        (j, k), starts[j - 1] + offsets, starts[k - 1] + offsets, grid
    )


def reduced_coin_density(coin: CoinVector, t: int, subset: Iterable[int]) -> np.ndarray:
    """
    Coin density of a particle subset after tracing out every position.

    Complement particles are traced on the initial coin density, since their
    transfer tensor traces to the identity; each kept particle then passes
    through the single-particle coin channel built from T.

    Args:
        coin: Initial joint coin vector
        t: Step count
        subset: 1-based particle indices to keep (non-empty and proper)

    Returns:
        np.ndarray: Hermitian 2^m x 2^m density, rows ordered like the kept particles' bits

    Raises:
        ParticleIndexError: If the subset is empty, covers every particle or has bad indices
    """
    kept = sorted(set(subset))
    n = coin.n
    if not kept or len(kept) == n:
        raise ParticleIndexError(f'Subset must be non-empty and proper, got {kept} for n={n}')
    for i in kept:
        check_particle(i, n)

    tensor = require_coin(coin)
    m = len(kept)
    front = np.moveaxis(tensor, [i - 1 for i in kept], list(range(m))).reshape(2**m, -1)
    rho = (front @ front.conj().T).reshape((2,) * (2 * m))

    # channel[c, c', s, s'] = T[c', c, s', s]
    channel = moment_table(t).T.transpose(1, 0, 3, 2)
    for p in range(m):
        rho = np.tensordot(channel, rho, axes=([2, 3], [p, m + p]))
        rho = np.moveaxis(rho, [0, 1], [p, m + p])
    return rho.reshape(2**m, 2**m)


def coin_entropy_series(
    coin: CoinVector, steps: Iterable[int], subset: Iterable[int]
) -> List[float]:
    """Von Neumann entropy (bits) of the reduced coin density at each requested step."""
    kept = tuple(subset)
    return [von_neumann_entropy(reduced_coin_density(coin, t, kept)) for t in steps]


def product_coin(coins: Sequence[np.ndarray]) -> CoinVector:
    """Coin vector of independent single-particle coins (down, up), particle 1 first."""
    amplitudes = np.array([1.0 + 0j])
    for single in coins:
        amplitudes = np.kron(amplitudes, np.asarray(single, dtype=np.complex128))
    return CoinVector(len(coins), amplitudes)
