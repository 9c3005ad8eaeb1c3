"""
Mean relative distance of n walkers.

D = sum_i (x_i - xbar)^2 expands to (n-1)/n sum_i x_i^2 - 1/n sum_{j != k} x_j x_k.
Exact values come from the factorized multi-particle moments; the classical
baseline is a closed form plus a seeded Monte Carlo estimate; the asymptotic
path assembles the same quantity from the K-integral expansion of the
single-walker matrix elements.
"""

import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from src.config.settings import DEFAULT_SEED, DEFAULT_TRIALS, OBSERVABLE_IMAG_TOL
from src.core.integrals import COINS, IntegralTable
from src.core.multiparticle import (
    coin_expectation,
    mean_x2,
    pair_moment,
    require_coin,
    resolve_positions,
)
from src.types.errors import InvariantViolation
from src.types.walks import CoinVector, DistanceCurve

logger = logging.getLogger(__name__)

NEGATIVE_DISTANCE_TOL = 1e-9


def _combine(n: int, squares: complex, cross: complex) -> complex:
    """(n-1)/n sum x_i^2 - 1/n sum_{j != k} x_j x_k from the two sums."""
    return (n - 1) / n * squares - cross / n


def _clamp(value: float, scale: float, label: str) -> float:
    if value >= 0.0:
        return value
    if value < -NEGATIVE_DISTANCE_TOL * max(scale, 1.0):
        raise InvariantViolation(f'{label} is negative: {value:.6e}')
    return 0.0


def mean_distance(coin: CoinVector, t: int, positions: Optional[Sequence[int]] = None) -> float:
    """
    <D> after t steps.

    Args:
        coin: Normalized joint coin vector
        t: Step count
        positions: Initial sites, all 0 when omitted

    Returns:
        float: The mean relative distance, never negative

    Raises:
        InvariantViolation: If round-off pushes the result clearly below zero
    """
    n = coin.n
    require_coin(coin)
    if n == 1:
        return 0.0
    squares = sum(mean_x2(i, coin, t, positions) for i in range(1, n + 1))
    cross = 2.0 * sum(
        pair_moment(j, k, coin, t, positions)
        for j in range(1, n + 1)
        for k in range(j + 1, n + 1)
    )
    return _clamp(float(_combine(n, squares, cross)), squares, f'<D>(t={t})')


def classical_baseline(n: int, t: int, positions: Optional[Sequence[int]] = None) -> float:
    """Expected D for n independent unbiased +-1 walkers: initial spread plus (n-1) t."""
    if n < 1 or t < 0:
        raise ValueError(f'Need n >= 1 and t >= 0, got n={n}, t={t}')
    starts = np.array(resolve_positions(n, positions), dtype=np.float64)
    spread = float(np.sum((starts - starts.mean()) ** 2))
    return spread + (n - 1) * t


def monte_carlo_distance(
    n: int,
    steps: Sequence[int],
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    positions: Optional[Sequence[int]] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Monte Carlo estimate of the classical mean distance.

    Each trial moves every walker +-1 with equal probability per step. A single
    seeded generator draws all steps, so a given (n, steps, trials, seed) is
    bit-reproducible.

    Returns:
        Tuple of (mean, standard error) arrays aligned with steps
    """
    wanted = sorted(set(int(t) for t in steps))
    if not wanted or wanted[0] < 0:
        raise ValueError(f'Steps must be non-negative and non-empty, got {list(steps)}')
    if trials < 2:
        raise ValueError(f'Monte Carlo needs at least 2 trials, got {trials}')

    rng = np.random.default_rng(seed)
    walkers = np.tile(np.array(resolve_positions(n, positions), dtype=np.int64), (trials, 1))
    targets = set(wanted)
    recorded = {}
    for t in range(wanted[-1] + 1):
        if t > 0:
            walkers += 2 * rng.integers(0, 2, size=walkers.shape, dtype=np.int64) - 1
        if t in targets:
            centred = walkers - walkers.mean(axis=1, keepdims=True)
            spread = np.sum(centred**2, axis=1)
            recorded[t] = (spread.mean(), spread.std(ddof=1) / np.sqrt(trials))
    logger.debug(f'Monte Carlo: n={n}, {trials} trials, t up to {wanted[-1]}, seed={seed}')

    means = np.array([recorded[int(t)][0] for t in steps])
    errors = np.array([recorded[int(t)][1] for t in steps])
    return means, errors


def classical_slope(steps: Sequence[int], values: Sequence[float]) -> float:
    """Least-squares slope of D against t."""
    slope, _ = np.polyfit(np.asarray(steps, dtype=np.float64), np.asarray(values), 1)
    return float(slope)


def fit_c2(steps: Sequence[int], values: Sequence[float]) -> float:
    """
    t^2 coefficient of <D> by least squares of <D>/t^2 on {1, 1/t, 1/t^2}.

    Raises:
        ValueError: If fewer than three positive steps are given
    """
    t = np.asarray(steps, dtype=np.float64)
    d = np.asarray(values, dtype=np.float64)
    if t.size < 3 or np.any(t <= 0):
        raise ValueError('fit_c2 needs at least three positive steps')
    design = np.column_stack([np.ones_like(t), 1.0 / t, 1.0 / t**2])
    coefficients, *_ = np.linalg.lstsq(design, d / t**2, rcond=None)
    return float(coefficients[0])


def distance_curve(
    coin: CoinVector, steps: Sequence[int], positions: Optional[Sequence[int]] = None
) -> DistanceCurve:
    """<D> at every step, with fitted c2 when at least three positive steps are sampled."""
    samples = tuple((int(t), mean_distance(coin, int(t), positions)) for t in steps)
    positive = [(t, d) for t, d in samples if t > 0]
    fitted = float('nan')
    if len(positive) >= 3:
        fitted = fit_c2([t for t, _ in positive], [d for _, d in positive])
        logger.info(f'Fitted c2 = {fitted:.6f} over t in [{positive[0][0]}, {positive[-1][0]}]')
    return DistanceCurve(coin.n, samples, fitted)


def _default_table(table: Optional[IntegralTable]) -> IntegralTable:
    return table if table is not None else IntegralTable('quadrature', oscillatory='stationary')


def asymptotic_matrix_element_x2(
    x_bra: int, x_ket: int, s_bra: int, s_ket: int, t: int, table: Optional[IntegralTable] = None
) -> complex:
    """
    <x' s'| U^-t x^2 U^t |x s> = -1/(2 pi) [t^2 I_A2 + t I_A1 + I_AC + I_Ao(t)].

    With a quadrature table the expansion is exact; closed and stationary tables
    carry the o(t^-1/2) error of the oscillatory term.
    """
    table = _default_table(table)
    value = (
        t**2 * table.a2(x_bra - x_ket, s_bra, s_ket)
        + t * table.a1(x_bra, x_ket, s_bra, s_ket)
        + table.ac(x_bra, x_ket, s_bra, s_ket)
        + table.ao(x_bra, x_ket, s_bra, s_ket, t)
    )
    return complex(-value / (2.0 * np.pi))


def asymptotic_matrix_element_x(
    x_bra: int, x_ket: int, s_bra: int, s_ket: int, t: int, table: Optional[IntegralTable] = None
) -> complex:
    """<x' s'| U^-t x U^t |x s> = -i/(2 pi) [t I_B + I_B1 + I_Bo(t)]."""
    table = _default_table(table)
    value = (
        t * table.b(x_bra - x_ket, s_bra, s_ket)
        + table.b1(x_bra, x_ket, s_bra, s_ket)
        + table.bo(x_bra, x_ket, s_bra, s_ket, t)
    )
    return complex(-1j * value / (2.0 * np.pi))


def asymptotic_moments(
    x0: int, t: int, table: Optional[IntegralTable] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """2x2 coin matrices of x and x^2 for a walker started at x0, from the expansion."""
    X = np.empty((2, 2), dtype=np.complex128)
    X2 = np.empty((2, 2), dtype=np.complex128)
    for s_bra in COINS:
        for s_ket in COINS:
            X[s_bra, s_ket] = asymptotic_matrix_element_x(x0, x0, s_bra, s_ket, t, table)
            X2[s_bra, s_ket] = asymptotic_matrix_element_x2(x0, x0, s_bra, s_ket, t, table)
    return X, X2


def asymptotic_distance(
    coin: CoinVector,
    t: int,
    positions: Optional[Sequence[int]] = None,
    table: Optional[IntegralTable] = None,
) -> float:
    """
    <D> assembled from the integral expansion instead of lattice sums.

    Defaults to quadrature for every integral and the stationary-phase asymptote
    for the oscillatory pair.
    """
    table = _default_table(table)
    n = coin.n
    if n == 1:
        return 0.0
    starts = resolve_positions(n, positions)
    moments = {x0: asymptotic_moments(x0, t, table) for x0 in set(starts)}

    squares = sum(
        coin_expectation(coin, [(i, moments[starts[i - 1]][1])]) for i in range(1, n + 1)
    )
    cross = 2.0 * sum(
        coin_expectation(coin, [(j, moments[starts[j - 1]][0]), (k, moments[starts[k - 1]][0])])
        for j in range(1, n + 1)
        for k in range(j + 1, n + 1)
    )
    value = _combine(n, complex(squares), complex(cross))
    if abs(value.imag) > OBSERVABLE_IMAG_TOL * max(abs(value.real), 1.0):
        logger.warning(f'Asymptotic <D>(t={t}) carries imaginary part {value.imag:.3e}')
    return float(value.real)
