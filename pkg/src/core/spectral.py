"""
The c2 quadratic form.

c2 = a^dagger M a is the t^2 coefficient of the mean relative distance as a
function of the initial joint coin amplitudes. This module builds M, gives its
spectrum and eigenvectors in closed form (Pell-number blocks), and checks both
against a dense eigensolver.
"""

import logging
from collections import Counter
from math import comb
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import linalg, sparse

from src.config.settings import (
    JACOBI_MAX_DIM,
    JACOBI_MAX_SWEEPS,
    JACOBI_TOL,
    MAX_SPECTRAL_N,
    VECTOR_TABLE_MAX_N,
)
from src.core.surds import pell
from src.types.errors import InvalidCoinError, SizeBudgetError
from src.types.spectra import PellMatrixPower, QuadraticForm, SpectralEntry, SpectralTable
from src.types.walks import CoinVector

logger = logging.getLogger(__name__)

# a = 1 - 1/√2 is the ballistic constant <x^2>/t^2 of a single Hadamard walker
BALLISTIC = 1.0 - 1.0 / np.sqrt(2.0)


def hamming_weight(i: int) -> int:
    return bin(i).count('1')


def hamming_distance(i: int, j: int) -> int:
    return hamming_weight(i ^ j)


def common_ones(i: int, j: int) -> int:
    return hamming_weight(i & j)


def _check_size(n: int) -> None:
    if n < 1:
        raise ValueError(f'Particle count must be >= 1, got {n}')
    if n > MAX_SPECTRAL_N:
        raise SizeBudgetError(f'n={n} exceeds the spectral size budget of {MAX_SPECTRAL_N}')


def build_M(n: int) -> QuadraticForm:
    """
    Assemble M from Hamming weights and distances.

    M_ii = (n-1) a + [n - (2W(i) - n)^2] a^2 / n
    M_jk = 2 a^2 / n [delta_{d,1} (n - 1 - 2 min(W(j), W(k))) - delta_{d,2}]

    Raises:
        SizeBudgetError: If n exceeds MAX_SPECTRAL_N
    """
    _check_size(n)
    size = 2**n
    index = np.arange(size)
    weight = np.zeros(size, dtype=np.int64)
    for bit in range(n):
        weight += (index >> bit) & 1

    a2 = BALLISTIC**2
    rows: List[np.ndarray] = [index]
    cols: List[np.ndarray] = [index]
    values: List[np.ndarray] = [(n - 1) * BALLISTIC + (n - (2 * weight - n) ** 2) * a2 / n]

    for bit in range(n):
        partner = index ^ (1 << bit)
        rows.append(index)
        cols.append(partner)
        values.append(2 * a2 / n * (n - 1 - 2 * np.minimum(weight, weight[partner])))

    for low in range(n):
        for high in range(low + 1, n):
            rows.append(index)
            cols.append(index ^ ((1 << low) | (1 << high)))
            values.append(np.full(size, -2 * a2 / n))

    matrix = sparse.csr_matrix(
        (np.concatenate(values), (np.concatenate(rows), np.concatenate(cols))),
        shape=(size, size),
    )
    matrix.eliminate_zeros()
    logger.debug(f'Built M for n={n}: {size}x{size}, {matrix.nnz} non-zeros')
    return QuadraticForm(n, matrix)


def pell_matrix_power(alpha: int) -> PellMatrixPower:
    """D^alpha = [[F(alpha-1), F(alpha)], [F(alpha), F(alpha+1)]] for alpha >= -1."""
    if alpha < -1:
        raise ValueError(f'Pell matrix powers are defined for alpha >= -1, got {alpha}')
    return PellMatrixPower(
        alpha, ((pell(alpha - 1), pell(alpha)), (pell(alpha), pell(alpha + 1)))
    )


def mu(n: int, k: int) -> int:
    """Integer eigenvalue 4 W(k) W(2^n - 1 - k); odd k takes the value of k - 1."""
    even = k & ~1
    return 4 * hamming_weight(even) * hamming_weight((2**n - 1) ^ even)


def eta(n: int, k: int) -> float:
    """Eigenvalue of M attached to column k of P."""
    return BALLISTIC**2 * (2 * mu(n, k) / n + (n - 1) * np.sqrt(2.0))


def eta_bounds(n: int) -> Tuple[float, float]:
    """(eta_min, eta_max); the maximum differs for even and odd n."""
    a2 = BALLISTIC**2
    low = a2 * np.sqrt(2.0) * (n - 1)
    if n % 2 == 0:
        high = a2 * ((n - 1) * np.sqrt(2.0) + 2 * n)
    else:
        high = a2 * ((n - 1) * np.sqrt(2.0) + 2 * n - 2.0 / n)
    return low, high


def eigenvector_P(n: int, k: int) -> np.ndarray:
    """
    Column k of P, an unnormalized integer eigenvector of M.

    Block (i, k) of P, for even i and k, is (-1)^{c(i,k)} D^{d(i,k)}.
    """
    if not 0 <= k < 2**n:
        raise ValueError(f'Column index {k} outside 0..{2**n - 1}')
    block_col = k & ~1
    side = k & 1
    column = np.empty(2**n, dtype=np.int64)
    for i in range(0, 2**n, 2):
        power = pell_matrix_power(hamming_distance(i, block_col))
        sign = -1 if common_ones(i, block_col) % 2 else 1
        column[i] = sign * power.entries[0][side]
        column[i + 1] = sign * power.entries[1][side]
    return column


def normalized_eigenstate(n: int, k: int) -> CoinVector:
    column = eigenvector_P(n, k).astype(np.float64)
    return CoinVector(n, column / np.linalg.norm(column))


def degeneracy_table(n: int) -> Dict[int, int]:
    """Degeneracy of every distinct eigenvalue keyed by mu."""
    counts: Counter = Counter()
    for k in range(0, 2**n, 2):
        counts[mu(n, k)] += 2
    return dict(counts)


def analytic_spectrum(n: int, with_vectors: Optional[bool] = None) -> SpectralTable:
    """
    Closed-form spectrum of M.

    Args:
        n: Particle count (>= 2)
        with_vectors: Attach the integer columns P_k, P_{k+1}; defaults to n <= VECTOR_TABLE_MAX_N

    Returns:
        SpectralTable with one entry per even k
    """
    if n < 2:
        raise ValueError(f'Analytic spectrum needs n >= 2, got {n}')
    _check_size(n)
    if with_vectors is None:
        with_vectors = n <= VECTOR_TABLE_MAX_N

    degeneracies = degeneracy_table(n)
    entries = []
    for k in range(0, 2**n, 2):
        columns = (eigenvector_P(n, k), eigenvector_P(n, k + 1)) if with_vectors else None
        value = mu(n, k)
        entries.append(
            SpectralEntry(k, hamming_weight(k), eta(n, k), value, degeneracies[value], columns)
        )
    return SpectralTable(n, tuple(entries))


def c2(coin: CoinVector, form: Optional[QuadraticForm] = None) -> float:
    """
    The quadratic form a^dagger M a.

    Raises:
        InvalidCoinError: If the form was built for another particle count
    """
    form = form or build_M(coin.n)
    if form.n != coin.n:
        raise InvalidCoinError(f'Coin vector has n={coin.n} but the form was built for n={form.n}')
    amplitudes = coin.amplitudes
    value = complex(np.vdot(amplitudes, form.matrix @ amplitudes))
    return float(value.real)


def jacobi_eigenvalues(
    matrix: np.ndarray, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS
) -> np.ndarray:
    """
    Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Raises:
        ValueError: If the matrix is not square and symmetric
        RuntimeError: If off-diagonal mass remains after max_sweeps
    """
    a = np.array(matrix, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or not np.allclose(a, a.T):
        raise ValueError('Jacobi solver needs a real symmetric matrix')

    size = a.shape[0]
    scale = max(np.abs(a).max(), 1.0)
    for sweep in range(max_sweeps):
        off = np.sqrt(np.sum(np.triu(a, 1) ** 2))
        if off <= tol * scale:
            logger.debug(f'Jacobi converged after {sweep} sweeps (dim {size})')
            return np.sort(np.diag(a))
        for p in range(size - 1):
            for q in range(p + 1, size):
                if abs(a[p, q]) <= tol * scale * 1e-3:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * a[p, q])
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta**2 + 1.0)) if theta else 1.0
                c = 1.0 / np.sqrt(t**2 + 1.0)
                s = t * c
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p], a[:, q] = c * col_p - s * col_q, s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :], a[q, :] = c * row_p - s * row_q, s * row_p + c * row_q
    raise RuntimeError(f'Jacobi did not converge in {max_sweeps} sweeps (dim {size})')


def dense_spectrum(form: QuadraticForm) -> np.ndarray:
    """All eigenvalues of M, ascending; Jacobi for small forms, LAPACK above JACOBI_MAX_DIM."""
    dense = form.dense()
    if form.dimension <= JACOBI_MAX_DIM:
        return jacobi_eigenvalues(dense)
    return linalg.eigh(dense, eigvals_only=True)


def eigen_residual(form: QuadraticForm, k: int) -> float:
    """max |M v - eta_k v| for the normalized column k of P."""
    vector = normalized_eigenstate(form.n, k).amplitudes.real
    return float(np.max(np.abs(form.matrix @ vector - eta(form.n, k) * vector)))


def eigenvalue_count(n: int) -> int:
    """Number of distinct eigenvalues, one per value of W(n - W) with 0 <= W <= n - 1."""
    return len({w * (n - w) for w in range(n)})


def multiplicity(n: int, w: int) -> int:
    """Number of even k with Hamming weight w."""
    return comb(n - 1, w)
