"""
Partial exchange symmetry of the eigenstates of M.

Column k of P is unchanged by swapping two particles exactly when their bits
in k (odd k: in k - 1) agree, so the particles split into two complete
subgraphs: those whose bit is 1 and those whose bit is 0.
"""

import logging
from itertools import combinations
from typing import Dict, Sequence, Tuple

import numpy as np

from src.core.spectral import build_M, c2, eigenvector_P, mu, normalized_eigenstate
from src.types.errors import InvariantViolation, ParticleIndexError
from src.types.spectra import Partition
from src.types.walks import CoinVector

logger = logging.getLogger(__name__)


def particle_bit(k: int, i: int, n: int) -> int:
    """Bit of particle i (1-based, particle 1 most significant) in the n-bit word k."""
    return (k >> (n - i)) & 1


def partition(n: int, k: int) -> Partition:
    if not 0 <= k < 2**n:
        raise ValueError(f'k={k} outside 0..{2**n - 1}')
    even = k & ~1
    up = tuple(i for i in range(1, n + 1) if particle_bit(even, i, n))
    down = tuple(i for i in range(1, n + 1) if not particle_bit(even, i, n))
    return Partition(n, k, up, down)


def apply_transposition(vector: np.ndarray, i: int, j: int) -> np.ndarray:
    """
    Relabel basis states by swapping the coins of particles i and j.

    Raises:
        ParticleIndexError: If i == j or either index is outside 1..n
    """
    vector = np.asarray(vector)
    n = int(np.log2(vector.size))
    if 2**n != vector.size:
        raise ValueError(f'Vector length {vector.size} is not a power of two')
    if i == j or not (1 <= i <= n and 1 <= j <= n):
        raise ParticleIndexError(f'Invalid transposition ({i}, {j}) for n={n}')
    tensor = vector.reshape((2,) * n)
    return np.swapaxes(tensor, i - 1, j - 1).reshape(-1)


def preserving_swaps(n: int, k: int) -> Tuple[Tuple[int, int], ...]:
    """Every transposition that leaves column k of P exactly unchanged."""
    column = eigenvector_P(n, k)
    return tuple(
        (i, j)
        for i, j in combinations(range(1, n + 1), 2)
        if np.array_equal(apply_transposition(column, i, j), column)
    )


def count_preserving_swaps(n: int, k: int) -> int:
    return len(preserving_swaps(n, k))


def lemma_predicts_preserved(n: int, k: int, i: int, j: int) -> bool:
    """
    Whether swapping particles i and j should preserve column k of P.

    Within the first n - 1 particles the two bits of k must agree; a swap with
    particle n is preserving when the other bit is 0. Since particle n always
    carries a 0 bit in an even k, both rules read as bit equality.
    """
    even = k & ~1
    return particle_bit(even, i, n) == particle_bit(even, j, n)


def has_antisymmetric_swap(n: int, k: int) -> bool:
    """True when some transposition maps column k of P to its negative."""
    column = eigenvector_P(n, k)
    return any(
        np.array_equal(apply_transposition(column, i, j), -column)
        for i, j in combinations(range(1, n + 1), 2)
    )


def mu_from_swaps(n: int, k: int) -> int:
    """4 (C(n, 2) - p_k), which equals mu_k."""
    return 4 * (n * (n - 1) // 2 - partition(n, k).p)


def relabeling_permutation(n: int, k: int, k_other: int) -> Tuple[int, ...]:
    """
    Particle relabeling that carries the subgraphs of k onto those of k_other.

    Returns:
        Tuple whose (p-1)-th entry is the new label of particle p

    Raises:
        ValueError: If the two eigenstates have different subgraph sizes
    """
    source, target = partition(n, k), partition(n, k_other)
    if source.n_up != target.n_up:
        raise ValueError(
            f'k={k} and k={k_other} split the particles {source.n_up}/{source.n_down} '
            f'and {target.n_up}/{target.n_down}; no relabeling maps one onto the other'
        )
    mapping: Dict[int, int] = dict(zip(source.up, target.up))
    mapping.update(zip(source.down, target.down))
    return tuple(mapping[p] for p in range(1, n + 1))


def relabel(vector: np.ndarray, permutation: Sequence[int]) -> np.ndarray:
    """Move the coin of particle p to particle permutation[p-1]."""
    n = len(permutation)
    axes = [0] * n
    for old, new in enumerate(permutation):
        axes[new - 1] = old
    return np.transpose(np.asarray(vector).reshape((2,) * n), axes).reshape(-1)


def check_relabeling(n: int, k: int, k_other: int, tol: float = 1e-12) -> float:
    """
    Verify that relabeling maps eigenstate k onto eigenstate k_other with equal c2.

    Returns:
        float: The shared value of c2

    Raises:
        InvariantViolation: If the relabeled column differs or the c2 values disagree
    """
    permutation = relabeling_permutation(n, k, k_other)
    if (k & 1) != (k_other & 1):
        raise ValueError('Relabeling compares columns of the same parity')
    moved = relabel(eigenvector_P(n, k), permutation)
    if not np.array_equal(moved, eigenvector_P(n, k_other)):
        raise InvariantViolation(f'Relabeled column {k} does not match column {k_other}')

    form = build_M(n)
    value = c2(normalized_eigenstate(n, k), form)
    other = c2(normalized_eigenstate(n, k_other), form)
    if abs(value - other) > tol:
        raise InvariantViolation(f'c2 differs after relabeling: {value!r} vs {other!r}')
    logger.debug(f'Relabeling {k} -> {k_other} preserves c2 = {value:.12f}')
    return value


def permuted_coin(coin: CoinVector, i: int, j: int) -> CoinVector:
    return CoinVector(coin.n, apply_transposition(coin.amplitudes, i, j))


def check_mu_relation(n: int, k: int) -> None:
    if mu_from_swaps(n, k) != mu(n, k):
        raise InvariantViolation(f'4(C(n,2) - p_k) != mu_k for n={n}, k={k}')
