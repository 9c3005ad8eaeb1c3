"""
Value types for the c2 quadratic form, its analytic spectrum, exchange
partitions and Schmidt decompositions.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import sparse


@dataclass(frozen=True)
class QuadraticForm:
    """The real symmetric 2^n x 2^n matrix M with c2 = a^dagger M a."""

    n: int
    matrix: sparse.csr_matrix

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()


@dataclass(frozen=True)
class PellMatrixPower:
    """D^alpha for D = [[0, 1], [1, 2]] with exact integer entries."""

    alpha: int
    entries: Tuple[Tuple[int, int], Tuple[int, int]]

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=object)

    def __matmul__(self, other: 'PellMatrixPower') -> 'PellMatrixPower':
        (a, b), (c, d) = self.entries
        (e, f), (g, h) = other.entries
        return PellMatrixPower(
            self.alpha + other.alpha,
            ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h)),
        )


@dataclass(frozen=True)
class SpectralEntry:
    """Eigen-data attached to one even k (columns k and k+1 of P)."""

    k: int
    weight: int
    eta: float
    mu: int
    degeneracy: int
    columns: Optional[Tuple[np.ndarray, np.ndarray]] = None


@dataclass(frozen=True)
class SpectralTable:
    n: int
    entries: Tuple[SpectralEntry, ...]

    def distinct(self) -> List[Tuple[float, int]]:
        """Distinct eigenvalues with their degeneracies, ascending."""
        seen: Dict[int, Tuple[float, int]] = {}
        for entry in self.entries:
            seen.setdefault(entry.mu, (entry.eta, entry.degeneracy))
        return sorted(seen.values())

    def multiset(self) -> np.ndarray:
        """All 2^n eigenvalues, ascending, each even k counted twice."""
        return np.sort(np.repeat([entry.eta for entry in self.entries], 2))

    def total_degeneracy(self) -> int:
        return sum(degeneracy for _, degeneracy in self.distinct())


@dataclass(frozen=True)
class Partition:
    """The two complete subgraphs of particles that an eigenstate is symmetric under."""

    n: int
    k: int
    up: Tuple[int, ...]
    down: Tuple[int, ...]

    @property
    def n_up(self) -> int:
        return len(self.up)

    @property
    def n_down(self) -> int:
        return len(self.down)

    @property
    def p(self) -> int:
        """Number of state-preserving transpositions."""
        return self.n_up * (self.n_up - 1) // 2 + self.n_down * (self.n_down - 1) // 2


@dataclass(frozen=True)
class SchmidtData:
    cut: Tuple[int, ...]
    nu: np.ndarray
    entropy: float

    def rank(self, tol: float = 1e-12) -> int:
        return int(np.sum(self.nu > tol))


@dataclass(frozen=True)
class FockSchmidtForm:
    """Eigenstate written over symmetric (Fock) bases of its two subgraphs.

    vectors_a[r][w] is the amplitude of the Fock state with w raised coins among
    the `down` particles, vectors_b[r][w] likewise among the `up` particles.
    """

    n: int
    k: int
    down: Tuple[int, ...]
    up: Tuple[int, ...]
    coefficients: Tuple[float, ...]
    vectors_a: Tuple[np.ndarray, ...]
    vectors_b: Tuple[np.ndarray, ...] = field(default_factory=tuple)

    @property
    def rank(self) -> int:
        return len(self.coefficients)
