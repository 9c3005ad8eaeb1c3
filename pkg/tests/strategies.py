"""Hypothesis strategies shared by the test modules."""

import numpy as np
from hypothesis import strategies as st

from src.types.walks import CoinVector

coin_labels = st.sampled_from(['up', 'down', 'u', 'd', '↑', '↓', 0, 1])

lattice_offsets = st.integers(min_value=-3, max_value=3)

_component = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False, allow_infinity=False)


@st.composite
def coin_vectors(draw, n: int) -> CoinVector:
    """Random normalized joint coin vectors of n particles."""
    size = 2**n
    real = np.array(draw(st.lists(_component, min_size=size, max_size=size)))
    imag = np.array(draw(st.lists(_component, min_size=size, max_size=size)))
    amplitudes = real + 1j * imag
    norm = np.linalg.norm(amplitudes)
    if norm < 1e-3:
        amplitudes = np.zeros(size, dtype=np.complex128)
        amplitudes[draw(st.integers(0, size - 1))] = 1.0
        norm = 1.0
    return CoinVector(n, amplitudes / norm)


@st.composite
def sized_coin_vectors(draw, min_n: int = 1, max_n: int = 3) -> CoinVector:
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    return draw(coin_vectors(n))


def eigen_indices(n: int):
    return st.integers(min_value=0, max_value=2**n - 1)
