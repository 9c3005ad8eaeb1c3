import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.core import entanglement, spectral
from src.core.symmetry import partition
from src.types.errors import InvariantViolation, ParticleIndexError
from src.types.spectra import SchmidtData


@pytest.mark.parametrize('n', range(3, 9))
def test_closed_form_weights_match_the_schmidt_oracle(n):
    for k in range(2, 2**n):
        state = spectral.normalized_eigenstate(n, k)
        data = entanglement.schmidt(state.amplitudes, partition(n, k).up)
        nu_1, nu_2 = entanglement.nu_closed_form(n, entanglement.parity(k))
        assert data.rank() == 2
        assert data.nu[0] == pytest.approx(nu_1, abs=1e-10)
        assert data.nu[1] == pytest.approx(nu_2, abs=1e-10)
        assert nu_1 + nu_2 == pytest.approx(1.0, abs=1e-15)
        entanglement.check_rank_two(data)


def test_odd_eigenstates_are_less_entangled():
    _, nu_2 = entanglement.nu_closed_form(3, 'odd')
    assert nu_2 == pytest.approx(5.025e-3, rel=1e-3)
    assert entanglement.entropy_closed_form(3, 'odd') < entanglement.entropy_closed_form(3, 'even')


def test_the_oracle_settles_the_exponent_offsets():
    assert entanglement.resolve_nu_exponents() == {'even': -2, 'odd': 0}


def test_an_impossible_exponent_is_reported():
    with pytest.raises(InvariantViolation):
        entanglement.resolve_nu_exponents(sizes=(3, 4), candidates=(5,))


@pytest.mark.parametrize('n', range(2, 8))
def test_fock_form_rebuilds_the_eigenstate(n):
    for k in range(2**n):
        state = spectral.normalized_eigenstate(n, k)
        form = entanglement.build_eigenstate_fock(n, k)
        expanded = entanglement.expand_fock(form)
        assert np.linalg.norm(expanded) == pytest.approx(1.0, abs=1e-12)
        assert abs(np.vdot(expanded, state.amplitudes)) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize('n', range(3, 8))
def test_fock_coefficients_are_the_schmidt_weights(n):
    for k in range(2, 2**n):
        form = entanglement.build_eigenstate_fock(n, k)
        data = entanglement.schmidt(
            spectral.normalized_eigenstate(n, k).amplitudes, partition(n, k).up
        )
        np.testing.assert_allclose(
            entanglement.fock_schmidt_weights(form), data.nu[:2], atol=1e-10
        )


def test_unentangled_eigenstates_have_a_rank_one_fock_form():
    form = entanglement.build_eigenstate_fock(4, 0)
    assert form.coefficients == (1.0,)
    assert form.up == ()


@pytest.mark.parametrize('m', range(7))
def test_fock_norm_identities_hold_exactly(m):
    entanglement.check_fock_norms(m)


def test_rank_check_flags_a_third_weight():
    data = SchmidtData((1,), np.array([0.5, 0.3, 0.2]), 0.0)
    with pytest.raises(InvariantViolation):
        entanglement.check_rank_two(data)


def test_entropy_falls_geometrically_with_n():
    sizes = np.arange(12, 25)
    entropies = np.array([entanglement.entropy_closed_form(int(n), 'even') for n in sizes])
    assert np.all(np.diff(entropies) < 0)
    slope = np.polyfit(sizes, np.log(entropies), 1)[0]
    assert slope == pytest.approx(np.log(3.0 - 2.0 * np.sqrt(2.0)), rel=0.05)


def test_binary_entropy_edges():
    assert entanglement.binary_entropy(0.0) == 0.0
    assert entanglement.binary_entropy(1.0) == 0.0
    assert entanglement.binary_entropy(0.5) == pytest.approx(1.0)
    assert entanglement.binary_entropy(1e-300) > 0.0


def test_von_neumann_entropy_of_mixed_and_pure_states():
    assert entanglement.von_neumann_entropy(np.eye(2) / 2) == pytest.approx(1.0)
    pure = np.array([[1.0, 0.0], [0.0, 0.0]])
    assert entanglement.von_neumann_entropy(pure) == pytest.approx(0.0, abs=1e-12)


@given(p=st.floats(min_value=1e-9, max_value=1 - 1e-9))
def test_binary_entropy_matches_the_density_matrix_route(p):
    rho = np.diag([p, 1.0 - p])
    assert entanglement.binary_entropy(p) == pytest.approx(
        entanglement.von_neumann_entropy(rho), abs=1e-9
    )


@pytest.mark.parametrize('cut', [(), (1, 2, 3), (0,), (4,)])
def test_bad_cuts_are_rejected(cut):
    with pytest.raises(ParticleIndexError):
        entanglement.schmidt(np.eye(8)[0], cut)


def test_closed_form_arguments_are_validated():
    with pytest.raises(ValueError):
        entanglement.nu_closed_form(1, 'even')
    with pytest.raises(ValueError):
        entanglement.nu_closed_form(4, 'sideways')
