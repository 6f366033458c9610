import numpy as np
import pytest
from scipy.integrate import dblquad

from cv_entanglement.step_01_phase_space.methods.decompositions import euler_decomposition, euler_middle, williamson
from cv_entanglement.step_01_phase_space.methods.phase_space import (
    characteristic_function,
    mean_photon_number,
    wigner_at,
)
from cv_entanglement.step_01_phase_space.methods.states import (
    GaussianState,
    coherent,
    reduced_state,
    squeezed_vacuum,
    thermal,
    two_mode_squeezed,
    vacuum,
)
from cv_entanglement.step_01_phase_space.methods.symplectic_form import (
    direct_sum,
    mode_permutation,
    symplectic_form,
)
from cv_entanglement.step_01_phase_space.methods.transformations import (
    apply_symplectic,
    beam_splitter_hamiltonian,
    beam_splitter_symplectic,
    passive_from_unitary,
    random_covariance,
    random_passive,
    random_symplectic,
    symplectic_from_hamiltonian,
    two_mode_squeezer,
    unitary_from_passive,
)
from cv_entanglement.step_01_phase_space.methods.validation import (
    is_passive,
    is_pure,
    is_squeezed,
    is_symplectic,
    purity,
    require_valid,
    symplectic_eigenvalues,
    validate_covariance,
)
from cv_entanglement.utils.errors import PhysicalityError, StructuralError


def test_symplectic_form_blocks():
    sigma = symplectic_form(2)
    assert sigma.shape == (4, 4)
    assert sigma[0, 1] == 1.0 and sigma[1, 0] == -1.0
    assert np.allclose(sigma @ sigma, -np.eye(4))


def test_symplectic_form_rejects_bad_mode_count():
    with pytest.raises(StructuralError):
        symplectic_form(0)


def test_vacuum_is_valid_and_pure():
    report = validate_covariance(vacuum(2).cov)
    assert report.valid
    assert abs(report.min_uncertainty_eigenvalue) < 1e-12
    assert np.allclose(report.symplectic_eigenvalues, 1.0)
    assert is_pure(vacuum(2))


def test_half_vacuum_is_invalid_with_witness():
    gamma = 0.5 * np.eye(2)
    report = validate_covariance(gamma)
    assert not report.valid
    assert report.min_uncertainty_eigenvalue == pytest.approx(-0.5, abs=1e-12)

    with pytest.raises(PhysicalityError) as excinfo:
        require_valid(gamma)
    assert excinfo.value.witness == pytest.approx(-0.5, abs=1e-12)


@pytest.mark.parametrize("gamma", [np.eye(3), np.array([[1.0, 0.2], [0.0, 1.0]])])
def test_malformed_covariance_is_structural(gamma):
    with pytest.raises(StructuralError):
        validate_covariance(gamma)


def test_state_rejects_wrong_displacement_length():
    with pytest.raises(StructuralError):
        GaussianState(np.eye(2), [0.0, 0.0, 1.0])


def test_thermal_and_squeezed_properties():
    assert purity(thermal(1.0)) == pytest.approx(1 / 3)
    assert not is_squeezed(thermal(1.0))
    assert is_squeezed(squeezed_vacuum(0.3))
    assert is_pure(squeezed_vacuum(0.3, angle=0.7))


def test_two_mode_squeezed_reduced_state_is_thermal(tms):
    reduced = reduced_state(tms, [1])
    np.testing.assert_allclose(reduced.cov, np.cosh(1.0) * np.eye(2), atol=1e-12)


def test_mean_photon_numbers():
    assert mean_photon_number(thermal(1.5)) == pytest.approx(1.5)
    assert mean_photon_number(coherent([np.sqrt(2.0), 0.0])) == pytest.approx(1.0)
    assert mean_photon_number(two_mode_squeezed(0.4)) == pytest.approx(2 * np.sinh(0.4) ** 2)


def test_vacuum_characteristic_and_wigner():
    xi = np.array([0.4, -0.3])
    assert characteristic_function(vacuum(), xi) == pytest.approx(np.exp(-0.25 * xi @ xi))
    assert wigner_at(vacuum(), [0.0, 0.0]) == pytest.approx(1 / np.pi)


def test_characteristic_function_phase_of_displaced_vacuum():
    state = coherent([1.0, 0.5])
    xi = np.array([0.4, -0.3])
    chi = characteristic_function(state, xi)
    assert abs(chi) == pytest.approx(np.exp(-0.25 * xi @ xi))
    # xi^T sigma d = 0.4 * 0.5 + 0.3 * 1.0
    assert np.angle(chi) == pytest.approx(0.5)


def test_wigner_function_integrates_to_one():
    state = thermal(1.0)
    total, _ = dblquad(lambda p, x: wigner_at(state, [x, p]), -8.0, 8.0, -8.0, 8.0, epsabs=1e-10)
    assert total == pytest.approx(1.0, abs=1e-6)


def test_passive_transformations_keep_spectrum_and_energy(rng):
    for _ in range(20):
        gamma, _ = random_covariance(3, rng)
        state = GaussianState(gamma, rng.normal(size=6))
        out = apply_symplectic(state, random_passive(3, rng))
        np.testing.assert_allclose(np.linalg.eigvalsh(out.cov), np.linalg.eigvalsh(gamma), atol=1e-10)
        assert mean_photon_number(out) == pytest.approx(mean_photon_number(state), abs=1e-10)


def test_two_mode_squeezer_prepares_tms():
    S = two_mode_squeezer(0.5)
    assert is_symplectic(S)
    out = apply_symplectic(vacuum(2), S)
    np.testing.assert_allclose(out.cov, two_mode_squeezed(0.5).cov, atol=1e-12)


def test_beam_splitter_generators_are_passive():
    S = symplectic_from_hamiltonian(beam_splitter_hamiltonian(), t=0.3)
    assert is_symplectic(S)
    assert is_passive(S)

    K = beam_splitter_symplectic(0.6, 0.8j)
    assert is_passive(K)
    np.testing.assert_allclose(unitary_from_passive(K), [[0.6, 0.8j], [0.8j, 0.6]], atol=1e-12)


def test_passive_unitary_round_trip(rng):
    K = random_passive(3, rng)
    assert is_passive(K)
    np.testing.assert_allclose(passive_from_unitary(unitary_from_passive(K)), K, atol=1e-12)


def test_mode_permutation_rejects_duplicates():
    with pytest.raises(StructuralError):
        mode_permutation([0, 0, 1])


def test_apply_symplectic_rejects_non_symplectic():
    with pytest.raises(StructuralError):
        apply_symplectic(vacuum(1), np.diag([2.0, 2.0]))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_williamson_diagonalises(n, rng):
    gamma, nu = random_covariance(n, rng)
    S, nu_found = williamson(gamma)
    assert is_symplectic(S)
    np.testing.assert_allclose(nu_found, nu, atol=1e-8)
    np.testing.assert_allclose(S @ gamma @ S.T, np.diag(np.repeat(nu_found, 2)), atol=1e-8)
    np.testing.assert_allclose(symplectic_eigenvalues(gamma), nu, atol=1e-8)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_euler_reconstruction(n, rng):
    S = random_symplectic(n, rng, t=0.3)
    K, d, L = euler_decomposition(S)
    assert is_passive(K) and is_passive(L)
    assert np.all(np.diff(d) <= 1e-12)
    np.testing.assert_allclose(K @ euler_middle(d) @ L, S, atol=1e-8)


def test_euler_of_passive_matrix_has_unit_squeezing(rng):
    K0 = random_passive(2, rng)
    K, d, L = euler_decomposition(K0)
    np.testing.assert_allclose(d, 1.0, atol=1e-9)
    np.testing.assert_allclose(K @ L, K0, atol=1e-8)


@pytest.mark.slow
def test_decomposition_round_trips_at_scale(rng):
    for _ in range(100):
        n = int(rng.integers(1, 4))
        S = random_symplectic(n, rng, t=0.3)
        K, d, L = euler_decomposition(S)
        assert np.max(np.abs(K @ euler_middle(d) @ L - S)) <= 1e-8

    for _ in range(100):
        n = int(rng.integers(1, 4))
        gamma, _ = random_covariance(n, rng, low=0.3, high=3.0)
        S, nu = williamson(gamma)
        assert np.max(np.abs(S @ gamma @ S.T - np.diag(np.repeat(nu, 2)))) <= 1e-8
        assert validate_covariance(gamma).valid == bool(nu.min() >= 1 - 1e-9)


def test_direct_sum_of_states_is_block_diagonal():
    gamma = direct_sum(thermal(1.0).cov, vacuum().cov)
    assert gamma.shape == (4, 4)
    assert gamma[0, 2] == 0.0 and gamma[2, 2] == 1.0
