import numpy as np
import pytest

from cv_entanglement.step_01_phase_space.methods.phase_space import characteristic_function
from cv_entanglement.step_01_phase_space.methods.states import (
    GaussianState,
    coherent,
    squeezed_vacuum,
    thermal,
    two_mode_squeezed,
)
from cv_entanglement.step_01_phase_space.methods.transformations import (
    apply_symplectic,
    beam_splitter_hamiltonian,
    random_symplectic,
    symplectic_from_hamiltonian,
)
from cv_entanglement.step_02_entanglement.methods.convertibility import entropy_of_entanglement_pure
from cv_entanglement.step_02_entanglement.methods.ppt import log_negativity_gaussian
from cv_entanglement.step_04_fock_oracle.methods.bridge import (
    characteristic_function_fock,
    gaussian_density_fock,
    gaussian_to_fock,
)
from cv_entanglement.step_04_fock_oracle.methods.continuity import (
    continuity_demo,
    continuity_state_fock,
    continuity_table,
)
from cv_entanglement.step_04_fock_oracle.methods.measures import (
    fidelity,
    fock_moments,
    log_negativity_fock,
    mean_energy_fock,
    partial_trace,
    trace_distance,
    von_neumann_entropy,
)
from cv_entanglement.step_04_fock_oracle.methods.operators import (
    beam_splitter_fock,
    click_povm,
    displacement_fock,
    squeezer_fock,
)
from cv_entanglement.step_04_fock_oracle.methods.states import (
    FockOperator,
    FockVector,
    number_state,
    two_mode_squeezed_fock,
    vacuum_fock,
)
from cv_entanglement.utils.errors import InfeasibleRequestError, StructuralError


# --- Gaussian vs number basis ---

@pytest.mark.parametrize("r", [0.2, 0.5, 0.8, 1.0])
def test_log_negativity_agrees_with_fock_oracle(r):
    psi = two_mode_squeezed_fock(r, 40)
    assert log_negativity_fock(psi) == pytest.approx(log_negativity_gaussian(two_mode_squeezed(r).cov), abs=1e-3)


def test_entropy_of_reduced_state():
    psi = two_mode_squeezed_fock(0.5, 40)
    assert von_neumann_entropy(partial_trace(psi, [0])) == pytest.approx(entropy_of_entanglement_pure([0.5]), abs=1e-6)


def test_fock_moments_of_two_mode_squeezed(tms):
    cov, disp = fock_moments(two_mode_squeezed_fock(0.5, 40))
    np.testing.assert_allclose(cov, tms.cov, atol=1e-6)
    np.testing.assert_allclose(disp, 0.0, atol=1e-12)


def test_gaussian_to_fock_of_two_mode_squeezed(tms):
    psi = gaussian_to_fock(tms, 40)
    assert fidelity(psi, two_mode_squeezed_fock(0.5, 40)) == pytest.approx(1.0, abs=1e-6)


def test_gaussian_to_fock_of_random_pure_state(rng):
    S = random_symplectic(2, rng, t=0.2)
    state = GaussianState(S @ S.T, [0.3, -0.2, 0.1, 0.0])
    cov, disp = fock_moments(gaussian_to_fock(state, 30))
    np.testing.assert_allclose(cov, state.cov, atol=1e-4)
    np.testing.assert_allclose(disp, state.disp, atol=1e-4)


def test_gaussian_to_fock_refuses_mixed_state():
    with pytest.raises(InfeasibleRequestError):
        gaussian_to_fock(thermal(0.5), 10)


def test_gaussian_to_fock_refuses_large_tail():
    with pytest.raises(InfeasibleRequestError):
        gaussian_to_fock(squeezed_vacuum(2.0), 4)


def test_thermal_density_populations():
    rho = gaussian_density_fock(thermal(0.5), 20)
    q = 0.5 / 1.5
    np.testing.assert_allclose(np.real(np.diag(rho.matrix)), (1 - q) * q ** np.arange(20), atol=1e-8)


def test_density_of_pure_state_matches_amplitudes():
    rho = gaussian_density_fock(two_mode_squeezed(0.3), 15)
    assert fidelity(two_mode_squeezed_fock(0.3, 15), rho) == pytest.approx(1.0, abs=1e-6)


def test_characteristic_function_in_number_basis():
    state = squeezed_vacuum(0.3)
    xi = [0.4, -0.3]
    expected = characteristic_function(state, xi)
    assert characteristic_function_fock(gaussian_to_fock(state, 30), xi) == pytest.approx(expected, abs=1e-8)
    assert characteristic_function_fock(gaussian_density_fock(state, 30), xi) == pytest.approx(expected, abs=1e-8)


# --- operators ---

def test_beam_splitter_on_single_photons():
    D = 4
    U = beam_splitter_fock(0.6, 0.8, D)
    # |1,0> sits at kron index D, |0,1> at index 1
    assert U[D, D] == pytest.approx(0.6)
    assert U[1, D] == pytest.approx(-0.8)
    assert U[D, 1] == pytest.approx(0.8)
    assert U[1, 1] == pytest.approx(0.6)
    assert FockOperator(U, 2, D).unitarity_error(D - 1) < 1e-10


@pytest.mark.parametrize("t", [0.3, 1.1])
def test_beam_splitter_generator_matches_number_basis(t):
    D = 12
    state = coherent([0.6, 0.2, 0.0, 0.0])
    psi = gaussian_to_fock(state, D)
    out = FockOperator(beam_splitter_fock(np.cos(t), np.sin(t), D), 2, D).apply(psi)
    _, disp = fock_moments(out)

    S = symplectic_from_hamiltonian(beam_splitter_hamiltonian(), t)
    expected = apply_symplectic(state, S).disp
    np.testing.assert_allclose(disp, expected, atol=1e-8)
    assert abs(expected[2]) > 0.1


def test_beam_splitter_rejects_non_unitary_coefficients():
    with pytest.raises(StructuralError):
        beam_splitter_fock(0.6, 0.6, 4)


def test_squeezer_variances():
    psi = FockVector(squeezer_fock(0.3, 30) @ vacuum_fock(1, 30).amplitudes)
    cov, _ = fock_moments(psi)
    np.testing.assert_allclose(cov, np.diag([np.exp(0.6), np.exp(-0.6)]), atol=1e-8)


def test_displacement_moves_first_moments():
    psi = FockVector(displacement_fock([1.0, -0.5], 30) @ vacuum_fock(1, 30).amplitudes)
    cov, disp = fock_moments(psi)
    np.testing.assert_allclose(disp, [1.0, -0.5], atol=1e-8)
    np.testing.assert_allclose(cov, np.eye(2), atol=1e-8)


def test_click_povm():
    np.testing.assert_allclose(click_povm(4), [0.0, 1.0, 1.0, 1.0])
    np.testing.assert_allclose(click_povm(4, efficiency=0.5), [0.0, 0.5, 0.75, 0.875])
    with pytest.raises(StructuralError):
        click_povm(4, efficiency=0.0)


def test_cutoff_and_state_checks():
    with pytest.raises(StructuralError):
        vacuum_fock(1, 1)
    with pytest.raises(StructuralError):
        number_state(5, 5)
    with pytest.raises(StructuralError):
        two_mode_squeezed_fock(-0.1, 10)


def test_truncation_tail_is_recorded():
    psi = two_mode_squeezed_fock(1.0, 3)
    assert psi.tail == pytest.approx(np.tanh(1.0) ** 6)
    assert psi.norm == pytest.approx(1.0)


def test_mean_energy_and_negativity_of_vacuum():
    vac = vacuum_fock(2, 5)
    assert mean_energy_fock(vac) == pytest.approx(0.0)
    assert log_negativity_fock(vac) == 0.0
    assert mean_energy_fock(number_state(3, 5)) == pytest.approx(3.0)


def test_partial_trace_rejects_bad_modes():
    with pytest.raises(StructuralError):
        partial_trace(vacuum_fock(2, 3), [2])


# --- trace-norm continuity ---

@pytest.mark.parametrize("k", [3, 10, 20])
def test_continuity_state_matches_closed_form(k):
    row = continuity_demo(k)
    psi = continuity_state_fock(k)
    vac = vacuum_fock(2, k + 1)

    assert trace_distance(psi, vac) == pytest.approx(row["trace_distance"] / 2, abs=1e-10)
    assert von_neumann_entropy(partial_trace(psi, [0])) == pytest.approx(row["entanglement"], abs=1e-8)
    assert mean_energy_fock(psi) / 2 == pytest.approx(row["mean_energy"], abs=1e-10)


def test_continuity_table_trends():
    df = continuity_table([10 ** p for p in range(1, 7)])
    assert len(df) == 6
    assert np.all(np.diff(df["trace_distance"]) < 0)
    assert np.all(np.diff(df["mean_energy"]) > 0)
    assert np.all(np.isfinite(df["entanglement"])) and np.all(df["entanglement"] > 0)
    assert df.loc[0, "epsilon"] == pytest.approx(1 / np.log(10) ** 2)


@pytest.mark.parametrize("k", [2, 3.5])
def test_continuity_rejects_bad_k(k):
    with pytest.raises(StructuralError):
        continuity_demo(k)
