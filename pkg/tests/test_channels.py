import numpy as np
import pytest

from cv_entanglement.step_01_phase_space.methods.states import (
    GaussianState,
    coherent,
    thermal,
    two_mode_squeezed,
    vacuum,
)
from cv_entanglement.step_01_phase_space.methods.transformations import (
    beam_splitter_symplectic,
    random_covariance,
    random_symplectic,
    single_mode_squeezer,
)
from cv_entanglement.step_01_phase_space.methods.symplectic_form import direct_sum
from cv_entanglement.step_01_phase_space.methods.validation import validate_covariance
from cv_entanglement.step_02_entanglement.methods.ppt import log_negativity_gaussian
from cv_entanglement.step_03_channels.methods.channels import (
    GaussianChannel,
    additive_noise_channel,
    apply_channel,
    attenuation_channel,
    channel_from_dilation,
    channel_valid,
    compose_channels,
    local_channel,
    log_channel_verify,
    unitary_channel,
)
from cv_entanglement.step_03_channels.methods.cp_maps import (
    DEFAULT_REFERENCE_SQUEEZING,
    GaussianCPMap,
    apply_cp_map,
    cp_map_from_channel,
    cp_map_valid,
)
from cv_entanglement.step_03_channels.methods.measurements import (
    homodyne_condition,
    vacuum_project,
    vacuum_success_probability,
)
from cv_entanglement.step_04_fock_oracle.methods.bridge import gaussian_to_fock
from cv_entanglement.step_04_fock_oracle.methods.measures import fock_moments
from cv_entanglement.step_04_fock_oracle.methods.states import FockVector
from cv_entanglement.utils.errors import PhysicalityError, StructuralError

IDENTITY = GaussianChannel(np.eye(2), np.zeros((2, 2)))


# --- channels ---

def test_attenuation_is_completely_positive():
    report = channel_valid(attenuation_channel(0.3))
    assert report.valid
    assert report.min_eigenvalue == pytest.approx(0.0, abs=1e-12)


def test_noiseless_amplifier_is_not_completely_positive():
    amplifier = GaussianChannel(np.sqrt(2.0) * np.eye(2), np.zeros((2, 2)))
    report = channel_valid(amplifier)
    assert not report.valid
    assert report.min_eigenvalue == pytest.approx(-1.0)

    with pytest.raises(PhysicalityError):
        apply_channel(vacuum(), amplifier)


def test_quantum_limited_amplifier_is_valid():
    assert channel_valid(GaussianChannel(np.sqrt(2.0) * np.eye(2), np.eye(2))).valid


def test_attenuation_output():
    out = apply_channel(coherent([2.0, 0.0]), attenuation_channel(0.25))
    np.testing.assert_allclose(out.cov, np.eye(2), atol=1e-12)
    np.testing.assert_allclose(out.disp, [1.0, 0.0], atol=1e-12)


def test_attenuation_rejects_bad_transmissivity():
    with pytest.raises(StructuralError):
        attenuation_channel(1.5)


def test_channel_shape_checks():
    with pytest.raises(StructuralError):
        GaussianChannel(np.eye(2), np.eye(4))
    with pytest.raises(StructuralError):
        apply_channel(vacuum(2), attenuation_channel(0.5))


def test_composition_of_losses():
    composed = compose_channels(attenuation_channel(0.8), attenuation_channel(0.5))
    expected = attenuation_channel(0.4)
    np.testing.assert_allclose(composed.A, expected.A, atol=1e-12)
    np.testing.assert_allclose(composed.G, expected.G, atol=1e-12)


def test_dilation_of_beam_splitter_is_loss():
    eta = 0.7
    S = beam_splitter_symplectic(np.sqrt(eta), np.sqrt(1 - eta))
    channel = channel_from_dilation(S, 1, np.eye(2))
    np.testing.assert_allclose(channel.A, np.sqrt(eta) * np.eye(2), atol=1e-12)
    np.testing.assert_allclose(channel.G, (1 - eta) * np.eye(2), atol=1e-12)


def test_unitary_channel_of_squeezer():
    channel = unitary_channel(single_mode_squeezer(0.4))
    out = apply_channel(vacuum(), channel)
    np.testing.assert_allclose(out.cov, np.diag([np.exp(0.8), np.exp(-0.8)]), atol=1e-12)


def test_additive_noise_channel():
    out = apply_channel(vacuum(), additive_noise_channel(1, 0.5 * np.eye(2)))
    np.testing.assert_allclose(out.cov, 1.5 * np.eye(2))


def test_loss_reduces_negativity(tms):
    loss = attenuation_channel(0.5)
    one_arm = apply_channel(tms, local_channel(IDENTITY, loss, "AB"))
    both_arms = apply_channel(tms, local_channel(loss, loss, "AB"))
    start = log_negativity_gaussian(tms.cov)
    assert 0 < log_negativity_gaussian(both_arms.cov) < log_negativity_gaussian(one_arm.cov) < start


def test_local_channel_respects_partition(tms):
    loss = attenuation_channel(0.5)
    lossy_second = apply_channel(tms, local_channel(IDENTITY, loss, "AB"))
    lossy_first = apply_channel(tms, local_channel(IDENTITY, loss, "BA"))
    assert lossy_second.cov[0, 0] == pytest.approx(np.cosh(1.0))
    assert lossy_first.cov[2, 2] == pytest.approx(np.cosh(1.0))
    assert lossy_first.cov[0, 0] == pytest.approx(0.5 * np.cosh(1.0) + 0.5)


def _random_channel(n, rng):
    ancilla, _ = random_covariance(n, rng)
    return channel_from_dilation(random_symplectic(2 * n, rng, t=0.3), n, ancilla)


def _random_two_mode_state(rng, entangled):
    if not entangled:
        return GaussianState(random_covariance(2, rng)[0])
    S = direct_sum(random_symplectic(1, rng, t=0.3), random_symplectic(1, rng, t=0.3))
    return GaussianState(S @ two_mode_squeezed(rng.uniform(0.1, 1.0)).cov @ S.T)


def test_completely_positive_channels_give_valid_outputs(rng):
    for n in (1, 2):
        for _ in range(50):
            channel = _random_channel(n, rng)
            assert channel_valid(channel).valid
            gamma, _ = random_covariance(n, rng)
            assert validate_covariance(apply_channel(GaussianState(gamma), channel).cov).valid


def test_local_channels_never_increase_negativity(rng):
    for trial in range(200):
        state = _random_two_mode_state(rng, entangled=trial % 2 == 0)
        channel = local_channel(_random_channel(1, rng), _random_channel(1, rng), "AB")
        out = apply_channel(state, channel)
        assert log_negativity_gaussian(out.cov) <= log_negativity_gaussian(state.cov) + 1e-9


def test_log_channel_verify(tms):
    loss = attenuation_channel(0.6)
    image = apply_channel(tms, local_channel(loss, loss, "AB")).cov
    assert log_channel_verify(tms.cov, image, loss, loss)
    assert not log_channel_verify(tms.cov, tms.cov, loss, loss)


# --- measurements ---

@pytest.mark.parametrize("r", [0.2, 0.5, 1.0])
def test_homodyne_on_two_mode_squeezed(r):
    c = np.cosh(2 * r)
    out_x = homodyne_condition(two_mode_squeezed(r), 1, "X")
    out_p = homodyne_condition(two_mode_squeezed(r), 1, "P")
    np.testing.assert_allclose(out_x.cov, np.diag([1 / c, c]), atol=1e-10)
    np.testing.assert_allclose(out_p.cov, np.diag([c, 1 / c]), atol=1e-10)


def test_homodyne_rejects_bad_arguments(tms):
    with pytest.raises(StructuralError):
        homodyne_condition(tms, 1, "Q")
    with pytest.raises(StructuralError):
        homodyne_condition(tms, 2, "X")
    with pytest.raises(StructuralError):
        homodyne_condition(vacuum(), 0, "X")


def test_vacuum_projection_of_two_mode_squeezed(tms):
    conditional = vacuum_project(tms, 1)
    np.testing.assert_allclose(conditional.state.cov, np.eye(2), atol=1e-12)
    assert conditional.probability == pytest.approx(1 / np.cosh(0.5) ** 2)


def test_vacuum_probability_of_coherent_state():
    state = GaussianState(np.eye(4), [0.0, 0.0, 1.0, 0.5])
    assert vacuum_success_probability(state, 1) == pytest.approx(np.exp(-(1.0 + 0.25) / 2))


def test_vacuum_projection_matches_fock_oracle(tms):
    S = direct_sum(single_mode_squeezer(0.3), np.eye(2))
    state = GaussianState(S @ tms.cov @ S.T)
    conditional = vacuum_project(state, 1)

    psi = gaussian_to_fock(state, 40)
    branch = psi.amplitudes[:, 0]
    probability = float(np.sum(np.abs(branch) ** 2))
    cov, _ = fock_moments(FockVector(branch).normalized())
    np.testing.assert_allclose(cov, conditional.state.cov, atol=1e-3)
    assert probability == pytest.approx(conditional.probability, abs=1e-3)


def test_conditioning_keeps_random_states_valid(rng):
    for _ in range(30):
        gamma, _ = random_covariance(3, rng)
        state = GaussianState(gamma)
        mode = int(rng.integers(0, 3))
        conditional = vacuum_project(state, mode)
        assert validate_covariance(conditional.state.cov).valid
        assert 0 < conditional.probability <= 1
        for quadrature in ("X", "P"):
            assert validate_covariance(homodyne_condition(state, mode, quadrature).cov).valid


# --- CP maps ---

def test_cp_map_reproduces_attenuation(rng):
    channel = attenuation_channel(0.7)
    cp_map = cp_map_from_channel(channel)
    assert cp_map_valid(cp_map).valid
    for _ in range(20):
        state = GaussianState(random_covariance(1, rng)[0])
        # Finite reference squeezing leaves corrections of order (1 + gamma^2) / cosh(2s)
        tol = 4 * (1 + np.max(np.abs(state.cov))) ** 2 / np.cosh(2 * DEFAULT_REFERENCE_SQUEEZING)
        np.testing.assert_allclose(apply_cp_map(state, cp_map).cov, apply_channel(state, channel).cov, atol=tol)


def test_cp_map_of_two_mode_channel(tms):
    channel = local_channel(attenuation_channel(0.8), attenuation_channel(0.6), "AB")
    cp_map = cp_map_from_channel(channel)
    assert cp_map.n == 2
    np.testing.assert_allclose(apply_cp_map(tms, cp_map).cov, apply_channel(tms, channel).cov, atol=1e-4)


def test_cp_maps_of_random_channels_keep_states_valid(rng):
    for _ in range(20):
        cp_map = cp_map_from_channel(_random_channel(1, rng))
        assert cp_map_valid(cp_map).valid
        gamma, _ = random_covariance(1, rng)
        out = apply_cp_map(GaussianState(gamma), cp_map)
        assert validate_covariance(out.cov, tol=1e-4).valid


def test_cp_map_shape_checks():
    with pytest.raises(StructuralError):
        GaussianCPMap(np.eye(6))
    with pytest.raises(StructuralError):
        apply_cp_map(vacuum(2), cp_map_from_channel(attenuation_channel(0.5)))


def test_invalid_cp_map_is_rejected():
    with pytest.raises(PhysicalityError):
        apply_cp_map(vacuum(), GaussianCPMap(0.5 * np.eye(4)))
