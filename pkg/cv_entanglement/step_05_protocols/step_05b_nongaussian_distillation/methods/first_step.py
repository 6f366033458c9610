import numpy as np
from loguru import logger

from cv_entanglement.step_04_fock_oracle.methods.operators import beam_splitter_fock, check_cutoff, click_povm
from cv_entanglement.step_04_fock_oracle.methods.states import FockDensity, two_mode_squeezed_fock
from cv_entanglement.utils.errors import InfeasibleRequestError, StructuralError

SECOND_PORTS = ("vacuum", "copy")


def beam_splitter_amplitudes(V, cutoff):
    """Beam splitter with amplitude transmissivity V as a (D, D, D, D) tensor [out1, out2, in1, in2]."""
    if not 0.0 < V < 1.0:
        raise StructuralError(f"Beam splitter transmissivity must lie strictly between 0 and 1, got {V}")
    U = beam_splitter_fock(V, np.sqrt(1.0 - V ** 2), cutoff)
    return U.reshape((cutoff,) * 4)


def _conditioned_density(phi, weights):
    # phi[a, b, x, y]: condition on clicks at x (A side) and y (B side), trace them out
    D = phi.shape[0]
    weighted = phi * np.sqrt(weights)[None, None, :, None] * np.sqrt(weights)[None, None, None, :]
    flat = weighted.reshape(D * D, D * D)
    return flat @ flat.conj().T


def _vacuum_port_state(psi, bs):
    # Each party's mode meets a vacuum ancilla: phi[a, b, x, y]
    vacuum_input = bs[:, :, :, 0]
    return np.einsum("axi,byj,ij->abxy", vacuum_input, vacuum_input, psi, optimize=True)


def _copy_port_state(psi, bs):
    # Second copy on (A2, B2); beam splitters on (A1, A2) and (B1, B2)
    return np.einsum("axij,bykl,ik,jl->abxy", bs, bs, psi, psi, optimize=True)


def _copy_tail(psi_probs, cutoff):
    # Probability that two local modes carry cutoff or more photons in total
    marginal = np.sum(psi_probs, axis=1)
    total = np.convolve(marginal, marginal)
    return float(2 * np.sum(total[cutoff:]))


def nongaussian_first_step(r, V, cutoff, second_port="vacuum", detector_efficiency=1.0):
    """De-Gaussifying step conditioned on yes/no detector clicks on both sides.

    ``second_port="vacuum"`` mixes each party's half of rho(r) with a vacuum mode
    on a beam splitter of amplitude transmissivity V and keeps the state if both
    reflected modes click. ``second_port="copy"`` mixes the halves of two copies
    of rho(r) instead; with identical beam splitters on both sides this only
    post-selects the second copy.

    Returns the normalised two-mode density; ``probability`` holds the success
    probability and ``tail`` the truncation loss.
    """
    cutoff = check_cutoff(cutoff)
    if r < 0:
        raise StructuralError(f"Squeezing must be non-negative, got {r}")
    if second_port not in SECOND_PORTS:
        raise StructuralError(f"second_port must be one of {SECOND_PORTS}, got '{second_port}'")

    psi_vector = two_mode_squeezed_fock(r, cutoff)
    psi = psi_vector.amplitudes
    bs = beam_splitter_amplitudes(V, cutoff)
    weights = click_povm(cutoff, detector_efficiency)

    if second_port == "vacuum":
        phi = _vacuum_port_state(psi, bs)
        tail = psi_vector.tail
    else:
        phi = _copy_port_state(psi, bs)
        tail = 2 * psi_vector.tail + _copy_tail(np.abs(psi) ** 2, cutoff)

    rho = _conditioned_density(phi, weights)
    probability = float(np.real(np.trace(rho)))
    if probability <= 1e-14:
        raise InfeasibleRequestError(f"Detectors never click for r={r}; success probability {probability:.2e}")
    logger.debug(f"First step r={r}, V={V}, port={second_port}: p={probability:.4e}, tail={tail:.2e}")
    return FockDensity(rho / probability, 2, cutoff, probability=probability, tail=tail)
