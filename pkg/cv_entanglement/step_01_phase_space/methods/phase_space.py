import numpy as np

from cv_entanglement.step_01_phase_space.methods.symplectic_form import symplectic_form
from cv_entanglement.step_01_phase_space.methods.validation import require_valid
from cv_entanglement.utils.errors import PhysicalityError, StructuralError


def _point(state, xi):
    xi = np.asarray(xi, dtype=float).reshape(-1)
    if xi.shape != (2 * state.n,):
        raise StructuralError(f"Phase-space point must have length {2 * state.n}, got {xi.shape[0]}")
    return xi


def characteristic_function(state, xi):
    """chi(xi) = tr[rho W_xi] with W_xi = exp(i xi^T sigma O).

    Gaussian form exp(-xi^T Gamma xi / 4 + i xi^T sigma d), Gamma = sigma^T gamma sigma.
    """
    xi = _point(state, xi)
    require_valid(state.cov)
    sigma = symplectic_form(state.n)
    big_gamma = sigma.T @ state.cov @ sigma
    return complex(np.exp(-0.25 * xi @ big_gamma @ xi + 1j * xi @ sigma @ state.disp))


def wigner_at(state, xi):
    xi = _point(state, xi)
    require_valid(state.cov)
    det = np.linalg.det(state.cov)
    if det <= 0:
        raise PhysicalityError("Wigner function needs a non-singular covariance matrix")
    shift = xi - state.disp
    return float(np.exp(-shift @ np.linalg.solve(state.cov, shift)) / (np.pi ** state.n * np.sqrt(det)))


def mean_photon_number(state):
    require_valid(state.cov)
    diag = np.diag(state.cov)
    per_mode = (diag[0::2] + diag[1::2]) / 4 + (state.disp[0::2] ** 2 + state.disp[1::2] ** 2) / 2 - 0.5
    return float(np.sum(per_mode))


def mean_photon_numbers(state):
    # Per-mode breakdown of mean_photon_number
    diag = np.diag(state.cov)
    return (diag[0::2] + diag[1::2]) / 4 + (state.disp[0::2] ** 2 + state.disp[1::2] ** 2) / 2 - 0.5
