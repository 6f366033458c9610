import numpy as np
from loguru import logger

from cv_entanglement.step_01_phase_space.methods.decompositions import euler_decomposition, williamson
from cv_entanglement.step_01_phase_space.methods.validation import is_pure, require_valid
from cv_entanglement.step_04_fock_oracle.methods.measures import as_density
from cv_entanglement.step_04_fock_oracle.methods.operators import (
    PADDING,
    apply_local,
    check_cutoff,
    displacement_fock,
    padded_cutoff,
    passive_sectors,
    squeezer_fock,
    weyl_fock,
)
from cv_entanglement.step_04_fock_oracle.methods.states import TAIL_WARNING, FockDensity, FockVector, vacuum_fock
from cv_entanglement.utils.errors import InfeasibleRequestError, StructuralError

# Truncations losing more than this are refused
MAX_TAIL = 1e-3
_PASSIVE_TOL = 1e-9


def _state_factors(state):
    # gamma = S diag(nu) S^T with S = K diag(d, 1/d) L
    W, nu = williamson(state.cov)
    K, d, L = euler_decomposition(np.linalg.inv(W))
    return K, d, L, nu


def _apply_modewise(tensor, ops, offset=0):
    for mode, op in enumerate(ops):
        tensor = apply_local(tensor, op, mode + offset)
    return tensor


def _conjugate_modewise(rho_tensor, ops, modes):
    # U rho U^dag for U a product of single-mode operators
    rho_tensor = _apply_modewise(rho_tensor, ops)
    return _apply_modewise(rho_tensor, [op.conj() for op in ops], offset=modes)


def _is_identity(K):
    return np.max(np.abs(K - np.eye(K.shape[0]))) <= _PASSIVE_TOL


def _passive_on_vector(vector, K, cutoff):
    out = np.zeros_like(vector)
    for indices, block in passive_sectors(K, cutoff):
        out[indices] = block @ vector[indices]
    return out


def _passive_on_density(rho, K, cutoff):
    sectors = passive_sectors(K, cutoff)
    out = np.zeros_like(rho)
    for rows, U_rows in sectors:
        for cols, U_cols in sectors:
            out[np.ix_(rows, cols)] = U_rows @ rho[np.ix_(rows, cols)] @ U_cols.conj().T
    return out


def _truncate(tensor, cutoff):
    return tensor[(slice(0, cutoff),) * tensor.ndim]


def _check_tail(tail, what, max_tail):
    if tail > max_tail:
        raise InfeasibleRequestError(f"{what}: truncation tail {tail:.2e} exceeds {max_tail:g}; increase the cutoff")
    if tail > TAIL_WARNING:
        logger.warning(f"{what}: truncation tail {tail:.2e}")


def gaussian_to_fock(state, cutoff, max_tail=MAX_TAIL):
    """Number-basis amplitudes of a pure Gaussian state.

    The state is prepared as U_K U_d |0>, displaced, from the Euler factors of
    its Williamson symplectic. Built at a padded cutoff, then truncated and
    renormalised.
    """
    cutoff = check_cutoff(cutoff)
    require_valid(state.cov)
    if not is_pure(state):
        raise InfeasibleRequestError("gaussian_to_fock needs a pure state; use gaussian_density_fock")
    K, d, _, _ = _state_factors(state)
    m = state.n
    big = padded_cutoff(cutoff)

    tensor = vacuum_fock(m, big).amplitudes
    tensor = _apply_modewise(tensor, [squeezer_fock(np.log(dk), big) for dk in d])
    if not _is_identity(K):
        tensor = _passive_on_vector(tensor.reshape(-1), K, big).reshape(tensor.shape)
    if np.any(state.disp != 0):
        tensor = _apply_modewise(tensor, [displacement_fock(state.disp[2 * k:2 * k + 2], big) for k in range(m)])

    tensor = _truncate(tensor, cutoff)
    tail = float(max(0.0, 1.0 - np.sum(np.abs(tensor) ** 2)))
    _check_tail(tail, "gaussian_to_fock", max_tail)
    return FockVector(tensor, tail).normalized()


def _thermal_diagonal(nu, cutoff):
    # Populations (1 - q) q^n with q = nbar / (nbar + 1), nbar = (nu - 1) / 2
    nbar = max((nu - 1.0) / 2.0, 0.0)
    q = nbar / (nbar + 1.0)
    return (1.0 - q) * q ** np.arange(cutoff)


def gaussian_density_fock(state, cutoff, padding=PADDING, max_tail=MAX_TAIL):
    """Number-basis density of a (possibly mixed) Gaussian state.

    A thermal product with the symplectic spectrum is transformed by U_K U_d U_L
    and displaced in a space padded by ``padding`` levels, then truncated and
    renormalised.
    """
    cutoff = check_cutoff(cutoff)
    require_valid(state.cov)
    K, d, L, nu = _state_factors(state)
    m = state.n
    big = cutoff + int(padding)
    dim = big ** m

    populations = np.ones(1)
    for nu_k in nu:
        populations = np.kron(populations, _thermal_diagonal(nu_k, big))
    rho = np.diag(populations).astype(complex)

    if not _is_identity(L):
        rho = _passive_on_density(rho, L, big)
    tensor = _conjugate_modewise(rho.reshape((big,) * (2 * m)), [squeezer_fock(np.log(dk), big) for dk in d], m)
    rho = tensor.reshape(dim, dim)
    if not _is_identity(K):
        rho = _passive_on_density(rho, K, big)
    if np.any(state.disp != 0):
        shifts = [displacement_fock(state.disp[2 * k:2 * k + 2], big) for k in range(m)]
        rho = _conjugate_modewise(rho.reshape((big,) * (2 * m)), shifts, m).reshape(dim, dim)

    truncated = _truncate(rho.reshape((big,) * (2 * m)), cutoff).reshape(cutoff ** m, cutoff ** m)
    tail = float(max(0.0, 1.0 - np.real(np.trace(truncated))))
    _check_tail(tail, "gaussian_density_fock", max_tail)
    return FockDensity(truncated, m, cutoff, tail=tail).normalized()


def characteristic_function_fock(state, xi):
    """tr[rho W_xi] evaluated in the number basis."""
    xi = np.asarray(xi, dtype=float).reshape(-1)
    if isinstance(state, FockVector):
        if xi.size != 2 * state.modes:
            raise StructuralError(f"Phase-space point must have length {2 * state.modes}")
        psi = state.normalized().amplitudes
        shifted = _apply_modewise(psi, [weyl_fock(xi[2 * k:2 * k + 2], state.cutoff) for k in range(state.modes)])
        return complex(np.vdot(psi.reshape(-1), shifted.reshape(-1)))

    rho = as_density(state).normalized()
    if xi.size != 2 * rho.modes:
        raise StructuralError(f"Phase-space point must have length {2 * rho.modes}")
    return complex(np.trace(weyl_fock(xi, rho.cutoff) @ rho.matrix))
