import numpy as np
from scipy.linalg import expm

from cv_entanglement.step_01_phase_space.methods.states import GaussianState
from cv_entanglement.step_01_phase_space.methods.symplectic_form import (
    check_symmetric,
    mode_count,
    symplectic_form,
)
from cv_entanglement.step_01_phase_space.methods.validation import is_symplectic, require_valid
from cv_entanglement.utils.errors import StructuralError

# For U = exp(-i t G) with G = sum g_jk (O_j O_k + O_k O_j) / 2 the canonical
# operators evolve as O -> expm(2 t sigma g) O (Heisenberg picture).
GENERATOR_CONSTANT = 2.0


def apply_symplectic(state, S):
    S = np.asarray(S, dtype=float)
    if S.shape != state.cov.shape:
        raise StructuralError(f"Symplectic of shape {S.shape} does not act on {state.n} modes")
    if not is_symplectic(S):
        raise StructuralError("apply_symplectic expects a symplectic matrix")
    require_valid(state.cov)
    return GaussianState(S @ state.cov @ S.T, S @ state.disp)


def symplectic_from_hamiltonian(g, t=1.0):
    """Symplectic matrix generated by the quadratic Hamiltonian ``g`` after time ``t``.

    Args:
        g: Real symmetric 2n x 2n coefficient matrix.
        t: Evolution time.

    Returns:
        expm(2 t sigma g), see GENERATOR_CONSTANT.
    """
    g = np.asarray(g, dtype=float)
    n = mode_count(g)
    g = check_symmetric(g, name="Hamiltonian coefficient matrix")
    return expm(GENERATOR_CONSTANT * t * symplectic_form(n) @ g)


def beam_splitter_hamiltonian():
    # G = P1 X2 - X1 P2
    g = np.zeros((4, 4))
    g[1, 2] = g[2, 1] = 0.5
    g[0, 3] = g[3, 0] = -0.5
    return g


def passive_from_unitary(u):
    """Orthogonal symplectic matrix acting on (X, P) like ``u`` acts on the mode amplitudes."""
    u = np.atleast_2d(np.asarray(u, dtype=complex))
    n = u.shape[0]
    if u.shape != (n, n) or np.max(np.abs(u @ u.conj().T - np.eye(n))) > 1e-9:
        raise StructuralError("passive_from_unitary expects a square unitary matrix")

    K = np.zeros((2 * n, 2 * n))
    K[0::2, 0::2] = u.real
    K[0::2, 1::2] = -u.imag
    K[1::2, 0::2] = u.imag
    K[1::2, 1::2] = u.real
    return K


def unitary_from_passive(K):
    K = np.asarray(K, dtype=float)
    mode_count(K)
    return K[0::2, 0::2] + 1j * K[1::2, 0::2]


def beam_splitter_unitary(T, R):
    if abs(abs(T) ** 2 + abs(R) ** 2 - 1.0) > 1e-9:
        raise StructuralError(f"Beam splitter needs |T|^2 + |R|^2 = 1, got {abs(T) ** 2 + abs(R) ** 2:.12f}")
    return np.array([[T, R], [-np.conj(R), np.conj(T)]], dtype=complex)


def beam_splitter_symplectic(T, R):
    return passive_from_unitary(beam_splitter_unitary(T, R))


def phase_rotation(theta):
    return np.array([[np.cos(theta), np.sin(theta)], [-np.sin(theta), np.cos(theta)]])


def single_mode_squeezer(r):
    return np.diag([np.exp(r), np.exp(-r)])


def two_mode_squeezer(r):
    # Maps two vacua onto the cosh(2r)/sinh(2r) block
    c, s = np.cosh(r), np.sinh(r)
    return np.array([
        [c, 0.0, s, 0.0],
        [0.0, c, 0.0, -s],
        [s, 0.0, c, 0.0],
        [0.0, -s, 0.0, c],
    ])


def random_hamiltonian(n, rng, scale=1.0):
    upper = np.triu(rng.uniform(-1.0, 1.0, size=(2 * n, 2 * n)))
    return scale * (upper + np.triu(upper, 1).T)


def random_symplectic(n, rng, t=0.5, scale=1.0):
    return symplectic_from_hamiltonian(random_hamiltonian(n, rng, scale=scale), t)


def random_passive(n, rng):
    # QR of a complex Ginibre matrix, phases fixed so the draw is Haar
    z = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    return passive_from_unitary(q)


def random_covariance(n, rng, low=1.0, high=3.0, t=0.3):
    """S diag(nu) S^T with nu uniform in [low, high]; nu < 1 gives unphysical matrices.

    Returns the matrix and its symplectic eigenvalues in descending order.
    """
    S = random_symplectic(n, rng, t=t)
    nu = rng.uniform(low, high, size=n)
    return S @ np.diag(np.repeat(nu, 2)) @ S.T, np.sort(nu)[::-1]
