from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed
from loguru import logger
from scipy.optimize import minimize

from cv_entanglement.step_01_phase_space.methods.symplectic_form import mode_count, mode_selector
from cv_entanglement.step_01_phase_space.methods.transformations import passive_from_unitary
from cv_entanglement.step_01_phase_space.methods.validation import as_covariance, require_valid
from cv_entanglement.utils.errors import StructuralError


def passive_max_entanglement(gamma):
    """Largest log-negativity reachable by passive optics: max(0, -log2(l1 l2) / 2).

    l1, l2 are the two smallest eigenvalues of gamma.
    """
    gamma = as_covariance(gamma)
    require_valid(gamma)
    smallest = np.linalg.eigvalsh(gamma)[:2]
    return float(max(0.0, -np.log2(smallest[0] * smallest[1]) / 2))


def min_transposed_symplectic_eigenvalue(gamma_pair):
    # Smaller symplectic eigenvalue of the partial transpose of a two-mode state
    A, B, C = gamma_pair[:2, :2], gamma_pair[2:, 2:], gamma_pair[:2, 2:]
    delta = np.linalg.det(A) + np.linalg.det(B) - 2 * np.linalg.det(C)
    det = np.linalg.det(gamma_pair)
    return float(np.sqrt(max((delta - np.sqrt(max(delta ** 2 - 4 * det, 0.0))) / 2, 1e-300)))


def unitary_from_angles(params, n):
    """Givens-rotation parametrisation of U(n) with n^2 angles."""
    params = np.asarray(params, dtype=float)
    u = np.diag(np.exp(1j * params[:n]))
    offset = n
    for j in range(n):
        for k in range(j + 1, n):
            theta, phi = params[offset], params[offset + 1]
            offset += 2
            givens = np.eye(n, dtype=complex)
            givens[j, j] = np.cos(theta)
            givens[k, k] = np.cos(theta)
            givens[j, k] = -np.exp(1j * phi) * np.sin(theta)
            givens[k, j] = np.exp(-1j * phi) * np.sin(theta)
            u = givens @ u
    return u


def best_pair(gamma):
    """(value, pair) maximising -log2 of the smallest transposed symplectic eigenvalue over mode pairs."""
    n = mode_count(gamma)
    best = (-np.inf, (0, 1))
    for j in range(n):
        for k in range(j + 1, n):
            selector = mode_selector([j, k], n)
            value = -np.log2(min_transposed_symplectic_eigenvalue(selector @ gamma @ selector.T))
            if value > best[0]:
                best = (value, (j, k))
    return best


def _objective(params, gamma, n):
    K = passive_from_unitary(unitary_from_angles(params, n))
    return -best_pair(K @ gamma @ K.T)[0]


def _restart(gamma, n, seed_sequence, max_iter):
    rng = np.random.default_rng(seed_sequence)
    start = rng.uniform(0.0, 2 * np.pi, size=n * n)
    result = minimize(_objective, start, args=(gamma, n), method="Nelder-Mead",
                      options={"maxiter": max_iter, "xatol": 1e-10, "fatol": 1e-12})
    result = minimize(_objective, result.x, args=(gamma, n), method="Powell",
                      options={"maxiter": max_iter, "xtol": 1e-10, "ftol": 1e-12})
    return -float(result.fun), result.x, bool(result.success)


@dataclass(frozen=True)
class PassiveResult:
    K: np.ndarray
    achieved: float
    pair: tuple
    restarts: int

    def to_dict(self):
        return {"achieved": self.achieved, "pair": list(self.pair), "restarts": self.restarts, "K": self.K.tolist()}


def passive_optimizer(gamma, restarts=8, seed=0, max_iter=4000, n_jobs=1):
    """Search the passive group for the K that maximises the log-negativity of the best mode pair.

    Restarts are seeded from SeedSequence(seed).spawn(restarts); the best
    restart wins, ties going to the lowest index.
    """
    gamma = as_covariance(gamma)
    n = mode_count(gamma)
    if n < 2:
        raise StructuralError(f"Passive entangling needs at least two modes, got {n}")
    if restarts < 1:
        raise StructuralError(f"Need at least one restart, got {restarts}")
    require_valid(gamma)

    children = np.random.SeedSequence(seed).spawn(int(restarts))
    results = Parallel(n_jobs=n_jobs)(delayed(_restart)(gamma, n, child, max_iter) for child in children)
    values = np.array([value for value, _, _ in results])
    winner = int(np.argmax(values))
    if not any(success for _, _, success in results):
        logger.warning("No optimizer restart reported convergence")

    K = passive_from_unitary(unitary_from_angles(results[winner][1], n))
    value, pair = best_pair(K @ gamma @ K.T)
    logger.debug(f"Passive optimizer restart values {np.round(values, 6).tolist()}")
    return PassiveResult(K, float(max(0.0, value)), pair, int(restarts))
