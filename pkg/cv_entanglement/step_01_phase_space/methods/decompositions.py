import numpy as np

from cv_entanglement.step_01_phase_space.methods.symplectic_form import (
    check_symmetric,
    mode_count,
    symplectic_form,
)
from cv_entanglement.step_01_phase_space.methods.validation import is_symplectic
from cv_entanglement.utils.errors import PhysicalityError, StructuralError


def _sym_sqrt(gamma):
    eigvals, eigvecs = np.linalg.eigh(gamma)
    if eigvals[0] <= 1e-12 * max(1.0, eigvals[-1]):
        raise PhysicalityError(f"Covariance matrix is singular (smallest eigenvalue {eigvals[0]:.3e})", witness=float(eigvals[0]))
    root = np.sqrt(eigvals)
    return (eigvecs * root) @ eigvecs.T, (eigvecs / root) @ eigvecs.T


def williamson(gamma):
    """Symplectic diagonalisation of a positive definite covariance matrix.

    Returns ``(S, nu)`` with ``S @ gamma @ S.T = diag(nu_1, nu_1, ..., nu_n, nu_n)``
    and ``nu`` in descending order.

    With A = gamma^(1/2), the antisymmetric matrix A sigma A is brought to
    the standard form (+) nu_k [[0, 1], [-1, 0]] by an orthogonal O read off the
    eigenvectors of the Hermitian matrix i A sigma A. Then
    S = diag(nu)^(1/2) O^T A^(-1).
    """
    gamma = np.asarray(gamma, dtype=float)
    n = mode_count(gamma)
    gamma = check_symmetric(gamma, name="Covariance matrix")
    sqrt_gamma, inv_sqrt_gamma = _sym_sqrt(gamma)

    kernel = sqrt_gamma @ symplectic_form(n) @ sqrt_gamma
    eigvals, eigvecs = np.linalg.eigh(1j * kernel)
    positive = np.argsort(eigvals)[::-1][:n]

    nu = eigvals[positive]
    O = np.zeros((2 * n, 2 * n))
    for k, idx in enumerate(positive):
        v = eigvecs[:, idx]
        O[:, 2 * k] = np.sqrt(2.0) * v.imag
        O[:, 2 * k + 1] = np.sqrt(2.0) * v.real

    scale = np.repeat(np.sqrt(nu), 2)
    S = (scale[:, None] * O.T) @ inv_sqrt_gamma
    return S, nu


def _pair_unit_cluster(basis, sigma, pairs):
    # Orthonormal vectors w_1..w_m with w_j, -sigma w_j spanning the cluster
    chosen = []
    for _ in range(pairs):
        norms = np.linalg.norm(basis, axis=0)
        w = basis[:, int(np.argmax(norms))]
        w = w / np.linalg.norm(w)
        pair = np.column_stack([w, -sigma @ w])
        basis = basis - pair @ (pair.T @ basis)
        chosen.append(w)
    return chosen


def euler_decomposition(S, tol=1e-9):
    """Factor S = K diag(d_1, 1/d_1, ..., d_n, 1/d_n) L with K, L passive.

    Returns ``(K, d, L)`` with ``d`` descending. The factors are not unique
    and only the reconstruction is guaranteed.
    """
    S = np.asarray(S, dtype=float)
    n = mode_count(S)
    if not is_symplectic(S):
        raise StructuralError("euler_decomposition expects a symplectic matrix")
    sigma = symplectic_form(n)

    # S S^T = K diag(d^2) K^T; its eigenvalues come in pairs (mu, 1/mu)
    gram = S @ S.T
    mu, W = np.linalg.eigh((gram + gram.T) / 2)
    order = np.argsort(mu)[::-1]
    cluster_tol = tol * max(1.0, float(mu[order[0]]))

    large = [idx for idx in order[:n] if mu[idx] > 1.0 + cluster_tol]
    vectors = [W[:, idx] for idx in large]
    d = [float(np.sqrt(mu[idx])) for idx in large]

    unit = [idx for idx in order if abs(mu[idx] - 1.0) <= cluster_tol]
    missing = n - len(large)
    if missing:
        if len(unit) < 2 * missing:
            raise StructuralError("Singular values of S do not pair up; matrix is not symplectic enough")
        vectors += _pair_unit_cluster(W[:, unit], sigma, missing)
        d += [1.0] * missing

    K = np.zeros((2 * n, 2 * n))
    for j, v in enumerate(vectors):
        K[:, 2 * j] = v
        K[:, 2 * j + 1] = -sigma @ v

    d = np.array(d)
    inv_middle = np.ravel(np.column_stack([1.0 / d, d]))
    L = inv_middle[:, None] * (K.T @ S)
    return K, d, L


def euler_middle(d):
    d = np.asarray(d, dtype=float)
    return np.diag(np.ravel(np.column_stack([d, 1.0 / d])))
