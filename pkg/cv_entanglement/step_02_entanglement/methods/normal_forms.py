import numpy as np
from loguru import logger

from cv_entanglement.step_01_phase_space.methods.decompositions import williamson
from cv_entanglement.step_01_phase_space.methods.states import two_mode_squeezed_cov
from cv_entanglement.step_01_phase_space.methods.symplectic_form import (
    direct_sum,
    mode_count,
    mode_permutation,
)
from cv_entanglement.step_01_phase_space.methods.validation import (
    PURITY_TOL,
    as_covariance,
    is_pure,
    require_valid,
)
from cv_entanglement.step_02_entanglement.methods.partition import ModePartition, resolve_partition
from cv_entanglement.utils.errors import InfeasibleRequestError, StructuralError

# Below this cross-correlation a mode pair is treated as unsqueezed
_TRIVIAL_CORRELATION = 1e-9


def _split_blocks(gamma, partition):
    P = partition.permutation()
    ordered = P @ gamma @ P.T
    dim_a = 2 * partition.n_a
    return ordered[:dim_a, :dim_a], ordered[dim_a:, dim_a:], ordered[:dim_a, dim_a:]


def local_symplectic(S_A, S_B, partition):
    """S_A (+) S_B in the original mode order of ``partition``."""
    P = partition.permutation()
    return P.T @ direct_sum(S_A, S_B) @ P


def normal_form_target(r):
    # Interleaved order (A1, B1, A2, B2, ...)
    return direct_sum(*[two_mode_squeezed_cov(rk) for rk in np.atleast_1d(r)])


def interleave_permutation(partition):
    """P with P @ v ordered as (A1, B1, A2, B2, ...); needs n_A = n_B."""
    order = []
    for a, b in zip(partition.modes_a, partition.modes_b):
        order += [a, b]
    return mode_permutation(order)


def schmidt_normal_form(gamma, partition=None, purity_tol=PURITY_TOL):
    """Local symplectics bringing a pure n x n state to a product of two-mode squeezed blocks.

    Args:
        gamma: Pure covariance matrix.
        partition: Bipartition with equal mode counts; defaults to the first half
            of the modes on A.
        purity_tol: Admissible deviation of the symplectic eigenvalues from 1.

    Returns:
        ``(S_A, S_B, r)`` with ``r`` descending. S_A acts on ``partition.modes_a``
        and S_B on ``partition.modes_b``, each in ascending mode order; mode k of
        A is paired with mode k of B.

    Raises:
        StructuralError: If the parties hold different numbers of modes.
        InfeasibleRequestError: If the state is mixed.
    """
    gamma = as_covariance(gamma)
    n = mode_count(gamma)
    partition = resolve_partition(partition, n)
    partition.check_dimension(gamma)
    if partition.n_a != partition.n_b:
        raise StructuralError(f"Schmidt normal form needs n_A = n_B, got {partition.n_a}x{partition.n_b}")
    require_valid(gamma)
    if not is_pure(gamma, tol=purity_tol):
        raise InfeasibleRequestError("Schmidt normal form is only defined for pure states")

    m = partition.n_a
    gamma_a, gamma_b, C = _split_blocks(gamma, partition)
    S_A, nu_a = williamson(gamma_a)
    S_B, nu_b = williamson(gamma_b)
    # Pure states have equal local spectra
    nu = np.maximum((nu_a + nu_b) / 2, 1.0)
    correlation = np.sqrt(nu ** 2 - 1.0)

    C_local = S_A @ C @ S_B.T
    active = [k for k in range(m) if correlation[k] > _TRIVIAL_CORRELATION]
    K_B = np.eye(2 * m)
    if active:
        idx = np.ravel([[2 * k, 2 * k + 1] for k in active])
        scale = np.repeat(correlation[active], 2)
        M = C_local[np.ix_(idx, idx)] / scale[:, None]
        # Nearest orthogonal matrix absorbs round-off
        U, _, Vt = np.linalg.svd(M)
        Z = np.diag(np.tile([1.0, -1.0], len(active)))
        K_B[np.ix_(idx, idx)] = Z @ (U @ Vt)

    r = np.arccosh(nu) / 2
    logger.debug(f"Schmidt squeezing parameters {np.round(r, 8).tolist()}")
    return S_A, K_B @ S_B, r


def schmidt_residual(gamma, S_A, S_B, r, partition=None):
    gamma = as_covariance(gamma)
    partition = resolve_partition(partition, mode_count(gamma))
    L = local_symplectic(S_A, S_B, partition)
    Q = interleave_permutation(partition)
    transformed = Q @ L @ gamma @ L.T @ Q.T
    return float(np.max(np.abs(transformed - normal_form_target(r))))


def simon_normal_form(gamma):
    """Standard form of a two-mode covariance matrix under local symplectics.

    Returns ``(S_A, S_B, x1, x2, x3, x4)`` such that (S_A (+) S_B) gamma (S_A (+) S_B)^T
    has diagonal blocks x1*1, x2*1 and off-diagonal block diag(x3, x4) with x3 >= |x4|.
    """
    gamma = as_covariance(gamma)
    if mode_count(gamma) != 2:
        raise StructuralError(f"Simon normal form needs a two-mode state, got {mode_count(gamma)} modes")
    require_valid(gamma)

    gamma_a, gamma_b, C = _split_blocks(gamma, ModePartition.split(1, 1))
    S_A, nu_a = williamson(gamma_a)
    S_B, nu_b = williamson(gamma_b)

    U, s, Vt = np.linalg.svd(S_A @ C @ S_B.T)
    s = s.copy()
    if np.linalg.det(U) < 0:
        U[:, 1] *= -1
        s[1] *= -1
    if np.linalg.det(Vt) < 0:
        Vt[1, :] *= -1
        s[1] *= -1

    return U.T @ S_A, Vt @ S_B, float(nu_a[0]), float(nu_b[0]), float(s[0]), float(s[1])


def simon_form_matrix(x1, x2, x3, x4):
    return np.array([
        [x1, 0.0, x3, 0.0],
        [0.0, x1, 0.0, x4],
        [x3, 0.0, x2, 0.0],
        [0.0, x4, 0.0, x2],
    ])


def symplectic_invariants(gamma):
    """(det gamma_A, det gamma_B, det C, det gamma) of a two-mode state."""
    gamma = as_covariance(gamma)
    if mode_count(gamma) != 2:
        raise StructuralError(f"Local symplectic invariants are defined for two modes, got {mode_count(gamma)}")
    return (
        float(np.linalg.det(gamma[:2, :2])),
        float(np.linalg.det(gamma[2:, 2:])),
        float(np.linalg.det(gamma[:2, 2:])),
        float(np.linalg.det(gamma)),
    )
