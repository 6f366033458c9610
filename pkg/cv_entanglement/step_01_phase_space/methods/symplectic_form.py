import numpy as np
from scipy.linalg import block_diag

from cv_entanglement.utils.errors import StructuralError

# Single-mode block of the symplectic form
OMEGA = np.array([[0.0, 1.0], [-1.0, 0.0]])


def symplectic_form(n):
    """Symplectic form for ``n`` modes in (X1, P1, ..., Xn, Pn) ordering.

    Args:
        n: Number of modes, at least 1.

    Returns:
        The 2n x 2n block-diagonal matrix with blocks [[0, 1], [-1, 0]].

    Raises:
        StructuralError: If ``n`` is not a positive integer.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise StructuralError(f"Mode count must be a positive integer, got {n}")
    return block_diag(*([OMEGA] * int(n)))


def mode_count(matrix):
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise StructuralError(f"Expected a square matrix, got shape {matrix.shape}")
    if matrix.shape[0] == 0 or matrix.shape[0] % 2:
        raise StructuralError(f"Phase-space matrices need a positive even dimension, got {matrix.shape[0]}")
    return matrix.shape[0] // 2


def check_symmetric(matrix, tol=1e-10, name="matrix"):
    matrix = np.asarray(matrix, dtype=float)
    scale = max(1.0, float(np.max(np.abs(matrix))))
    asymmetry = float(np.max(np.abs(matrix - matrix.T)))
    if asymmetry > tol * scale:
        raise StructuralError(f"{name} is not symmetric (max |M - M^T| = {asymmetry:.3e})")
    return (matrix + matrix.T) / 2


def direct_sum(*blocks):
    return block_diag(*[np.asarray(b, dtype=float) for b in blocks])


def mode_permutation(order):
    """Permutation matrix P such that ``P @ v`` lists the quadratures of the modes in ``order``."""
    order = [int(k) for k in order]
    n = len(order)
    if sorted(order) != list(range(n)):
        raise StructuralError(f"Mode order {order} is not a permutation of 0..{n - 1}")

    P = np.zeros((2 * n, 2 * n))
    for new, old in enumerate(order):
        P[2 * new, 2 * old] = 1.0
        P[2 * new + 1, 2 * old + 1] = 1.0
    return P


def mode_selector(modes, n):
    """2k x 2n matrix picking the quadratures of ``modes`` out of an n-mode vector."""
    modes = [int(k) for k in modes]
    if len(set(modes)) != len(modes) or any(k < 0 or k >= n for k in modes):
        raise StructuralError(f"Invalid mode selection {modes} for {n} modes")

    selector = np.zeros((2 * len(modes), 2 * n))
    for row, mode in enumerate(modes):
        selector[2 * row, 2 * mode] = 1.0
        selector[2 * row + 1, 2 * mode + 1] = 1.0
    return selector
