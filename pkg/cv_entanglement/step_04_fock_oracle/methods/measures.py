import numpy as np
from scipy.linalg import sqrtm

from cv_entanglement.step_02_entanglement.methods.partition import resolve_partition
from cv_entanglement.step_04_fock_oracle.methods.operators import apply_local, number_operator, quadratures
from cv_entanglement.step_04_fock_oracle.methods.states import FockDensity, FockVector
from cv_entanglement.utils.errors import StructuralError

EIGEN_FLOOR = 1e-15


def as_density(state):
    if isinstance(state, FockVector):
        return state.density()
    if isinstance(state, FockDensity):
        return state
    raise StructuralError(f"Expected a FockVector or FockDensity, got {type(state).__name__}")


def partial_trace(rho, keep):
    """Reduced density on the modes in ``keep`` (kept in ascending order)."""
    rho = as_density(rho)
    keep = sorted(int(k) for k in keep)
    if not keep or any(k < 0 or k >= rho.modes for k in keep) or len(set(keep)) != len(keep):
        raise StructuralError(f"Invalid modes {keep} to keep out of {rho.modes}")
    discard = [k for k in range(rho.modes) if k not in keep]
    m, D = rho.modes, rho.cutoff

    tensor = rho.tensor()
    row_axes = keep + discard
    col_axes = [m + k for k in keep] + [m + k for k in discard]
    tensor = np.transpose(tensor, row_axes + col_axes)
    kept_dim, discarded_dim = D ** len(keep), D ** len(discard)
    tensor = tensor.reshape(kept_dim, discarded_dim, kept_dim, discarded_dim)
    reduced = np.einsum("ajbj->ab", tensor)
    return FockDensity(reduced, len(keep), D, rho.probability, rho.tail)


def partial_transpose_fock(rho, partition=None):
    """Transpose on the B modes; returns the matrix of rho^(T_B)."""
    rho = as_density(rho)
    partition = resolve_partition(partition, rho.modes)
    if partition.n != rho.modes:
        raise StructuralError(f"Partition covers {partition.n} modes, density has {rho.modes}")
    m = rho.modes
    axes = list(range(2 * m))
    for k in partition.modes_b:
        axes[k], axes[m + k] = axes[m + k], axes[k]
    dim = rho.cutoff ** m
    return np.transpose(rho.tensor(), axes).reshape(dim, dim)


def trace_norm(matrix):
    matrix = np.asarray(matrix, dtype=complex)
    if np.allclose(matrix, matrix.conj().T, atol=1e-12):
        return float(np.sum(np.abs(np.linalg.eigvalsh(matrix))))
    return float(np.sum(np.linalg.svd(matrix, compute_uv=False)))


def von_neumann_entropy(rho):
    """-tr[rho log2 rho] of the normalised density."""
    rho = as_density(rho).normalized()
    eigvals = np.linalg.eigvalsh(rho.matrix)
    eigvals = eigvals[eigvals > EIGEN_FLOOR]
    return float(-np.sum(eigvals * np.log2(eigvals)))


def log_negativity_fock(rho, partition=None):
    rho = as_density(rho)
    return float(max(0.0, np.log2(trace_norm(partial_transpose_fock(rho, partition)) / rho.trace)))


def mean_energy_fock(state, weights=None):
    """sum_k weights_k <n_k>; unit weights by default."""
    rho = as_density(state)
    weights = np.ones(rho.modes) if weights is None else np.asarray(weights, dtype=float)
    if weights.shape != (rho.modes,):
        raise StructuralError(f"Need one weight per mode ({rho.modes}), got {weights.shape}")
    number = number_operator(rho.cutoff)
    tensor = rho.tensor()
    energy = 0.0
    for mode, weight in enumerate(weights):
        energy += weight * _expectation(tensor, [(number, mode)], rho.modes)
    return float(np.real(energy) / rho.trace)


def _expectation(tensor, ops, modes):
    # tr[O_1 O_2 ... rho] for single-mode operators acting on the row axes
    for op, mode in reversed(ops):
        tensor = apply_local(tensor, op, mode)
    dim = int(np.sqrt(tensor.size))
    return np.trace(tensor.reshape(dim, dim))


def fock_moments(state):
    """Displacement and covariance matrix (vacuum = identity) measured from a Fock state."""
    rho = as_density(state).normalized()
    m = rho.modes
    x, p = quadratures(rho.cutoff)
    ops = []
    for mode in range(m):
        ops += [(x, mode), (p, mode)]

    tensor = rho.tensor()
    applied = [apply_local(tensor, op, mode) for op, mode in ops]
    dim = rho.cutoff ** m
    disp = np.array([np.real(np.trace(t.reshape(dim, dim))) for t in applied])

    cov = np.zeros((2 * m, 2 * m))
    for j, (op_j, mode_j) in enumerate(ops):
        for k in range(j, 2 * m):
            # tr[O_j O_k rho] + c.c. = <{O_j, O_k}>
            value = np.trace(apply_local(applied[k], op_j, mode_j).reshape(dim, dim))
            cov[j, k] = cov[k, j] = 2 * np.real(value) - 2 * disp[j] * disp[k]
    return cov, disp


def fidelity(first, second):
    """Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2; |<phi|psi>|^2 for pure states."""
    if isinstance(first, FockVector) and isinstance(second, FockVector):
        overlap = np.vdot(first.normalized().vector, second.normalized().vector)
        return float(abs(overlap) ** 2)
    if isinstance(first, FockVector) or isinstance(second, FockVector):
        pure, mixed = (first, second) if isinstance(first, FockVector) else (second, first)
        psi = pure.normalized().vector
        return float(np.real(np.vdot(psi, as_density(mixed).normalized().matrix @ psi)))
    rho = as_density(first).normalized().matrix
    sigma = as_density(second).normalized().matrix
    root = sqrtm(rho)
    return float(np.real(np.trace(sqrtm(root @ sigma @ root))) ** 2)


def trace_distance(first, second):
    rho = as_density(first).normalized()
    sigma = as_density(second).normalized()
    if rho.matrix.shape != sigma.matrix.shape:
        raise StructuralError("States live in different Fock spaces")
    return 0.5 * trace_norm(rho.matrix - sigma.matrix)
