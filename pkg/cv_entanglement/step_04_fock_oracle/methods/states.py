from dataclasses import dataclass

import numpy as np
from loguru import logger

from cv_entanglement.step_04_fock_oracle.methods.operators import check_cutoff, photon_numbers
from cv_entanglement.utils.errors import StructuralError

TAIL_WARNING = 1e-6
HERMITIAN_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class FockVector:
    """Pure state as an amplitude tensor of shape (D,) * modes.

    ``tail`` is the probability mass cut off by the truncation before
    renormalisation.
    """

    amplitudes: np.ndarray
    tail: float = 0.0

    def __post_init__(self):
        amplitudes = np.array(self.amplitudes, dtype=complex)
        if amplitudes.ndim == 0 or len(set(amplitudes.shape)) != 1:
            raise StructuralError(f"Amplitude tensor must have shape (D,)*m, got {amplitudes.shape}")
        check_cutoff(amplitudes.shape[0])
        object.__setattr__(self, "amplitudes", amplitudes)

    @property
    def modes(self):
        return self.amplitudes.ndim

    @property
    def cutoff(self):
        return self.amplitudes.shape[0]

    @property
    def vector(self):
        return self.amplitudes.reshape(-1)

    @property
    def norm(self):
        return float(np.linalg.norm(self.vector))

    def normalized(self):
        return FockVector(self.amplitudes / self.norm, self.tail)

    def density(self):
        v = self.vector
        return FockDensity(np.outer(v, v.conj()), self.modes, self.cutoff, tail=self.tail)


@dataclass(frozen=True, eq=False)
class FockDensity:
    """Density matrix of dimension D**modes in kron order.

    Conditional states may be sub-normalised; ``probability`` records the
    success probability of the branch that produced them.
    """

    matrix: np.ndarray
    modes: int
    cutoff: int
    probability: float = 1.0
    tail: float = 0.0

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=complex)
        dim = self.cutoff ** self.modes
        if matrix.shape != (dim, dim):
            raise StructuralError(f"Density for {self.modes} modes at cutoff {self.cutoff} must be {dim}x{dim}, got {matrix.shape}")
        scale = max(1.0, float(np.max(np.abs(matrix))))
        if np.max(np.abs(matrix - matrix.conj().T)) > HERMITIAN_TOL * scale:
            raise StructuralError("Density matrix is not Hermitian")
        object.__setattr__(self, "matrix", (matrix + matrix.conj().T) / 2)

    @property
    def trace(self):
        return float(np.real(np.trace(self.matrix)))

    def normalized(self):
        trace = self.trace
        if trace <= 0:
            raise StructuralError("Cannot normalise a density with vanishing trace")
        return FockDensity(self.matrix / trace, self.modes, self.cutoff, self.probability, self.tail)

    def tensor(self):
        return self.matrix.reshape((self.cutoff,) * (2 * self.modes))

    @classmethod
    def from_tensor(cls, tensor, probability=1.0, tail=0.0):
        modes = tensor.ndim // 2
        cutoff = tensor.shape[0]
        dim = cutoff ** modes
        return cls(tensor.reshape(dim, dim), modes, cutoff, probability, tail)


@dataclass(frozen=True, eq=False)
class FockOperator:
    matrix: np.ndarray
    modes: int
    cutoff: int

    def apply(self, state):
        return FockVector((self.matrix @ state.vector).reshape(state.amplitudes.shape), state.tail)

    def conjugate(self, density):
        return FockDensity(self.matrix @ density.matrix @ self.matrix.conj().T, density.modes, density.cutoff, density.probability, density.tail)

    def unitarity_error(self, max_photons=None):
        product = self.matrix.conj().T @ self.matrix
        keep = np.ones(product.shape[0], dtype=bool)
        if max_photons is not None:
            keep = photon_numbers(self.modes, self.cutoff) <= max_photons
        block = product[np.ix_(keep, keep)]
        return float(np.max(np.abs(block - np.eye(block.shape[0]))))


def _report_tail(tail, what, threshold=TAIL_WARNING):
    if tail > threshold:
        logger.warning(f"{what}: truncation tail {tail:.2e} exceeds {threshold:g}")
    else:
        logger.debug(f"{what}: truncation tail {tail:.2e}")


def vacuum_fock(modes, cutoff):
    amplitudes = np.zeros((check_cutoff(cutoff),) * modes, dtype=complex)
    amplitudes[(0,) * modes] = 1.0
    return FockVector(amplitudes)


def number_state(k, cutoff):
    if not 0 <= k < cutoff:
        raise StructuralError(f"Number state |{k}> does not fit below cutoff {cutoff}")
    amplitudes = np.zeros(cutoff, dtype=complex)
    amplitudes[k] = 1.0
    return FockVector(amplitudes)


def two_mode_squeezed_fock(r, cutoff, tail_warning=TAIL_WARNING):
    """sqrt(1 - t^2) t^n on |n, n>, t = tanh r; the cosh(2r)/sinh(2r) covariance block."""
    cutoff = check_cutoff(cutoff)
    if r < 0:
        raise StructuralError(f"Squeezing must be non-negative, got {r}")
    t = np.tanh(r)
    coefficients = np.sqrt(1.0 - t ** 2) * t ** np.arange(cutoff)
    tail = float(max(0.0, 1.0 - np.sum(coefficients ** 2)))
    _report_tail(tail, f"two-mode squeezed r={r} at cutoff {cutoff}", tail_warning)

    amplitudes = np.diag(coefficients).astype(complex)
    return FockVector(amplitudes, tail).normalized()
