from dataclasses import dataclass, field

import numpy as np
from loguru import logger

from cv_entanglement.step_01_phase_space.methods.states import GaussianState
from cv_entanglement.step_01_phase_space.methods.symplectic_form import (
    check_symmetric,
    mode_count,
    symplectic_form,
)
from cv_entanglement.utils.errors import PhysicalityError, StructuralError

TOL_PSD = 1e-9
SYMPLECTIC_TOL = 1e-9
PURITY_TOL = 1e-6


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    min_uncertainty_eigenvalue: float
    symplectic_eigenvalues: list = field(default_factory=list)

    def to_dict(self):
        return {
            "valid": self.valid,
            "min_uncertainty_eigenvalue": self.min_uncertainty_eigenvalue,
            "symplectic_eigenvalues": list(self.symplectic_eigenvalues),
        }


def as_covariance(gamma_or_state):
    if isinstance(gamma_or_state, GaussianState):
        return gamma_or_state.cov
    return np.asarray(gamma_or_state, dtype=float)


def min_uncertainty_eigenvalue(gamma):
    # gamma + i*sigma via its real symmetric embedding [[gamma, -sigma], [sigma, gamma]]
    n = mode_count(gamma)
    sigma = symplectic_form(n)
    embedding = np.block([[gamma, -sigma], [sigma, gamma]])
    return float(np.linalg.eigvalsh(embedding)[0])


def symplectic_eigenvalues(gamma):
    """Moduli of the eigenvalues of i*sigma*gamma, one per mode, descending."""
    gamma = np.asarray(gamma, dtype=float)
    n = mode_count(gamma)
    moduli = np.sort(np.abs(np.linalg.eigvals(1j * symplectic_form(n) @ gamma)))[::-1]
    return moduli[::2]


def validate_covariance(gamma, tol=TOL_PSD):
    """Heisenberg check gamma + i*sigma >= 0.

    Args:
        gamma: Covariance matrix or GaussianState.
        tol: Admissible negative eigenvalue.

    Returns:
        ValidityReport with the witness eigenvalue and the symplectic spectrum.

    Raises:
        StructuralError: If gamma is not square, even-dimensional and symmetric.
    """
    gamma = as_covariance(gamma)
    mode_count(gamma)
    gamma = check_symmetric(gamma, name="Covariance matrix")

    min_eig = min_uncertainty_eigenvalue(gamma)
    nu = symplectic_eigenvalues(gamma)
    logger.debug(f"Uncertainty witness eigenvalue {min_eig:.3e}, symplectic spectrum {np.round(nu, 6).tolist()}")
    return ValidityReport(
        valid=bool(min_eig >= -tol),
        min_uncertainty_eigenvalue=min_eig,
        symplectic_eigenvalues=[float(v) for v in nu],
    )


def require_valid(gamma, tol=TOL_PSD, what="state"):
    report = validate_covariance(gamma, tol=tol)
    if not report.valid:
        raise PhysicalityError(
            f"Invalid {what}: gamma + i*sigma has eigenvalue {report.min_uncertainty_eigenvalue:.6f} < 0",
            witness=report.min_uncertainty_eigenvalue,
        )
    return report


def is_symplectic(S, tol=SYMPLECTIC_TOL):
    S = np.asarray(S, dtype=float)
    n = mode_count(S)
    sigma = symplectic_form(n)

    # Round-off grows with |S|^2
    scale = max(1.0, float(np.linalg.norm(S, 2)) ** 2)
    residual = float(np.max(np.abs(S @ sigma @ S.T - sigma)))
    if residual > tol * scale:
        return False

    sign, logdet = np.linalg.slogdet(S)
    if sign <= 0 or abs(logdet) > 1e-6:
        logger.warning(f"SσSᵀ = σ holds but det S deviates from 1 (log|det| = {logdet:.3e})")
        return False
    return True


def is_passive(S, tol=SYMPLECTIC_TOL):
    S = np.asarray(S, dtype=float)
    if not is_symplectic(S, tol=tol):
        raise StructuralError("is_passive expects a symplectic matrix")
    return bool(np.max(np.abs(S @ S.T - np.eye(S.shape[0]))) <= tol)


def purity(state):
    gamma = as_covariance(state)
    return float(1.0 / np.sqrt(np.linalg.det(gamma)))


def is_pure(state, tol=PURITY_TOL):
    nu = symplectic_eigenvalues(as_covariance(state))
    return bool(np.all(np.abs(nu - 1.0) <= tol))


def is_squeezed(state, tol=1e-12):
    # Squeezed iff some eigenvalue of gamma lies below the vacuum level
    return bool(np.linalg.eigvalsh(as_covariance(state))[0] < 1.0 - tol)
