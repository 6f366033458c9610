from dataclasses import dataclass

import numpy as np
from loguru import logger

from cv_entanglement.step_01_phase_space.methods.validation import (
    TOL_PSD,
    as_covariance,
    min_uncertainty_eigenvalue,
    require_valid,
    symplectic_eigenvalues,
    validate_covariance,
)
from cv_entanglement.step_02_entanglement.methods.partition import ModePartition, resolve_partition
from cv_entanglement.step_01_phase_space.methods.symplectic_form import direct_sum, mode_count
from cv_entanglement.utils.errors import StructuralError

NPT = "NPT_Entangled"
PPT = "PPT"


@dataclass(frozen=True)
class PptVerdict:
    verdict: str
    min_eigenvalue: float
    conclusive: bool
    note: str

    @property
    def entangled(self):
        return self.verdict == NPT

    def to_dict(self):
        return {"verdict": self.verdict, "min_eigenvalue": self.min_eigenvalue, "conclusive": self.conclusive, "note": self.note}


def partial_transpose_cov(gamma, partition=None):
    """Momentum reversal on party B: F gamma F."""
    gamma = as_covariance(gamma)
    partition = resolve_partition(partition, mode_count(gamma))
    partition.check_dimension(gamma)
    flip = partition.momentum_flip()
    return flip @ gamma @ flip


def ppt_verdict(gamma, partition=None, tol=TOL_PSD):
    gamma = as_covariance(gamma)
    partition = resolve_partition(partition, mode_count(gamma))
    require_valid(gamma, tol=tol)

    min_eig = min_uncertainty_eigenvalue(partial_transpose_cov(gamma, partition))
    if min_eig < -tol:
        return PptVerdict(NPT, min_eig, True, "partial transpose violates the uncertainty relation, the state is entangled")

    if min(partition.n_a, partition.n_b) == 1:
        note = f"{partition.n_a}x{partition.n_b} split: PPT is equivalent to separability"
        return PptVerdict(PPT, min_eig, True, note)
    note = f"{partition.n_a}x{partition.n_b} split: PPT does not exclude bound entanglement"
    return PptVerdict(PPT, min_eig, False, note)


def log_negativity_gaussian(gamma, partition=None):
    """Logarithmic negativity from the symplectic spectrum of the partial transpose.

    E_N = sum_k max(0, -log2 nu~_k).
    """
    gamma = as_covariance(gamma)
    partition = resolve_partition(partition, mode_count(gamma))
    require_valid(gamma)
    nu_tilde = symplectic_eigenvalues(partial_transpose_cov(gamma, partition))
    return float(np.sum(np.maximum(0.0, -np.log2(nu_tilde))))


def separability_witness_verify(gamma, gamma_a, gamma_b, partition=None, tol=TOL_PSD):
    """True iff (gamma_a, gamma_b) certify separability: both valid and gamma >= gamma_a (+) gamma_b."""
    gamma = as_covariance(gamma)
    gamma_a = np.asarray(gamma_a, dtype=float)
    gamma_b = np.asarray(gamma_b, dtype=float)
    n = mode_count(gamma)
    if partition is None:
        partition = ModePartition.split(mode_count(gamma_a), mode_count(gamma_b))
    partition = resolve_partition(partition, n)
    partition.check_dimension(gamma)
    if gamma_a.shape != (2 * partition.n_a, 2 * partition.n_a) or gamma_b.shape != (2 * partition.n_b, 2 * partition.n_b):
        raise StructuralError(
            f"Witness blocks {gamma_a.shape}, {gamma_b.shape} do not match the {partition.n_a}x{partition.n_b} split"
        )
    require_valid(gamma, tol=tol)

    if not (validate_covariance(gamma_a, tol=tol).valid and validate_covariance(gamma_b, tol=tol).valid):
        return False

    P = partition.permutation()
    product = P.T @ direct_sum(gamma_a, gamma_b) @ P
    gap = float(np.linalg.eigvalsh(gamma - product)[0])
    logger.debug(f"Witness gap eigenvalue {gap:.3e}")
    return bool(gap >= -tol)
