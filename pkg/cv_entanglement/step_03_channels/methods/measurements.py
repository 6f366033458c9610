from dataclasses import dataclass

import numpy as np
from loguru import logger

from cv_entanglement.step_01_phase_space.methods.states import GaussianState
from cv_entanglement.step_01_phase_space.methods.symplectic_form import mode_permutation
from cv_entanglement.step_01_phase_space.methods.validation import TOL_PSD, require_valid
from cv_entanglement.utils.errors import StructuralError

PINV_RCOND = 1e-12

HOMODYNE_PROJECTORS = {
    "X": np.diag([1.0, 0.0]),
    "P": np.diag([0.0, 1.0]),
}


@dataclass(frozen=True)
class ConditionalState:
    state: GaussianState
    probability: float
    note: str

    def to_dict(self):
        return {**self.state.to_dict(), "probability": self.probability, "note": self.note}


def _split_measured(state, mode):
    n = state.n
    if isinstance(mode, bool) or int(mode) != mode or not 0 <= mode < n:
        raise StructuralError(f"Mode index {mode} out of range for {n} modes")
    if n < 2:
        raise StructuralError("Conditioning needs at least one unmeasured mode")
    mode = int(mode)

    order = [k for k in range(n) if k != mode] + [mode]
    P = mode_permutation(order)
    cov = P @ state.cov @ P.T
    disp = P @ state.disp
    dim = 2 * (n - 1)
    return cov[:dim, :dim], cov[dim:, dim:], cov[:dim, dim:], disp[dim:]


def _conditional_state(cov, state, what):
    # Round-off in the Schur complement scales with the input entries
    tol = TOL_PSD * max(1.0, float(np.max(np.abs(state.cov))))
    require_valid(cov, tol=tol, what=what)
    return GaussianState(cov)


def vacuum_success_probability(state, mode):
    """Probability of finding ``mode`` in the vacuum."""
    _, B, _, d_b = _split_measured(state, mode)
    shifted = B + np.eye(2)
    return float(2.0 / np.sqrt(np.linalg.det(shifted)) * np.exp(-d_b @ np.linalg.solve(shifted, d_b)))


def vacuum_project(state, mode):
    """Condition on the vacuum outcome of ``mode``; returns the state of the other modes.

    Covariance A - C (B + 1)^(-1) C^T. The conditional displacement is set to zero.
    """
    require_valid(state.cov)
    A, B, C, _ = _split_measured(state, mode)
    cov = A - C @ np.linalg.solve(B + np.eye(2), C.T)
    probability = vacuum_success_probability(state, mode)
    logger.debug(f"Vacuum projection of mode {mode}: success probability {probability:.6g}")
    note = f"vacuum outcome on mode {mode} with probability {probability:.6f}"
    return ConditionalState(_conditional_state(cov, state, "vacuum-projected state"), probability, note)


def homodyne_condition(state, mode, quadrature="X", rcond=PINV_RCOND):
    """Condition on a homodyne measurement of ``quadrature`` on ``mode``.

    Covariance A - C (pi B pi)^+ C^T with the Moore-Penrose inverse. It does not
    depend on the outcome, so no outcome argument exists; the displacement is
    set to zero.
    """
    key = str(quadrature).upper()
    if key not in HOMODYNE_PROJECTORS:
        raise StructuralError(f"Quadrature must be 'X' or 'P', got '{quadrature}'")
    require_valid(state.cov)
    A, B, C, _ = _split_measured(state, mode)
    projector = HOMODYNE_PROJECTORS[key]
    cov = A - C @ np.linalg.pinv(projector @ B @ projector, rcond=rcond) @ C.T
    return _conditional_state(cov, state, "homodyne-conditioned state")
