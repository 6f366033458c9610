from dataclasses import dataclass

import numpy as np

from cv_entanglement.step_01_phase_space.methods.states import GaussianState, two_mode_squeezed_cov
from cv_entanglement.step_01_phase_space.methods.symplectic_form import (
    check_symmetric,
    direct_sum,
    mode_permutation,
)
from cv_entanglement.step_01_phase_space.methods.validation import TOL_PSD, require_valid, validate_covariance
from cv_entanglement.step_03_channels.methods.channels import require_valid_channel
from cv_entanglement.step_03_channels.methods.measurements import PINV_RCOND
from cv_entanglement.utils.errors import StructuralError

# cosh(2r) ~ 4.4e6
DEFAULT_REFERENCE_SQUEEZING = 8.0


@dataclass(frozen=True, eq=False)
class GaussianCPMap:
    """Gaussian CP map given by a 2n-mode covariance matrix Gamma.

    The first n modes of Gamma form the output block Gamma_1, the last n modes
    the input block Gamma_2 that meets the input state.
    """

    Gamma: np.ndarray
    disp: np.ndarray = None

    def __post_init__(self):
        Gamma = np.array(self.Gamma, dtype=float)
        if Gamma.ndim != 2 or Gamma.shape[0] != Gamma.shape[1] or Gamma.shape[0] == 0 or Gamma.shape[0] % 4:
            raise StructuralError(f"Gamma must be 4n x 4n, got shape {Gamma.shape}")
        Gamma = check_symmetric(Gamma, name="Gamma")
        disp = np.zeros(Gamma.shape[0]) if self.disp is None else np.array(self.disp, dtype=float).reshape(-1)
        if disp.shape != (Gamma.shape[0],):
            raise StructuralError(f"CP map displacement must have length {Gamma.shape[0]}")
        Gamma.setflags(write=False)
        disp.setflags(write=False)
        object.__setattr__(self, "Gamma", Gamma)
        object.__setattr__(self, "disp", disp)

    @property
    def n(self):
        return self.Gamma.shape[0] // 4

    def flipped_blocks(self):
        # Gamma~ = F Gamma F with F reversing the input-block momenta
        dim = 2 * self.n
        flips = np.ones(2 * dim)
        flips[dim + 1::2] = -1.0
        flipped = flips[:, None] * self.Gamma * flips[None, :]
        return flipped[:dim, :dim], flipped[:dim, dim:], flipped[dim:, dim:]


def _positivity_tol(cp_map):
    # Round-off in the positivity test grows with the reference squeezing
    return TOL_PSD * max(1.0, float(np.max(np.abs(cp_map.Gamma))))


def cp_map_valid(cp_map):
    return validate_covariance(cp_map.Gamma, tol=_positivity_tol(cp_map))


def apply_cp_map(state, cp_map, rcond=PINV_RCOND):
    """gamma -> Gamma~_1 - Gamma~_12 (Gamma~_2 + gamma)^(-1) Gamma~_12^T, displacement set to zero."""
    if state.n != cp_map.n:
        raise StructuralError(f"CP map acts on {cp_map.n} modes, state has {state.n}")
    require_valid(cp_map.Gamma, tol=_positivity_tol(cp_map), what="CP map")
    require_valid(state.cov)

    out_block, cross, in_block = cp_map.flipped_blocks()
    kernel = in_block + state.cov
    if np.linalg.cond(kernel) < 1.0 / rcond:
        inverse = np.linalg.inv(kernel)
    else:
        inverse = np.linalg.pinv(kernel, rcond=rcond)
    out = out_block - cross @ inverse @ cross.T
    require_valid(out, tol=_positivity_tol(cp_map), what="CP map output")
    return GaussianState(out)


def cp_map_from_channel(channel, squeezing=DEFAULT_REFERENCE_SQUEEZING):
    """Gamma of ``channel`` applied to one arm of n two-mode squeezed pairs.

    The CP map reproduces the channel up to corrections of order 1/cosh(2 * squeezing).
    """
    if channel.n_in != channel.n_out:
        raise StructuralError("cp_map_from_channel needs a channel with equal input and output modes")
    require_valid_channel(channel)
    n = channel.n_in

    # Pairs (system_k, reference_k) interleaved, then systems first
    paired = direct_sum(*[two_mode_squeezed_cov(squeezing)] * n)
    P = mode_permutation(list(range(0, 2 * n, 2)) + list(range(1, 2 * n, 2)))
    Gamma = P @ paired @ P.T

    A_full = direct_sum(channel.A, np.eye(2 * n))
    G_full = direct_sum(channel.G, np.zeros((2 * n, 2 * n)))
    return GaussianCPMap(A_full @ Gamma @ A_full.T + G_full)
