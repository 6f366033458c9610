from dataclasses import dataclass

import numpy as np

from cv_entanglement.step_01_phase_space.methods.states import GaussianState
from cv_entanglement.step_01_phase_space.methods.symplectic_form import direct_sum, mode_permutation
from cv_entanglement.step_01_phase_space.methods.transformations import phase_rotation
from cv_entanglement.step_01_phase_space.methods.validation import as_covariance, is_symplectic, require_valid
from cv_entanglement.step_03_channels.methods.measurements import homodyne_condition
from cv_entanglement.utils.errors import StructuralError

# (A1, B1, A2, B2) -> (A1, A2, B1, B2)
_PARTY_ORDER = mode_permutation([0, 2, 1, 3])


@dataclass(frozen=True, eq=False)
class GaussianLoccProtocol:
    """Two-copy Gaussian protocol.

    Local symplectics on (A1, A2) and (B1, B2), a homodyne measurement of
    ``quadrature_a``/``quadrature_b`` on A2 and B2 after rotating them by
    ``angle_a``/``angle_b``, then single-mode symplectics on A1 and B1.
    """

    S_A: np.ndarray
    S_B: np.ndarray
    quadrature_a: str = "X"
    quadrature_b: str = "X"
    angle_a: float = 0.0
    angle_b: float = 0.0
    post_A: np.ndarray = None
    post_B: np.ndarray = None

    def __post_init__(self):
        for name, dim in (("S_A", 4), ("S_B", 4), ("post_A", 2), ("post_B", 2)):
            value = getattr(self, name)
            value = np.eye(dim) if value is None else np.array(value, dtype=float)
            if value.shape != (dim, dim):
                raise StructuralError(f"Protocol matrix {name} must be {dim}x{dim}, got {value.shape}")
            if not is_symplectic(value):
                raise StructuralError(f"Protocol matrix {name} is not symplectic")
            object.__setattr__(self, name, value)
        for name in ("quadrature_a", "quadrature_b"):
            quadrature = str(getattr(self, name)).upper()
            if quadrature not in ("X", "P"):
                raise StructuralError(f"Measured quadrature must be 'X' or 'P', got '{quadrature}'")
            object.__setattr__(self, name, quadrature)

    @classmethod
    def identity(cls):
        return cls(np.eye(4), np.eye(4))

    def to_dict(self):
        return {
            "S_A": self.S_A.tolist(),
            "S_B": self.S_B.tolist(),
            "quadrature_a": self.quadrature_a,
            "quadrature_b": self.quadrature_b,
            "angle_a": self.angle_a,
            "angle_b": self.angle_b,
            "post_A": self.post_A.tolist(),
            "post_B": self.post_B.tolist(),
        }


def gaussian_locc_step(gamma_in, protocol, second=None):
    """Run ``protocol`` on gamma_in (x) second and return the A1|B1 covariance matrix.

    ``second`` defaults to a second copy of gamma_in.
    """
    gamma_in = as_covariance(gamma_in)
    second = gamma_in if second is None else as_covariance(second)
    if gamma_in.shape != (4, 4) or second.shape != (4, 4):
        raise StructuralError("gaussian_locc_step works on two-mode states")
    require_valid(gamma_in)
    require_valid(second)

    # Modes ordered (A1, A2, B1, B2)
    gamma = _PARTY_ORDER @ direct_sum(gamma_in, second) @ _PARTY_ORDER.T
    local = direct_sum(protocol.S_A, protocol.S_B)
    rotation = direct_sum(np.eye(2), phase_rotation(protocol.angle_a), np.eye(2), phase_rotation(protocol.angle_b))
    S = rotation @ local
    state = GaussianState(S @ gamma @ S.T)

    state = homodyne_condition(state, 3, protocol.quadrature_b)
    state = homodyne_condition(state, 1, protocol.quadrature_a)

    post = direct_sum(protocol.post_A, protocol.post_B)
    return post @ state.cov @ post.T
