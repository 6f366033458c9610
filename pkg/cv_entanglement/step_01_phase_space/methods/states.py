from dataclasses import dataclass

import numpy as np

from cv_entanglement.step_01_phase_space.methods.symplectic_form import (
    check_symmetric,
    direct_sum,
    mode_count,
    mode_selector,
)
from cv_entanglement.utils.errors import StructuralError


@dataclass(frozen=True, eq=False)
class GaussianState:
    """First and second moments of an n-mode Gaussian state.

    ``cov`` is normalised so that the vacuum is the identity, ``disp`` holds
    the expectation values of (X1, P1, ..., Xn, Pn). Both arrays are read-only.
    Physical validity is checked by the operations that need it, so that
    invalid files can still be loaded and reported on.
    """

    cov: np.ndarray
    disp: np.ndarray = None

    def __post_init__(self):
        cov = np.array(self.cov, dtype=float)
        n = mode_count(cov)
        if not np.all(np.isfinite(cov)):
            raise StructuralError("Covariance matrix has non-finite entries")
        cov = check_symmetric(cov, name="Covariance matrix")

        if self.disp is None:
            disp = np.zeros(2 * n)
        else:
            disp = np.array(self.disp, dtype=float).reshape(-1)
        if disp.shape != (2 * n,):
            raise StructuralError(f"Displacement must have length {2 * n}, got {disp.shape[0]}")
        if not np.all(np.isfinite(disp)):
            raise StructuralError("Displacement has non-finite entries")

        cov.setflags(write=False)
        disp.setflags(write=False)
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "disp", disp)

    @property
    def n(self):
        return self.cov.shape[0] // 2

    def with_cov(self, cov, disp=None):
        return GaussianState(cov, self.disp if disp is None else disp)

    def to_dict(self):
        return {"n": self.n, "gamma": self.cov.tolist(), "d": self.disp.tolist()}


def vacuum(n=1):
    return GaussianState(np.eye(2 * n))


def thermal(mean_photons):
    # Symplectic eigenvalue of a thermal mode is 2*nbar + 1
    mean_photons = np.atleast_1d(np.asarray(mean_photons, dtype=float))
    if np.any(mean_photons < 0):
        raise StructuralError(f"Mean photon numbers must be non-negative, got {mean_photons.tolist()}")
    return GaussianState(np.diag(np.repeat(2 * mean_photons + 1, 2)))


def squeezed_vacuum(r, angle=0.0):
    rotation = np.array([[np.cos(angle), np.sin(angle)], [-np.sin(angle), np.cos(angle)]])
    core = np.diag([np.exp(2 * r), np.exp(-2 * r)])
    return GaussianState(rotation @ core @ rotation.T)


def two_mode_squeezed_cov(r):
    c, s = np.cosh(2 * r), np.sinh(2 * r)
    return np.array([
        [c, 0.0, s, 0.0],
        [0.0, c, 0.0, -s],
        [s, 0.0, c, 0.0],
        [0.0, -s, 0.0, c],
    ])


def two_mode_squeezed(r):
    return GaussianState(two_mode_squeezed_cov(r))


def coherent(disp):
    disp = np.asarray(disp, dtype=float).reshape(-1)
    return GaussianState(np.eye(disp.shape[0]), disp)


def product_state(*states):
    cov = direct_sum(*[s.cov for s in states])
    disp = np.concatenate([s.disp for s in states])
    return GaussianState(cov, disp)


def reduced_state(state, modes):
    selector = mode_selector(modes, state.n)
    return GaussianState(selector @ state.cov @ selector.T, selector @ state.disp)
