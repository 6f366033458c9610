from dataclasses import dataclass

import numpy as np
from loguru import logger

from cv_entanglement.step_01_phase_space.methods.states import GaussianState
from cv_entanglement.step_01_phase_space.methods.symplectic_form import (
    check_symmetric,
    direct_sum,
    mode_count,
    symplectic_form,
)
from cv_entanglement.step_01_phase_space.methods.validation import TOL_PSD, is_symplectic, require_valid
from cv_entanglement.step_02_entanglement.methods.partition import resolve_partition
from cv_entanglement.utils.errors import PhysicalityError, StructuralError


@dataclass(frozen=True, eq=False)
class GaussianChannel:
    """gamma -> A gamma A^T + G, d -> A d + shift."""

    A: np.ndarray
    G: np.ndarray
    shift: np.ndarray = None

    def __post_init__(self):
        A = np.array(self.A, dtype=float)
        if A.ndim != 2 or A.shape[0] % 2 or A.shape[1] % 2 or 0 in A.shape:
            raise StructuralError(f"Channel matrix A must be 2n_out x 2n_in, got shape {A.shape}")
        G = np.array(self.G, dtype=float)
        if G.shape != (A.shape[0], A.shape[0]):
            raise StructuralError(f"Noise matrix G must be {A.shape[0]}x{A.shape[0]}, got {G.shape}")
        G = check_symmetric(G, name="Noise matrix G")
        shift = np.zeros(A.shape[0]) if self.shift is None else np.array(self.shift, dtype=float).reshape(-1)
        if shift.shape != (A.shape[0],):
            raise StructuralError(f"Channel shift must have length {A.shape[0]}")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(G)) and np.all(np.isfinite(shift))):
            raise StructuralError("Channel has non-finite entries")

        for name, value in (("A", A), ("G", G), ("shift", shift)):
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    @property
    def n_in(self):
        return self.A.shape[1] // 2

    @property
    def n_out(self):
        return self.A.shape[0] // 2

    def to_dict(self):
        return {"A": self.A.tolist(), "G": self.G.tolist(), "shift": self.shift.tolist()}


@dataclass(frozen=True)
class ChannelReport:
    valid: bool
    min_eigenvalue: float

    def to_dict(self):
        return {"valid": self.valid, "min_eigenvalue": self.min_eigenvalue}


def channel_valid(channel, tol=TOL_PSD):
    """Complete positivity G + i sigma - i A sigma A^T >= 0.

    The Hermitian matrix G + iB, B = sigma - A sigma A^T, is tested through its
    real embedding [[G, -B], [B, G]].
    """
    sigma_out = symplectic_form(channel.n_out)
    sigma_in = symplectic_form(channel.n_in)
    B = sigma_out - channel.A @ sigma_in @ channel.A.T
    embedding = np.block([[channel.G, -B], [B, channel.G]])
    min_eig = float(np.linalg.eigvalsh(embedding)[0])
    logger.debug(f"Channel positivity eigenvalue {min_eig:.3e}")
    return ChannelReport(valid=bool(min_eig >= -tol), min_eigenvalue=min_eig)


def require_valid_channel(channel, tol=TOL_PSD):
    report = channel_valid(channel, tol=tol)
    if not report.valid:
        raise PhysicalityError(
            f"Channel is not completely positive: eigenvalue {report.min_eigenvalue:.6f} < 0",
            witness=report.min_eigenvalue,
        )
    return report


def apply_channel(state, channel):
    if state.n != channel.n_in:
        raise StructuralError(f"Channel acts on {channel.n_in} modes, state has {state.n}")
    require_valid_channel(channel)
    require_valid(state.cov)
    cov = channel.A @ state.cov @ channel.A.T + channel.G
    return GaussianState(cov, channel.A @ state.disp + channel.shift)


def attenuation_channel(eta, n=1):
    """Pure-loss channel of transmissivity eta on n modes."""
    if not 0.0 <= eta <= 1.0:
        raise StructuralError(f"Transmissivity must lie in [0, 1], got {eta}")
    identity = np.eye(2 * n)
    return GaussianChannel(np.sqrt(eta) * identity, (1.0 - eta) * identity)


def unitary_channel(S):
    S = np.asarray(S, dtype=float)
    if not is_symplectic(S):
        raise StructuralError("unitary_channel expects a symplectic matrix")
    return GaussianChannel(S, np.zeros_like(S))


def additive_noise_channel(n, G):
    return GaussianChannel(np.eye(2 * n), G)


def channel_from_dilation(S, n_system, ancilla_cov):
    """Channel obtained by coupling the system to an ancilla through S and discarding the ancilla.

    The system occupies the first ``n_system`` modes of S. Returns A = S_11 and
    G = S_12 gamma_anc S_12^T.
    """
    S = np.asarray(S, dtype=float)
    ancilla_cov = np.asarray(ancilla_cov, dtype=float)
    n_total = mode_count(S)
    n_ancilla = mode_count(ancilla_cov)
    if n_system + n_ancilla != n_total:
        raise StructuralError(f"Dilation acts on {n_total} modes, got {n_system} system + {n_ancilla} ancilla")
    if not is_symplectic(S):
        raise StructuralError("channel_from_dilation expects a symplectic matrix")
    require_valid(ancilla_cov, what="ancilla state")

    dim = 2 * n_system
    S12 = S[:dim, dim:]
    return GaussianChannel(S[:dim, :dim], S12 @ ancilla_cov @ S12.T)


def local_channel(channel_a, channel_b, partition):
    """Channel_A (x) Channel_B acting on the modes of ``partition``."""
    partition = resolve_partition(partition, channel_a.n_in + channel_b.n_in)
    if (channel_a.n_in, channel_b.n_in) != (partition.n_a, partition.n_b):
        raise StructuralError(
            f"Local channels act on {channel_a.n_in}x{channel_b.n_in} modes, partition is {partition.n_a}x{partition.n_b}"
        )
    if channel_a.n_out != channel_a.n_in or channel_b.n_out != channel_b.n_in:
        raise StructuralError("Local channels must preserve the number of modes")

    P = partition.permutation()
    A = P.T @ direct_sum(channel_a.A, channel_b.A) @ P
    G = P.T @ direct_sum(channel_a.G, channel_b.G) @ P
    shift = P.T @ np.concatenate([channel_a.shift, channel_b.shift])
    return GaussianChannel(A, G, shift)


def compose_channels(first, second):
    # second after first
    if second.n_in != first.n_out:
        raise StructuralError(f"Cannot feed {first.n_out} output modes into a {second.n_in}-mode channel")
    A = second.A @ first.A
    G = second.A @ first.G @ second.A.T + second.G
    return GaussianChannel(A, G, second.A @ first.shift + second.shift)


def log_channel_verify(gamma, gamma_prime, channel_a, channel_b, partition=None, tol=1e-8):
    """Check that local channels map gamma onto gamma_prime (a certificate, not a search)."""
    gamma = np.asarray(gamma, dtype=float)
    gamma_prime = np.asarray(gamma_prime, dtype=float)
    if partition is None:
        partition = "A" * channel_a.n_in + "B" * channel_b.n_in
    channel = local_channel(channel_a, channel_b, partition)
    if gamma.shape != (2 * channel.n_in,) * 2 or gamma_prime.shape != (2 * channel.n_out,) * 2:
        raise StructuralError(f"States of shape {gamma.shape}, {gamma_prime.shape} do not fit the local channels")
    require_valid_channel(channel_a)
    require_valid_channel(channel_b)
    image = channel.A @ gamma @ channel.A.T + channel.G
    return bool(np.max(np.abs(image - gamma_prime)) <= tol)
