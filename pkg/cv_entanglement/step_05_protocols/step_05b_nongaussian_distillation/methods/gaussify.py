import numpy as np
from loguru import logger

from cv_entanglement.step_04_fock_oracle.methods.operators import beam_splitter_fock
from cv_entanglement.step_04_fock_oracle.methods.states import TAIL_WARNING, FockDensity
from cv_entanglement.utils.errors import InfeasibleRequestError, StructuralError

MAX_TAIL = 1e-3


def resize_density(rho, cutoff):
    """Truncate or zero-pad a density to ``cutoff`` levels per mode."""
    if cutoff == rho.cutoff:
        return rho
    tensor = rho.tensor()
    if cutoff < rho.cutoff:
        resized = tensor[(slice(0, cutoff),) * tensor.ndim]
    else:
        resized = np.zeros((cutoff,) * tensor.ndim, dtype=complex)
        resized[(slice(0, rho.cutoff),) * tensor.ndim] = tensor
    return FockDensity.from_tensor(resized, rho.probability, rho.tail)


def vacuum_output_map(cutoff):
    """V[a, x1, x2] = <a, 0| U |x1, x2> for the 50:50 beam splitter."""
    U = beam_splitter_fock(1 / np.sqrt(2), 1 / np.sqrt(2), cutoff).reshape((cutoff,) * 4)
    return U[:, 0, :, :]


def _local_photon_tail(rho, cutoff):
    # Mass of two copies with cutoff or more photons on one side
    populations = np.real(np.diag(rho.matrix)).reshape(cutoff, cutoff)
    tail = 0.0
    for marginal in (populations.sum(axis=1), populations.sum(axis=0)):
        total = np.convolve(marginal, marginal)
        tail += float(np.sum(total[cutoff:]))
    return tail


def gaussify_step(rho, cutoff=None, max_tail=MAX_TAIL):
    """One Gaussification round on two copies of ``rho``.

    Each party mixes its two modes on a 50:50 beam splitter and keeps the state
    when the second output is found in the vacuum. Returns the normalised
    two-mode density with the success probability of this round.
    """
    if rho.modes != 2:
        raise StructuralError(f"gaussify_step works on two-mode densities, got {rho.modes} modes")
    if cutoff is not None:
        rho = resize_density(rho, cutoff)
    rho = rho.normalized()
    D = rho.cutoff

    tail = _local_photon_tail(rho, D)
    if tail > max_tail:
        raise InfeasibleRequestError(f"Gaussification at cutoff {D} loses {tail:.2e} > {max_tail:g}; increase the cutoff")
    if tail > TAIL_WARNING:
        logger.warning(f"Gaussification at cutoff {D}: truncation tail {tail:.2e}")

    V = vacuum_output_map(D)
    t = rho.tensor()
    # out[a, b, c, d] = V[a,i,j] V[b,k,l] rho[i,k,m,n] rho[j,l,o,p] V*[c,m,o] V*[d,n,p]
    out = np.einsum("aij,bkl,ikmn,jlop,cmo,dnp->abcd", V, V, t, t, V.conj(), V.conj(), optimize=True)
    matrix = out.reshape(D * D, D * D)
    probability = float(np.real(np.trace(matrix)))
    if probability <= 1e-14:
        raise InfeasibleRequestError("Gaussification never heralds the vacuum outcome")
    return FockDensity(matrix / probability, 2, D, probability=probability, tail=rho.tail + tail)
