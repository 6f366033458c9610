import numpy as np
import pandas as pd
from loguru import logger

from cv_entanglement.utils.errors import InfeasibleRequestError, StructuralError

SPECTRUM_TOL = 1e-9
# Tail mass beyond which a truncated spectrum is not trusted
MAX_TAIL = 1e-8
# Entropy series stop once the remaining mass drops below this
ENTROPY_TAIL = 1e-12
_ORDER_TOL = 1e-12


def _squeezing_vector(r):
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if r.ndim != 1 or not np.all(np.isfinite(r)):
        raise StructuralError(f"Squeezing vector must be a finite list of numbers, got {r}")
    if np.any(r < 0):
        raise StructuralError(f"Squeezing parameters must be non-negative, got {r.tolist()}")
    return r


def _pad_descending(*vectors):
    length = max(len(v) for v in vectors)
    return [np.sort(np.pad(v, (0, length - len(v))))[::-1] for v in vectors]


def tms_schmidt_spectrum(r, cutoff):
    """First ``cutoff`` Schmidt coefficients (1 - t^2) t^(2n), t = tanh r, and the missing tail mass."""
    if cutoff < 1:
        raise StructuralError(f"cutoff must be positive, got {cutoff}")
    t2 = np.tanh(float(r)) ** 2
    coefficients = (1.0 - t2) * t2 ** np.arange(cutoff)
    tail = float(t2 ** cutoff)
    return coefficients, tail


def _geometric_entropy(r):
    t2 = np.tanh(r) ** 2
    if t2 == 0.0:
        return 0.0
    terms = int(np.ceil(np.log(ENTROPY_TAIL) / np.log(t2))) + 1
    coefficients, _ = tms_schmidt_spectrum(r, max(terms, 1))
    coefficients = coefficients[coefficients > 0]
    return float(-np.sum(coefficients * np.log2(coefficients)))


def entropy_of_entanglement_pure(r):
    """Entropy of entanglement (bits) of a product of two-mode squeezed states."""
    r = _squeezing_vector(r)
    return float(sum(_geometric_entropy(rk) for rk in r))


def glocc_convertible(r, r_prime):
    """Gaussian LOCC: r -> r' iff r_k >= r'_k componentwise after sorting."""
    r, r_prime = _pad_descending(_squeezing_vector(r), _squeezing_vector(r_prime))
    return bool(np.all(r >= r_prime - _ORDER_TOL))


def _schmidt_spectrum(alpha, name):
    alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
    if alpha.ndim != 1 or not np.all(np.isfinite(alpha)):
        raise StructuralError(f"{name} must be a finite vector")
    if np.any(alpha < -SPECTRUM_TOL):
        raise StructuralError(f"{name} has negative entries: {alpha.tolist()}")
    if abs(alpha.sum() - 1.0) > SPECTRUM_TOL:
        raise StructuralError(f"{name} is not normalised (sum = {alpha.sum():.12f})")
    return np.clip(alpha, 0.0, None)


def locc_convertible_pure(alpha, alpha_prime):
    """Majorisation test: alpha -> alpha' by LOCC iff every partial sum of alpha is <= that of alpha'."""
    alpha = _schmidt_spectrum(alpha, "Source spectrum")
    alpha_prime = _schmidt_spectrum(alpha_prime, "Target spectrum")
    alpha, alpha_prime = _pad_descending(alpha, alpha_prime)
    return bool(np.all(np.cumsum(alpha) <= np.cumsum(alpha_prime) + _ORDER_TOL))


def locc_convertible_with_catalyst(alpha, alpha_prime, catalyst):
    # alpha (x) omega -> alpha' (x) omega, omega returned untouched
    catalyst = _schmidt_spectrum(catalyst, "Catalyst spectrum")
    alpha = _schmidt_spectrum(alpha, "Source spectrum")
    alpha_prime = _schmidt_spectrum(alpha_prime, "Target spectrum")
    return locc_convertible_pure(np.kron(alpha, catalyst), np.kron(alpha_prime, catalyst))


def glocc_vs_locc_gap(r, r_prime, cutoff=60):
    """Compare rho(r)^(x2) -> rho(r') (x) rho(0) under Gaussian LOCC and under LOCC.

    The LOCC verdict uses spectra truncated at ``cutoff`` Fock levels per copy
    and renormalised.

    Raises:
        InfeasibleRequestError: If either spectrum misses more than MAX_TAIL.
    """
    r, r_prime = float(r), float(r_prime)
    _squeezing_vector([r, r_prime])

    single, tail = tms_schmidt_spectrum(r, cutoff)
    target, target_tail = tms_schmidt_spectrum(r_prime, cutoff)
    two_copy_tail = 1.0 - (1.0 - tail) ** 2
    logger.debug(f"Gap check r={r}, r'={r_prime}: tails {two_copy_tail:.2e}, {target_tail:.2e}")
    if max(two_copy_tail, target_tail) > MAX_TAIL:
        raise InfeasibleRequestError(
            f"cutoff {cutoff} leaves tail mass {max(two_copy_tail, target_tail):.2e} > {MAX_TAIL:g}; increase the cutoff"
        )

    two_copy = np.outer(single, single).ravel()
    return {
        "glocc": glocc_convertible([r, r], [r_prime, 0.0]),
        "locc": locc_convertible_pure(two_copy / two_copy.sum(), target / target.sum()),
    }


def find_locc_gap(r, grid, cutoff=60):
    rows = []
    for r_prime in grid:
        verdict = glocc_vs_locc_gap(r, r_prime, cutoff)
        rows.append({
            "r": float(r),
            "r_prime": float(r_prime),
            "glocc": verdict["glocc"],
            "locc": verdict["locc"],
            "gap": verdict["locc"] and not verdict["glocc"],
        })
    return pd.DataFrame(rows, columns=["r", "r_prime", "glocc", "locc", "gap"])
