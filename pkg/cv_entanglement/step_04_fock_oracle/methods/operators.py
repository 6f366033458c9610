"""Truncated single- and two-mode operators in the number basis.

Operators that do not conserve photon number are built in a padded space and
cut back to the requested cutoff, so their low-lying matrix elements are
accurate and only the rows near the boundary feel the truncation.
"""

from functools import reduce

import numpy as np
from scipy.linalg import expm, logm

from cv_entanglement.step_01_phase_space.methods.transformations import unitary_from_passive
from cv_entanglement.utils.errors import StructuralError

PADDING = 20


def check_cutoff(cutoff):
    if isinstance(cutoff, bool) or int(cutoff) != cutoff or cutoff < 2:
        raise StructuralError(f"Fock cutoff must be an integer >= 2, got {cutoff}")
    return int(cutoff)


def padded_cutoff(cutoff):
    return max(2 * cutoff, cutoff + PADDING)


def annihilation(cutoff):
    cutoff = check_cutoff(cutoff)
    return np.diag(np.sqrt(np.arange(1, cutoff)), k=1).astype(complex)


def creation(cutoff):
    return annihilation(cutoff).conj().T


def number_operator(cutoff):
    return np.diag(np.arange(check_cutoff(cutoff))).astype(complex)


def quadratures(cutoff):
    # x = (a + a^dag)/sqrt(2), p = -i (a - a^dag)/sqrt(2)
    a = annihilation(cutoff)
    x = (a + a.conj().T) / np.sqrt(2)
    p = -1j * (a - a.conj().T) / np.sqrt(2)
    return x, p


def embed_operator(op, mode, modes, cutoff):
    if not 0 <= mode < modes:
        raise StructuralError(f"Mode {mode} out of range for {modes} modes")
    factors = [np.eye(cutoff, dtype=complex)] * modes
    factors[mode] = np.asarray(op, dtype=complex)
    return reduce(np.kron, factors)


def apply_local(tensor, op, axis):
    """Apply a single-mode operator along one axis of an amplitude or density tensor."""
    return np.moveaxis(np.tensordot(op, tensor, axes=(1, axis)), 0, axis)


def photon_numbers(modes, cutoff):
    # Total photon number of every basis state, in kron order
    grids = np.meshgrid(*[np.arange(cutoff)] * modes, indexing="ij")
    return np.sum(grids, axis=0).reshape(-1)


def restrict_photon_number(U, max_photons, modes, cutoff):
    """Zero every matrix element outside the sectors with at most ``max_photons`` photons."""
    U = np.asarray(U, dtype=complex)
    mask = (photon_numbers(modes, cutoff) <= max_photons).astype(float)
    return mask[:, None] * U * mask[None, :]


def _truncate(op, cutoff):
    return op[:cutoff, :cutoff]


def squeezer_fock(r, cutoff):
    """exp(r (a^dag^2 - a^2) / 2); squeezes the P quadrature for r > 0."""
    cutoff = check_cutoff(cutoff)
    a = annihilation(padded_cutoff(cutoff))
    ad = a.conj().T
    return _truncate(expm(r * (ad @ ad - a @ a) / 2), cutoff)


def weyl_fock(xi, cutoff):
    """Weyl operator exp(i xi^T sigma O) on len(xi)/2 modes.

    Conjugating a state with it shifts the first moments by -xi.
    """
    xi = np.asarray(xi, dtype=float).reshape(-1)
    if xi.size == 0 or xi.size % 2:
        raise StructuralError(f"Phase-space vector needs even length, got {xi.size}")
    cutoff = check_cutoff(cutoff)
    x, p = quadratures(padded_cutoff(cutoff))
    factors = [_truncate(expm(1j * (xi[2 * k] * p - xi[2 * k + 1] * x)), cutoff) for k in range(xi.size // 2)]
    return reduce(np.kron, factors)


def displacement_fock(d, cutoff):
    # Moves the vacuum to first moments d
    return weyl_fock(-np.asarray(d, dtype=float), cutoff)


def beam_splitter_fock(T, R, cutoff):
    """Two-mode beam splitter U = T^n1 exp(-R* a2^dag a1) exp(R a1^dag a2) T^(-n2).

    A single photon in mode k leaves with amplitudes given by column k of
    [[T, R], [-R*, T*]]. The result is exact on the sectors with at most
    cutoff - 1 photons and is restricted to them.
    """
    cutoff = check_cutoff(cutoff)
    T, R = complex(T), complex(R)
    if abs(abs(T) ** 2 + abs(R) ** 2 - 1.0) > 1e-9:
        raise StructuralError(f"Beam splitter needs |T|^2 + |R|^2 = 1, got {abs(T) ** 2 + abs(R) ** 2:.12f}")
    if abs(T) < 1e-12:
        raise StructuralError("Beam splitter formula needs T != 0")

    a = annihilation(cutoff)
    eye = np.eye(cutoff, dtype=complex)
    a1, a2 = np.kron(a, eye), np.kron(eye, a)
    levels = np.arange(cutoff)
    T_n1 = np.kron(np.diag(T ** levels), eye)
    T_minus_n2 = np.kron(eye, np.diag(T ** (-levels)))

    U = T_n1 @ expm(-np.conj(R) * a2.conj().T @ a1) @ expm(R * a1.conj().T @ a2) @ T_minus_n2
    return restrict_photon_number(U, cutoff - 1, 2, cutoff)


def passive_sectors(K, cutoff):
    """Blocks of the number-basis unitary of the passive symplectic K, one per photon-number sector.

    With u = e^(-iH) the unitary on single-photon amplitudes, the operator is
    exp(-i sum_jk H_jk a_j^dag a_k). It conserves the total photon number, so
    each sector N < cutoff is exponentiated on its own. Returns a list of
    (basis indices in kron order, block) pairs.
    """
    cutoff = check_cutoff(cutoff)
    u = unitary_from_passive(K)
    modes = u.shape[0]
    H = 1j * logm(u)
    H = (H + H.conj().T) / 2

    totals = photon_numbers(modes, cutoff)
    occupations = np.array(np.unravel_index(np.arange(cutoff ** modes), (cutoff,) * modes)).T
    sectors = []
    for N in range(cutoff):
        indices = np.flatnonzero(totals == N)
        position = {tuple(occupations[i]): p for p, i in enumerate(indices)}
        generator = np.zeros((len(indices), len(indices)), dtype=complex)
        for col, i in enumerate(indices):
            n = occupations[i]
            for k in np.flatnonzero(n):
                for j in range(modes):
                    target = n.copy()
                    target[k] -= 1
                    target[j] += 1
                    # a_j^dag a_k |n>
                    generator[position[tuple(target)], col] += H[j, k] * np.sqrt(n[k] * target[j])
        sectors.append((indices, expm(-1j * generator)))
    return sectors


def passive_fock(K, cutoff):
    """Dense number-basis unitary of K, zero outside the sectors with at most cutoff - 1 photons."""
    modes = np.asarray(K).shape[0] // 2
    U = np.zeros((cutoff ** modes, cutoff ** modes), dtype=complex)
    for indices, block in passive_sectors(K, cutoff):
        U[np.ix_(indices, indices)] = block
    return U


def click_povm(cutoff, efficiency=1.0):
    """Diagonal of the yes/no detector click element 1 - (1 - eta)^n."""
    if not 0.0 < efficiency <= 1.0:
        raise StructuralError(f"Detector efficiency must lie in (0, 1], got {efficiency}")
    return 1.0 - (1.0 - efficiency) ** np.arange(check_cutoff(cutoff))
