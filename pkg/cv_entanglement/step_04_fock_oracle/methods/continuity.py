import numpy as np
import pandas as pd

from cv_entanglement.step_04_fock_oracle.methods.states import FockVector
from cv_entanglement.utils.errors import StructuralError


def continuity_weight(k):
    """epsilon_k = 1 / ln(k)^2, a probability only for k >= 3."""
    if isinstance(k, bool) or int(k) != k or k < 3:
        raise StructuralError(f"Continuity sequence needs an integer k >= 3, got {k}")
    return 1.0 / np.log(float(k)) ** 2


def continuity_demo(k):
    """Closed-form figures of sigma_k = |psi_k><psi_k| with
    psi_k = sqrt(1 - eps)|0,0> + sum_{n=1..k} sqrt(eps/k)|n,n>.

    Returns the trace-norm distance to |0,0>, the entropy of entanglement
    (bits) and the mean photon number per mode.
    """
    eps = continuity_weight(k)
    k = int(k)
    entanglement = eps * np.log2(k / eps)
    if eps < 1.0:
        entanglement -= (1.0 - eps) * np.log2(1.0 - eps)
    return {
        "k": k,
        "epsilon": eps,
        "trace_distance": 2.0 * np.sqrt(eps),
        "entanglement": float(entanglement),
        "mean_energy": eps * (k + 1) / 2.0,
    }


def continuity_table(k_values):
    return pd.DataFrame([continuity_demo(k) for k in k_values])


def continuity_state_fock(k):
    """psi_k as a two-mode Fock vector with cutoff k + 1."""
    eps = continuity_weight(k)
    k = int(k)
    coefficients = np.full(k + 1, np.sqrt(eps / k))
    coefficients[0] = np.sqrt(1.0 - eps)
    return FockVector(np.diag(coefficients).astype(complex))
