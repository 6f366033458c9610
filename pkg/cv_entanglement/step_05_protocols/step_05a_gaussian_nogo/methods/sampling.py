import numpy as np

from cv_entanglement.step_01_phase_space.methods.transformations import random_hamiltonian, symplectic_from_hamiltonian
from cv_entanglement.step_05_protocols.step_05a_gaussian_nogo.methods.locc_step import GaussianLoccProtocol

QUADRATURES = ("X", "P")


def random_local_symplectic(n, rng, flow_time):
    # g uniform in [-1, 1], symmetric, over all 2n(2n+1)/2 entries
    return symplectic_from_hamiltonian(random_hamiltonian(n, rng), flow_time)


def random_locc_protocol(rng, flow_time=0.5):
    return GaussianLoccProtocol(
        S_A=random_local_symplectic(2, rng, flow_time),
        S_B=random_local_symplectic(2, rng, flow_time),
        quadrature_a=QUADRATURES[rng.integers(2)],
        quadrature_b=QUADRATURES[rng.integers(2)],
        angle_a=float(rng.uniform(0.0, 2 * np.pi)),
        angle_b=float(rng.uniform(0.0, 2 * np.pi)),
        post_A=random_local_symplectic(1, rng, flow_time),
        post_B=random_local_symplectic(1, rng, flow_time),
    )
