from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed
from loguru import logger
from tqdm import tqdm

from cv_entanglement.step_01_phase_space.methods.validation import as_covariance, require_valid
from cv_entanglement.step_02_entanglement.methods.ppt import log_negativity_gaussian
from cv_entanglement.step_05_protocols.step_05a_gaussian_nogo.methods.locc_step import gaussian_locc_step
from cv_entanglement.step_05_protocols.step_05a_gaussian_nogo.methods.sampling import random_locc_protocol
from cv_entanglement.utils.errors import StructuralError


@dataclass(frozen=True)
class NoGoResult:
    max_gain: float
    argmax_trial: int
    protocol: object
    gains: np.ndarray

    def to_dict(self):
        return {
            "max_gain": self.max_gain,
            "argmax_trial": self.argmax_trial,
            "trials": int(self.gains.size),
            "mean_gain": float(np.mean(self.gains)),
            "protocol": self.protocol.to_dict(),
        }


def _run_trial(gamma_in, seed_sequence, flow_time, baseline):
    rng = np.random.default_rng(seed_sequence)
    protocol = random_locc_protocol(rng, flow_time)
    gamma_out = gaussian_locc_step(gamma_in, protocol)
    return log_negativity_gaussian(gamma_out) - baseline


def no_go_monte_carlo(gamma_in, trials, seed, flow_time=0.5, n_jobs=1, progress=False):
    """Largest log-negativity gain of random two-copy Gaussian protocols.

    Trial k draws its protocol from the k-th child of SeedSequence(seed), so
    the result does not depend on ``n_jobs``; ties go to the lowest trial index.
    """
    gamma_in = as_covariance(gamma_in)
    if trials < 1:
        raise StructuralError(f"Need at least one trial, got {trials}")
    require_valid(gamma_in)
    baseline = log_negativity_gaussian(gamma_in)

    children = np.random.SeedSequence(seed).spawn(int(trials))
    iterator = tqdm(children, desc="Gaussian protocols", disable=not progress)
    gains = Parallel(n_jobs=n_jobs)(
        delayed(_run_trial)(gamma_in, child, flow_time, baseline) for child in iterator
    )
    gains = np.asarray(gains)

    best = int(np.argmax(gains))
    protocol = random_locc_protocol(np.random.default_rng(children[best]), flow_time)
    logger.info(f"{trials} protocols: max gain {gains[best]:.3e} at trial {best}, mean {gains.mean():.3f}")
    return NoGoResult(float(gains[best]), best, protocol, gains)
