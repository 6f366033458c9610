from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from loguru import logger

from cv_entanglement.step_01_phase_space.methods.states import GaussianState
from cv_entanglement.step_01_phase_space.methods.validation import min_uncertainty_eigenvalue
from cv_entanglement.step_04_fock_oracle.methods.bridge import gaussian_density_fock
from cv_entanglement.step_04_fock_oracle.methods.measures import fock_moments, log_negativity_fock, trace_distance
from cv_entanglement.step_05_protocols.step_05b_nongaussian_distillation.methods.first_step import (
    nongaussian_first_step,
)
from cv_entanglement.step_05_protocols.step_05b_nongaussian_distillation.methods.gaussify import gaussify_step
from cv_entanglement.utils.errors import StructuralError


def gaussian_reference(rho):
    """Gaussian density with the first and second moments of rho, at the same cutoff."""
    cov, disp = fock_moments(rho)
    # Truncated quadratures underestimate variances at the cutoff
    cov = cov + max(0.0, -min_uncertainty_eigenvalue(cov)) * np.eye(cov.shape[0])
    return gaussian_density_fock(GaussianState(cov, disp), rho.cutoff)


def gaussianity_distance(rho):
    """Trace distance between rho and its moment-matched Gaussian state."""
    return trace_distance(rho, gaussian_reference(rho))


@dataclass
class DistillationTrace:
    r: float
    V: float
    cutoff: int
    records: list = field(default_factory=list)

    def record(self, iteration, rho):
        cumulative = rho.probability
        if self.records:
            cumulative *= self.records[-1]["cumulative_probability"]
        entry = {
            "iteration": iteration,
            "log_negativity": log_negativity_fock(rho),
            "probability": rho.probability,
            "cumulative_probability": cumulative,
            "gaussianity_distance": gaussianity_distance(rho),
            "tail": rho.tail,
        }
        self.records.append(entry)
        logger.info(
            f"Iteration {iteration}: E_N={entry['log_negativity']:.6f}, p={entry['probability']:.4e}, "
            f"distance={entry['gaussianity_distance']:.4e}"
        )
        return entry

    def to_frame(self):
        columns = ["iteration", "log_negativity", "probability", "cumulative_probability", "gaussianity_distance", "tail"]
        return pd.DataFrame(self.records, columns=columns)

    @property
    def final(self):
        return self.records[-1]


def distill_pipeline(r, V, iterations, cutoff, second_port="vacuum", detector_efficiency=1.0):
    """Non-Gaussian first step followed by ``iterations`` Gaussification rounds."""
    if iterations < 0:
        raise StructuralError(f"iterations must be non-negative, got {iterations}")
    trace = DistillationTrace(r=float(r), V=float(V), cutoff=int(cutoff))
    rho = nongaussian_first_step(r, V, cutoff, second_port=second_port, detector_efficiency=detector_efficiency)
    trace.record(0, rho)
    for iteration in range(1, iterations + 1):
        rho = gaussify_step(rho)
        trace.record(iteration, rho)
    return trace


def tune_first_step(r, V_squared_grid, cutoff, second_port="vacuum", detector_efficiency=1.0):
    """Scan the beam splitter intensity transmissivity V^2; returns the table and the V with the largest E_N."""
    rows = []
    for V_squared in V_squared_grid:
        V = float(np.sqrt(V_squared))
        rho = nongaussian_first_step(r, V, cutoff, second_port=second_port, detector_efficiency=detector_efficiency)
        rows.append({
            "V_squared": float(V_squared),
            "V": V,
            "probability": rho.probability,
            "log_negativity": log_negativity_fock(rho),
        })
    df = pd.DataFrame(rows, columns=["V_squared", "V", "probability", "log_negativity"])
    best_V = float(df.loc[df["log_negativity"].idxmax(), "V"])
    return df, best_V
