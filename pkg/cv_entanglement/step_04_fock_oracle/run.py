import json

import numpy as np
import pandas as pd
from loguru import logger
from tqdm import tqdm

from cv_entanglement.step_01_phase_space.methods.phase_space import mean_photon_number
from cv_entanglement.step_01_phase_space.methods.states import two_mode_squeezed
from cv_entanglement.step_02_entanglement.methods.convertibility import entropy_of_entanglement_pure
from cv_entanglement.step_02_entanglement.methods.ppt import log_negativity_gaussian
from cv_entanglement.step_04_fock_oracle.methods.continuity import continuity_table
from cv_entanglement.step_04_fock_oracle.methods.measures import (
    fock_moments,
    log_negativity_fock,
    mean_energy_fock,
    partial_trace,
    von_neumann_entropy,
)
from cv_entanglement.step_04_fock_oracle.methods.states import two_mode_squeezed_fock
from cv_entanglement.utils.config import load_master_config
from cv_entanglement.utils.logs import configure_logging
from cv_entanglement.utils.paths import stage_output_dir

# Load config
master_config = load_master_config()
fock_config = master_config.get("fock_config", {})
oracle_cutoff = fock_config.get("oracle_cutoff", 40)
oracle_r_values = fock_config.get("oracle_r_values", [0.2, 0.5, 0.8, 1.0])
tail_warning = fock_config.get("tail_warning", 1e-6)
k_values = master_config.get("continuity_config", {}).get("k_values", [10, 100, 1000])
log_level = master_config.get("logging_config", {}).get("level", "INFO")

output_dir = stage_output_dir("step_04_fock_oracle")
paths = {
    "oracle_csv": output_dir / "oracle_grid.csv",
    "continuity_csv": output_dir / "continuity_table.csv",
    "summary_json": output_dir / "summary_step_04.json",
}


def run_oracle_grid():
    rows = []
    for r in tqdm(oracle_r_values, desc="Fock oracle"):
        gaussian = two_mode_squeezed(r)
        psi = two_mode_squeezed_fock(r, oracle_cutoff, tail_warning=tail_warning)
        cov, _ = fock_moments(psi)
        rows.append({
            "r": r,
            "cutoff": oracle_cutoff,
            "tail": psi.tail,
            "log_negativity_gaussian": log_negativity_gaussian(gaussian.cov),
            "log_negativity_fock": log_negativity_fock(psi),
            "entropy_gaussian": entropy_of_entanglement_pure([r]),
            "entropy_fock": von_neumann_entropy(partial_trace(psi, [0])),
            "mean_photons_gaussian": mean_photon_number(gaussian),
            "mean_photons_fock": mean_energy_fock(psi),
            "covariance_error": float(np.max(np.abs(cov - gaussian.cov))),
        })
    df = pd.DataFrame(rows)
    df["negativity_error"] = (df["log_negativity_gaussian"] - df["log_negativity_fock"]).abs()
    df["entropy_error"] = (df["entropy_gaussian"] - df["entropy_fock"]).abs()
    return df


def run_fock_oracle():
    oracle_df = run_oracle_grid()
    oracle_df.to_csv(paths["oracle_csv"], index=False, float_format="%.10g")
    logger.info(f"Largest negativity deviation {oracle_df['negativity_error'].max():.2e}")

    continuity_df = continuity_table(k_values)
    continuity_df.to_csv(paths["continuity_csv"], index=False, float_format="%.10g")

    summary = {
        "cutoff": oracle_cutoff,
        "max_negativity_error": float(oracle_df["negativity_error"].max()),
        "max_entropy_error": float(oracle_df["entropy_error"].max()),
        "max_covariance_error": float(oracle_df["covariance_error"].max()),
        "continuity_k": [int(k) for k in continuity_df["k"]],
    }
    with open(paths["summary_json"], "w", encoding="utf-8") as f:
        json.dump(summary, f, indent=2, ensure_ascii=False)
    return summary


if __name__ == "__main__":
    configure_logging(log_level)
    run_fock_oracle()
    print(f"Fock oracle grid completed; results in {output_dir}.")
