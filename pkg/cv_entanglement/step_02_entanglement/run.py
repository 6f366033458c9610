import json

import numpy as np
import pandas as pd
from loguru import logger

from cv_entanglement.step_01_phase_space.methods.states import GaussianState, two_mode_squeezed
from cv_entanglement.step_01_phase_space.methods.validation import is_pure, validate_covariance
from cv_entanglement.step_02_entanglement.methods.convertibility import (
    entropy_of_entanglement_pure,
    find_locc_gap,
)
from cv_entanglement.step_02_entanglement.methods.normal_forms import schmidt_normal_form, simon_normal_form
from cv_entanglement.step_02_entanglement.methods.ppt import log_negativity_gaussian, ppt_verdict
from cv_entanglement.utils.config import load_master_config
from cv_entanglement.utils.errors import CVEntanglementError
from cv_entanglement.utils.logs import configure_logging
from cv_entanglement.utils.paths import list_packaged_states, stage_output_dir
from cv_entanglement.utils.state_files import read_state_file

# Load config
master_config = load_master_config()
gap_config = master_config.get("gap_config", {})
gap_r = gap_config.get("r", 0.5)
gap_grid = gap_config.get("r_prime_grid", [0.6, 0.8, 1.0, 1.2])
gap_cutoff = gap_config.get("cutoff", 60)
log_level = master_config.get("logging_config", {}).get("level", "INFO")

output_dir = stage_output_dir("step_02_entanglement")
paths = {
    "entanglement_csv": output_dir / "entanglement_table.csv",
    "tms_csv": output_dir / "two_mode_squeezed_sweep.csv",
    "gap_csv": output_dir / "glocc_locc_gap.csv",
    "summary_json": output_dir / "summary_step_02.json",
}


def tabulate_packaged_states():
    rows = []
    for state_path in list_packaged_states():
        state_file = read_state_file(state_path)
        state = state_file.to_state()
        if state.n < 2 or not validate_covariance(state.cov).valid:
            continue
        partition = state_file.partition
        verdict = ppt_verdict(state.cov, partition)
        row = {
            "state": state_path.stem,
            "partition": partition or "",
            "verdict": verdict.verdict,
            "conclusive": verdict.conclusive,
            "log_negativity": log_negativity_gaussian(state.cov, partition),
        }
        if state.n == 2:
            _, _, x1, x2, x3, x4 = simon_normal_form(state.cov)
            row.update({"x1": x1, "x2": x2, "x3": x3, "x4": x4})
        if state.n % 2 == 0 and is_pure(state):
            try:
                _, _, r = schmidt_normal_form(state.cov, partition)
                row["schmidt_r"] = " ".join(f"{rk:.6f}" for rk in r)
                row["entropy_of_entanglement"] = entropy_of_entanglement_pure(r)
            except CVEntanglementError as e:
                logger.warning(f"{state_path.stem}: no Schmidt form ({e})")
        rows.append(row)
    return pd.DataFrame(rows)


def sweep_two_mode_squeezing(r_values):
    rows = []
    for r in r_values:
        state = two_mode_squeezed(r)
        noisy = GaussianState(state.cov + 0.2 * np.eye(4))
        rows.append({
            "r": r,
            "log_negativity": log_negativity_gaussian(state.cov),
            "entropy_of_entanglement": entropy_of_entanglement_pure([r]),
            "log_negativity_with_noise": log_negativity_gaussian(noisy.cov),
        })
    return pd.DataFrame(rows)


def run_entanglement_analysis():
    entanglement_df = tabulate_packaged_states()
    entanglement_df.to_csv(paths["entanglement_csv"], index=False, float_format="%.10g")

    tms_df = sweep_two_mode_squeezing(np.round(np.linspace(0.0, 2.0, 21), 3))
    tms_df.to_csv(paths["tms_csv"], index=False, float_format="%.10g")

    gap_df = find_locc_gap(gap_r, gap_grid, gap_cutoff)
    gap_df.to_csv(paths["gap_csv"], index=False)
    gap_rows = gap_df[gap_df["gap"]]
    logger.info(f"GLOCC/LOCC gap at r={gap_r}: {len(gap_rows)} of {len(gap_df)} grid points")

    summary = {
        "states_analysed": len(entanglement_df),
        "gap_r": gap_r,
        "gap_r_prime": gap_rows["r_prime"].tolist(),
    }
    with open(paths["summary_json"], "w", encoding="utf-8") as f:
        json.dump(summary, f, indent=2, ensure_ascii=False)
    return summary


if __name__ == "__main__":
    configure_logging(log_level)
    run_entanglement_analysis()
    print(f"Entanglement analysis completed; results in {output_dir}.")
