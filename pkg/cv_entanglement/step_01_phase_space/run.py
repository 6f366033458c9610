import json

import pandas as pd
from loguru import logger

from cv_entanglement.step_01_phase_space.methods.phase_space import mean_photon_number
from cv_entanglement.step_01_phase_space.methods.validation import (
    is_pure,
    is_squeezed,
    purity,
    validate_covariance,
)
from cv_entanglement.utils.config import load_master_config
from cv_entanglement.utils.errors import CVEntanglementError
from cv_entanglement.utils.logs import configure_logging
from cv_entanglement.utils.paths import list_packaged_states, stage_output_dir
from cv_entanglement.utils.state_files import read_state

# Load config
master_config = load_master_config()
tol_psd = master_config.get("tolerance_config", {}).get("tol_psd", 1e-9)
log_level = master_config.get("logging_config", {}).get("level", "INFO")

output_dir = stage_output_dir("step_01_phase_space")
paths = {
    "states_csv": output_dir / "packaged_states.csv",
    "summary_json": output_dir / "summary_step_01.json",
}


def validate_packaged_states():
    rows = []
    for state_path in list_packaged_states():
        try:
            state = read_state(state_path)
        except CVEntanglementError as e:
            logger.warning(f"Skipping {state_path.name}: {e}")
            continue

        report = validate_covariance(state.cov, tol=tol_psd)
        row = {
            "state": state_path.stem,
            "modes": state.n,
            "valid": report.valid,
            "min_uncertainty_eigenvalue": report.min_uncertainty_eigenvalue,
            "min_symplectic_eigenvalue": min(report.symplectic_eigenvalues),
        }
        if report.valid:
            row.update({
                "purity": purity(state),
                "pure": is_pure(state),
                "squeezed": is_squeezed(state),
                "mean_photon_number": mean_photon_number(state),
            })
        rows.append(row)
        logger.info(f"{state_path.stem}: valid={report.valid}, witness={report.min_uncertainty_eigenvalue:.6f}")

    df = pd.DataFrame(rows)
    df.to_csv(paths["states_csv"], index=False, float_format="%.10g")

    summary = {
        "states": len(rows),
        "valid": int(df["valid"].sum()) if rows else 0,
        "invalid": [row["state"] for row in rows if not row["valid"]],
    }
    with open(paths["summary_json"], "w", encoding="utf-8") as f:
        json.dump(summary, f, indent=2, ensure_ascii=False)
    return summary


if __name__ == "__main__":
    configure_logging(log_level)
    validate_packaged_states()
    print(f"Packaged states validated; results in {output_dir}.")
