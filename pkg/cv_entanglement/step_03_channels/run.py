import json

import numpy as np
import pandas as pd
from loguru import logger
from tqdm import tqdm

from cv_entanglement.step_01_phase_space.methods.states import two_mode_squeezed
from cv_entanglement.step_02_entanglement.methods.ppt import log_negativity_gaussian, ppt_verdict
from cv_entanglement.step_03_channels.methods.channels import (
    GaussianChannel,
    apply_channel,
    attenuation_channel,
    local_channel,
)
from cv_entanglement.step_03_channels.methods.measurements import homodyne_condition, vacuum_project
from cv_entanglement.utils.config import load_master_config
from cv_entanglement.utils.logs import configure_logging
from cv_entanglement.utils.paths import stage_output_dir

# Load config
master_config = load_master_config()
channel_config = master_config.get("channel_config", {})
r = channel_config.get("r", 0.5)
eta_grid = channel_config.get("eta_grid", [1.0, 0.8, 0.6, 0.4, 0.2])
log_level = master_config.get("logging_config", {}).get("level", "INFO")

output_dir = stage_output_dir("step_03_channels")
paths = {
    "attenuation_csv": output_dir / "attenuation_sweep.csv",
    "conditioning_json": output_dir / "conditioning_step_03.json",
}

IDENTITY = GaussianChannel(np.eye(2), np.zeros((2, 2)))


def sweep_attenuation():
    state = two_mode_squeezed(r)
    rows = []
    for eta in tqdm(eta_grid, desc="Attenuation sweep"):
        loss = attenuation_channel(eta)
        one_arm = apply_channel(state, local_channel(IDENTITY, loss, "AB"))
        both_arms = apply_channel(state, local_channel(loss, loss, "AB"))
        rows.append({
            "r": r,
            "eta": eta,
            "log_negativity_one_arm": log_negativity_gaussian(one_arm.cov),
            "log_negativity_both_arms": log_negativity_gaussian(both_arms.cov),
            "verdict_both_arms": ppt_verdict(both_arms.cov).verdict,
        })
    return pd.DataFrame(rows)


def condition_two_mode_squeezed():
    state = two_mode_squeezed(r)
    projected = vacuum_project(state, 1)
    homodyne_x = homodyne_condition(state, 1, "X")
    homodyne_p = homodyne_condition(state, 1, "P")
    return {
        "r": r,
        "vacuum_projection": {"gamma": projected.state.cov.tolist(), "probability": projected.probability},
        "homodyne_X": homodyne_x.cov.tolist(),
        "homodyne_P": homodyne_p.cov.tolist(),
    }


def run_channel_sweep():
    df = sweep_attenuation()
    df.to_csv(paths["attenuation_csv"], index=False, float_format="%.10g")
    logger.info(f"Attenuation sweep over {len(df)} transmissivities written")

    with open(paths["conditioning_json"], "w", encoding="utf-8") as f:
        json.dump(condition_two_mode_squeezed(), f, indent=2, ensure_ascii=False)


if __name__ == "__main__":
    configure_logging(log_level)
    run_channel_sweep()
    print(f"Channel sweep completed; results in {output_dir}.")
