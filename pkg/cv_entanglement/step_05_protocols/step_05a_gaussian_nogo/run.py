import json

import pandas as pd

from cv_entanglement.step_01_phase_space.methods.states import two_mode_squeezed
from cv_entanglement.step_05_protocols.step_05a_gaussian_nogo.methods.no_go import no_go_monte_carlo
from cv_entanglement.utils.config import default_seed, load_master_config
from cv_entanglement.utils.logs import configure_logging
from cv_entanglement.utils.paths import stage_output_dir

# Load config
master_config = load_master_config()
nogo_config = master_config.get("nogo_config", {})
r = nogo_config.get("r", 0.5)
trials = nogo_config.get("trials", 1000)
flow_time = nogo_config.get("flow_time", 0.5)
n_jobs = nogo_config.get("n_jobs", 1)
seed = default_seed(master_config, "nogo_config")
log_level = master_config.get("logging_config", {}).get("level", "INFO")

output_dir = stage_output_dir("step_05_protocols", "step_05a_gaussian_nogo")
paths = {
    "gains_csv": output_dir / "gains.csv",
    "summary_json": output_dir / "summary_step_05a.json",
}


def run_no_go():
    result = no_go_monte_carlo(two_mode_squeezed(r).cov, trials, seed, flow_time=flow_time, n_jobs=n_jobs, progress=True)
    pd.DataFrame({"trial": range(len(result.gains)), "gain": result.gains}).to_csv(
        paths["gains_csv"], index=False, float_format="%.12g"
    )

    summary = {"r": r, "seed": seed, "flow_time": flow_time, **result.to_dict()}
    with open(paths["summary_json"], "w", encoding="utf-8") as f:
        json.dump(summary, f, indent=2, ensure_ascii=False)
    return result


if __name__ == "__main__":
    configure_logging(log_level)
    run_no_go()
    print(f"Gaussian protocol Monte Carlo completed; results in {output_dir}.")
