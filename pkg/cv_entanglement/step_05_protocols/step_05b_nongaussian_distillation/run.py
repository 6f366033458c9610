import json

from cv_entanglement.step_01_phase_space.methods.states import two_mode_squeezed
from cv_entanglement.step_02_entanglement.methods.ppt import log_negativity_gaussian
from cv_entanglement.step_05_protocols.step_05b_nongaussian_distillation.methods.pipeline import (
    distill_pipeline,
    tune_first_step,
)
from cv_entanglement.utils.config import load_master_config
from cv_entanglement.utils.logs import configure_logging
from cv_entanglement.utils.paths import stage_output_dir

# Load config
master_config = load_master_config()
distillation_config = master_config.get("distillation_config", {})
r = distillation_config.get("r", 0.3)
V_squared_grid = distillation_config.get("V_squared_grid", [0.5, 0.7, 0.9])
iterations = distillation_config.get("iterations", 2)
cutoff = distillation_config.get("cutoff", 12)
second_port = distillation_config.get("second_port", "vacuum")
detector_efficiency = distillation_config.get("detector_efficiency", 1.0)
log_level = master_config.get("logging_config", {}).get("level", "INFO")

output_dir = stage_output_dir("step_05_protocols", "step_05b_nongaussian_distillation")
paths = {
    "tuning_csv": output_dir / "first_step_tuning.csv",
    "trace_csv": output_dir / "distillation_trace.csv",
    "summary_json": output_dir / "summary_step_05b.json",
}


def run_distillation():
    tuning_df, best_V = tune_first_step(r, V_squared_grid, cutoff, second_port, detector_efficiency)
    tuning_df.to_csv(paths["tuning_csv"], index=False, float_format="%.10g")

    trace = distill_pipeline(r, best_V, iterations, cutoff, second_port, detector_efficiency)
    trace_df = trace.to_frame()
    trace_df.to_csv(paths["trace_csv"], index=False, float_format="%.10g")

    initial = log_negativity_gaussian(two_mode_squeezed(r).cov)
    distances = trace_df["gaussianity_distance"].tolist()
    summary = {
        "r": r,
        "V": best_V,
        "cutoff": cutoff,
        "second_port": second_port,
        "initial_log_negativity": initial,
        "final_log_negativity": trace.final["log_negativity"],
        "distilled": trace.final["log_negativity"] > initial,
        "distance_decreasing": all(b < a for a, b in zip(distances, distances[1:])),
        "cumulative_probability": trace.final["cumulative_probability"],
    }
    with open(paths["summary_json"], "w", encoding="utf-8") as f:
        json.dump(summary, f, indent=2, ensure_ascii=False)
    return summary


if __name__ == "__main__":
    configure_logging(log_level)
    run_distillation()
    print(f"Non-Gaussian distillation completed; results in {output_dir}.")
