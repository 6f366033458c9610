from cv_entanglement.step_06_report.methods.overview import compile_overview
from cv_entanglement.step_06_report.methods.plots import (
    plot_attenuation,
    plot_continuity,
    plot_distillation,
    plot_no_go,
    plot_oracle,
)
from cv_entanglement.utils.config import load_master_config
from cv_entanglement.utils.logs import configure_logging
from cv_entanglement.utils.paths import get_project_root, report_output_dir

# Load config
master_config = load_master_config()
dpi = master_config.get("report_config", {}).get("dpi", 300)
log_level = master_config.get("logging_config", {}).get("level", "INFO")

# Base path setup
pipeline_base = get_project_root() / "data" / "pipeline"
protocols_base = pipeline_base / "step_05_protocols"
output_base = report_output_dir()

paths = {
    "summaries": {
        "step_01_phase_space": pipeline_base / "step_01_phase_space" / "summary_step_01.json",
        "step_02_entanglement": pipeline_base / "step_02_entanglement" / "summary_step_02.json",
        "step_04_fock_oracle": pipeline_base / "step_04_fock_oracle" / "summary_step_04.json",
        "step_05a_gaussian_nogo": protocols_base / "step_05a_gaussian_nogo" / "summary_step_05a.json",
        "step_05b_nongaussian_distillation": protocols_base / "step_05b_nongaussian_distillation" / "summary_step_05b.json",
        "step_05c_passive_entangling": protocols_base / "step_05c_passive_entangling" / "summary_step_05c.json",
    },
    "attenuation_csv": pipeline_base / "step_03_channels" / "attenuation_sweep.csv",
    "oracle_csv": pipeline_base / "step_04_fock_oracle" / "oracle_grid.csv",
    "continuity_csv": pipeline_base / "step_04_fock_oracle" / "continuity_table.csv",
    "gains_csv": protocols_base / "step_05a_gaussian_nogo" / "gains.csv",
    "tuning_csv": protocols_base / "step_05b_nongaussian_distillation" / "first_step_tuning.csv",
    "trace_csv": protocols_base / "step_05b_nongaussian_distillation" / "distillation_trace.csv",
    "plots": output_base / "plots",
    "overview_json": output_base / "overview.json",
}


def create_report():
    plot_attenuation(paths["attenuation_csv"], paths["plots"] / "attenuation.png", dpi)
    plot_oracle(paths["oracle_csv"], paths["plots"] / "oracle_negativity.png", dpi)
    plot_continuity(paths["continuity_csv"], paths["plots"] / "continuity.png", dpi)
    plot_no_go(paths["gains_csv"], paths["plots"] / "gaussian_no_go.png", dpi)
    plot_distillation(paths["tuning_csv"], paths["trace_csv"], paths["plots"] / "distillation.png", dpi)

    compile_overview(paths["summaries"], paths["overview_json"])


if __name__ == "__main__":
    configure_logging(log_level)
    create_report()
    print(f"Report generated successfully in {output_base}.")
