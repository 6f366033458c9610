import subprocess
import sys
from pathlib import Path

# Project root on the path so the package imports without installation
PROJECT_ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(PROJECT_ROOT))

from cv_entanglement.cli import run  # noqa: E402

# Define the pipeline steps with custom keys
MODULES = [
    {"key": "01", "name": "MODULE 01 → Validate packaged states", "module": "cv_entanglement.step_01_phase_space.run"},
    {"key": "02", "name": "MODULE 02 → Entanglement tables and GLOCC/LOCC gap", "module": "cv_entanglement.step_02_entanglement.run"},
    {"key": "03", "name": "MODULE 03 → Attenuation sweep and conditioning", "module": "cv_entanglement.step_03_channels.run"},
    {"key": "04", "name": "MODULE 04 → Fock oracle and continuity table", "module": "cv_entanglement.step_04_fock_oracle.run"},
    {"key": "05a", "name": "Submodule 05a → Gaussian no-go Monte Carlo", "module": "cv_entanglement.step_05_protocols.step_05a_gaussian_nogo.run"},
    {"key": "05b", "name": "Submodule 05b → Non-Gaussian distillation", "module": "cv_entanglement.step_05_protocols.step_05b_nongaussian_distillation.run"},
    {"key": "05c", "name": "Submodule 05c → Passive entangling", "module": "cv_entanglement.step_05_protocols.step_05c_passive_entangling.run"},
    {"key": "06", "name": "MODULE 06 → Create report", "module": "cv_entanglement.step_06_report.run"},
]


def run_module(module):
    print(f"\nRunning module: {module['name']}", file=sys.stderr)
    try:
        subprocess.run([sys.executable, "-m", module["module"]], check=True, cwd=PROJECT_ROOT)
        print(f"Finished: {module['name']}", file=sys.stderr)
        return True
    except subprocess.CalledProcessError as e:
        print(f"Error running {module['name']}: {e}", file=sys.stderr)
        return False


def run_pipeline(keys=None):
    selected = [mod for mod in MODULES if keys is None or mod["key"] in keys]
    for mod in selected:
        if not run_module(mod):
            return 1
    print("\nAll modules completed.", file=sys.stderr)
    return 0


if __name__ == "__main__":
    argv = sys.argv[1:]
    if argv and argv[0] == "pipeline":
        # Optional module keys, e.g. "pipeline 01 04"
        sys.exit(run_pipeline(argv[1:] or None))
    sys.exit(run(argv))
