# cv_entanglement/utils/paths.py

from pathlib import Path


def get_project_root():
    # Find project root (where 'config/master_config.yaml' exists)
    current = Path(__file__).resolve()
    while current != current.parent:
        if (current / "config" / "master_config.yaml").exists():
            return current
        current = current.parent
    raise FileNotFoundError("Could not find 'config/master_config.yaml' from current script location.")


def get_packaged_state(name):
    state_dir = get_project_root() / "data" / "input" / "states"
    state_files = list(state_dir.glob(f"{name}.json"))
    if len(state_files) != 1:
        raise FileNotFoundError(f"Expected exactly one state file '{name}.json' in {state_dir}, but found {len(state_files)}.")

    return state_files[0]


def list_packaged_states():
    state_dir = get_project_root() / "data" / "input" / "states"
    return sorted(state_dir.glob("*.json"))


def stage_output_dir(stage, *parts):
    output_dir = get_project_root() / "data" / "pipeline" / stage
    output_dir = output_dir.joinpath(*parts)
    output_dir.mkdir(parents=True, exist_ok=True)
    return output_dir


def report_output_dir(*parts):
    output_dir = get_project_root() / "data" / "output" / "report"
    output_dir = output_dir.joinpath(*parts)
    output_dir.mkdir(parents=True, exist_ok=True)
    return output_dir
