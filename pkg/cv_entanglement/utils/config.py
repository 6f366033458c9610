import os
from pathlib import Path

import yaml
from loguru import logger

from cv_entanglement.utils.paths import get_project_root

SEED_ENV_VAR = "CV_ENTANGLEMENT_SEED"

# Used when a key is missing from master_config.yaml
DEFAULTS = {
    "tolerance_config": {
        "tol_psd": 1e-9,
        "purity_tol": 1e-6,
        "pinv_rcond": 1e-12,
        "symplectic_tol": 1e-9,
    },
    "fock_config": {
        "default_cutoff": 20,
        "oracle_cutoff": 40,
        "tail_warning": 1e-6,
        "oracle_r_values": [0.2, 0.5, 0.8, 1.0],
    },
    "nogo_config": {
        "r": 0.5,
        "trials": 1000,
        "seed": 1234,
        "flow_time": 0.5,
        "n_jobs": 1,
    },
    "distillation_config": {
        "r": 0.3,
        "V_squared_grid": [round(0.05 * k, 2) for k in range(1, 20)],
        "iterations": 2,
        "cutoff": 12,
        "second_port": "vacuum",
        "detector_efficiency": 1.0,
    },
    "passive_config": {
        "restarts": 8,
        "seed": 1234,
        "max_iter": 4000,
        "benchmark_instances": 20,
    },
    "gap_config": {
        "r": 0.5,
        "r_prime_grid": [0.55, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2],
        "cutoff": 60,
    },
    "continuity_config": {
        "k_values": [10, 100, 1000, 10000, 100000, 1000000],
    },
    "channel_config": {
        "r": 0.5,
        "eta_grid": [1.0, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1],
    },
    "report_config": {
        "dpi": 300,
    },
    "logging_config": {
        "level": "INFO",
    },
}


def load_yaml_config(path):
    with open(path, "r", encoding="utf-8") as f:
        return yaml.safe_load(f) or {}


def load_master_config(path=None):
    """Return master_config.yaml merged over the in-code defaults.

    An explicit ``path`` must exist. Without one, the project's
    ``config/master_config.yaml`` is used when it can be found.
    """
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"Config file not found: {path}")
        user_config = load_yaml_config(path)
    else:
        try:
            user_config = load_yaml_config(get_project_root() / "config" / "master_config.yaml")
        except FileNotFoundError:
            logger.debug("No master_config.yaml found, using built-in defaults")
            user_config = {}

    merged = {section: dict(values) for section, values in DEFAULTS.items()}
    for section, values in user_config.items():
        if isinstance(values, dict):
            merged.setdefault(section, {}).update(values)
        else:
            merged[section] = values
    return merged


def default_seed(config, section):
    # Environment wins over the config file
    env_seed = os.environ.get(SEED_ENV_VAR)
    if env_seed is not None:
        try:
            return int(env_seed)
        except ValueError:
            raise ValueError(f"{SEED_ENV_VAR} must be an integer, got '{env_seed}'")
    return int(config.get(section, {}).get("seed", 0))
