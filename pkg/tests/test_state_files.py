import json

import numpy as np
import pytest
from pydantic import ValidationError

from cv_entanglement.step_01_phase_space.methods.states import GaussianState, two_mode_squeezed
from cv_entanglement.utils.config import DEFAULTS, SEED_ENV_VAR, default_seed, load_master_config
from cv_entanglement.utils.errors import StructuralError
from cv_entanglement.utils.state_files import (
    ChannelFile,
    StateFile,
    read_matrix,
    read_state,
    read_state_file,
    read_vector,
    write_state,
)


# --- state files ---

def test_state_round_trip_is_bit_exact(tmp_path, rng):
    noise = rng.normal(size=(4, 4))
    state = GaussianState(two_mode_squeezed(0.37).cov + noise @ noise.T / 7, rng.normal(size=4))
    path = tmp_path / "state.json"
    write_state(state, path, partition="AB")

    loaded = read_state(path)
    assert np.array_equal(loaded.cov, state.cov)
    assert np.array_equal(loaded.disp, state.disp)
    assert read_state_file(path).partition == "AB"


def test_write_state_without_path_returns_text():
    payload = json.loads(write_state(two_mode_squeezed(0.5)))
    assert payload["n"] == 2
    assert payload["gamma"][0][2] == pytest.approx(np.sinh(1.0))


@pytest.mark.parametrize("payload", [
    {"n": 0, "gamma": []},
    {"n": 1, "gamma": [[1.0, 0.0]]},
    {"n": 1, "gamma": [[1.0, 0.0], [0.0, 1.0]], "d": [0.0]},
    {"n": 2, "gamma": np.eye(4).tolist(), "partition": "AC"},
    {"n": 2, "gamma": np.eye(4).tolist(), "partition": "A"},
])
def test_state_file_schema(payload):
    with pytest.raises(ValidationError):
        StateFile.model_validate(payload)


def test_asymmetric_matrix_is_structural():
    state_file = StateFile.model_validate({"n": 1, "gamma": [[1.0, 0.3], [0.0, 1.0]]})
    with pytest.raises(StructuralError):
        state_file.to_state()


def test_channel_file_schema():
    ChannelFile.model_validate({"A": np.eye(2).tolist(), "G": np.zeros((2, 2)).tolist()})
    with pytest.raises(ValidationError):
        ChannelFile.model_validate({"A": np.eye(2).tolist(), "G": np.zeros((4, 4)).tolist()})


def test_read_matrix_and_vector_from_text(tmp_path):
    matrix_path = tmp_path / "gamma.txt"
    matrix_path.write_text("2 0\n0 0.5\n", encoding="utf-8")
    np.testing.assert_array_equal(read_matrix(matrix_path), [[2.0, 0.0], [0.0, 0.5]])

    vector_path = tmp_path / "spectrum.json"
    vector_path.write_text("[0.6, 0.4]", encoding="utf-8")
    np.testing.assert_array_equal(read_vector(vector_path), [0.6, 0.4])

    bad_path = tmp_path / "bad.txt"
    bad_path.write_text("1 x\n", encoding="utf-8")
    with pytest.raises(StructuralError):
        read_matrix(bad_path)


def test_missing_state_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        read_state(tmp_path / "missing.json")


# --- configuration ---

def test_missing_config_raises(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_master_config(tmp_path / "missing.yaml")


def test_partial_config_merges_with_defaults(tmp_path):
    path = tmp_path / "master_config.yaml"
    path.write_text("nogo_config:\n  trials: 10\n", encoding="utf-8")
    config = load_master_config(path)
    assert config["nogo_config"]["trials"] == 10
    assert config["nogo_config"]["seed"] == DEFAULTS["nogo_config"]["seed"]
    assert config["tolerance_config"]["tol_psd"] == 1e-9


def test_packaged_config_loads():
    config = load_master_config()
    assert config["fock_config"]["oracle_cutoff"] == 40
    assert config["distillation_config"]["second_port"] in ("vacuum", "copy")


def test_default_seed_prefers_environment(monkeypatch):
    config = {"nogo_config": {"seed": 5}}
    monkeypatch.delenv(SEED_ENV_VAR, raising=False)
    assert default_seed(config, "nogo_config") == 5
    monkeypatch.setenv(SEED_ENV_VAR, "42")
    assert default_seed(config, "nogo_config") == 42
    monkeypatch.setenv(SEED_ENV_VAR, "abc")
    with pytest.raises(ValueError):
        default_seed(config, "nogo_config")
