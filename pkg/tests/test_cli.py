import json
from pathlib import Path

import numpy as np
import pytest

from cv_entanglement.cli import run
from cv_entanglement.utils.config import SEED_ENV_VAR
from cv_entanglement.utils.state_files import read_state

STATES = Path(__file__).resolve().parent.parent / "data" / "input" / "states"


def state(name):
    return str(STATES / f"{name}.json")


def test_negativity_of_vacuum(capsys):
    assert run(["negativity", state("vacuum")]) == 0
    assert capsys.readouterr().out == "0.000000\n"


def test_negativity_of_two_mode_squeezed(capsys):
    assert run(["negativity", state("tms_r0.5")]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(1 / np.log(2), abs=1e-6)


def test_validate_reports_witness_and_exits_2(capsys):
    assert run(["validate", state("invalid_half")]) == 2
    captured = capsys.readouterr()
    assert "valid\tFalse" in captured.out
    assert "-0.500000" in captured.out
    assert "-0.500000" in captured.err


def test_validate_valid_state(capsys):
    assert run(["validate", state("thermal_n1")]) == 0
    out = capsys.readouterr().out
    assert out.startswith("valid\tTrue")
    assert "nu_0\t3.000000" in out


def test_other_commands_refuse_unphysical_state():
    assert run(["negativity", state("invalid_half")]) == 2


def test_separability_verdict(capsys):
    assert run(["separability", state("tms_r0.5")]) == 0
    assert "NPT_Entangled" in capsys.readouterr().out


def test_schmidt_of_pure_and_mixed_states(capsys):
    assert run(["schmidt", state("tms_r0.5")]) == 0
    assert capsys.readouterr().out.splitlines() == ["pair\tr", "0\t0.500000"]
    assert run(["schmidt", state("tms_r0.5_lossy")]) == 3


def test_malformed_inputs_exit_1(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{ not json", encoding="utf-8")
    wrong_shape = tmp_path / "wrong_shape.json"
    wrong_shape.write_text(json.dumps({"n": 2, "gamma": [[1.0, 0.0], [0.0, 1.0]]}), encoding="utf-8")

    assert run(["negativity", str(broken)]) == 1
    assert run(["negativity", str(wrong_shape)]) == 1
    assert run(["negativity", str(tmp_path / "missing.json")]) == 1
    assert run(["teleport", state("vacuum")]) == 1
    assert run(["negativity", state("tms_r0.5"), "--partition", "AC"]) == 1


def test_nogo_is_deterministic(capsys):
    args = ["distill", "nogo", state("tms_r0.5"), "--trials", "5", "--seed", "3"]
    assert run(args) == 0
    first = capsys.readouterr().out
    assert run(args) == 0
    assert capsys.readouterr().out == first
    assert first.splitlines()[0] == "trials\tmax_gain\targmax_trial\tmean_gain"


def test_nogo_reads_seed_from_environment(capsys, monkeypatch):
    assert run(["distill", "nogo", state("tms_r0.5"), "--trials", "5", "--seed", "3"]) == 0
    explicit = capsys.readouterr().out

    monkeypatch.setenv(SEED_ENV_VAR, "3")
    assert run(["distill", "nogo", state("tms_r0.5"), "--trials", "5"]) == 0
    assert capsys.readouterr().out == explicit


def test_channel_apply_writes_state(tmp_path):
    output = tmp_path / "lossy.json"
    assert run(["channel", "apply", state("tms_r0.5"), "--attenuation", "0.5", "--output", str(output)]) == 0
    lossy = read_state(output)
    np.testing.assert_allclose(lossy.cov, read_state(state("tms_r0.5_lossy")).cov, atol=1e-12)


def test_channel_apply_from_file(tmp_path):
    channel = tmp_path / "amplifier.json"
    channel.write_text(json.dumps({"A": [[1.5, 0.0], [0.0, 1.5]], "G": [[0.0, 0.0], [0.0, 0.0]]}), encoding="utf-8")
    assert run(["channel", "apply", state("squeezed_r0.5"), "--file", str(channel)]) == 2


def test_measure_homodyne(capsys):
    assert run(["measure", state("tms_r0.5"), "--mode", "1", "--homodyne", "X"]) == 0
    payload = json.loads(capsys.readouterr().out)
    np.testing.assert_allclose(payload["gamma"], np.diag([1 / np.cosh(1.0), np.cosh(1.0)]), atol=1e-10)


def test_measure_vacuum(capsys):
    assert run(["measure", state("tms_r0.5"), "--mode", "0", "--vacuum"]) == 0
    payload = json.loads(capsys.readouterr().out)
    np.testing.assert_allclose(payload["gamma"], np.eye(2), atol=1e-12)


def test_demo_continuity(capsys):
    assert run(["demo", "continuity", "--kmax", "1000"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "k\ttrace_distance\tentanglement\tmean_energy"
    assert [line.split("\t")[0] for line in lines[1:]] == ["10", "100", "1000"]


def test_convert_with_catalyst(tmp_path, capsys):
    files = {}
    for name, values in (("alpha", [0.4, 0.4, 0.1, 0.1]), ("alpha_prime", [0.5, 0.25, 0.25, 0.0]), ("catalyst", [0.6, 0.4])):
        files[name] = tmp_path / f"{name}.txt"
        files[name].write_text(" ".join(str(v) for v in values), encoding="utf-8")

    args = ["convert", "--locc", str(files["alpha"]), str(files["alpha_prime"]), "--catalyst", str(files["catalyst"])]
    assert run(args) == 0
    assert capsys.readouterr().out.splitlines() == ["locc_convertible\tFalse", "locc_convertible_with_catalyst\tTrue"]


def test_passive_max(capsys):
    assert run(["passive", "max", state("squeezed_r0.5")]) == 0
    assert capsys.readouterr().out == "0.000000\n"
