import json

import pandas as pd

from cv_entanglement.step_04_fock_oracle.methods.continuity import continuity_table
from cv_entanglement.step_06_report.methods.overview import compile_overview
from cv_entanglement.step_06_report.methods.plots import plot_attenuation, plot_continuity, plot_no_go


def test_plot_writes_png(tmp_path):
    csv_path = tmp_path / "continuity.csv"
    continuity_table([10, 100, 1000]).to_csv(csv_path, index=False)
    output = tmp_path / "plots" / "continuity.png"

    plot_continuity(csv_path, output, dpi=50)
    assert output.exists()
    assert output.stat().st_size > 0


def test_attenuation_and_no_go_plots(tmp_path):
    sweep = tmp_path / "attenuation.csv"
    pd.DataFrame({
        "eta": [1.0, 0.5, 0.1],
        "log_negativity_one_arm": [1.44, 0.8, 0.2],
        "log_negativity_both_arms": [1.44, 0.5, 0.05],
    }).to_csv(sweep, index=False)
    gains = tmp_path / "gains.csv"
    pd.DataFrame({"gain": [-0.5, -0.2, -0.01]}).to_csv(gains, index=False)

    plot_attenuation(sweep, tmp_path / "attenuation.png", dpi=50)
    plot_no_go(gains, tmp_path / "no_go.png", dpi=50)
    assert (tmp_path / "attenuation.png").exists()
    assert (tmp_path / "no_go.png").exists()


def test_missing_csv_is_skipped(tmp_path):
    output = tmp_path / "nothing.png"
    plot_continuity(tmp_path / "missing.csv", output)
    assert not output.exists()


def test_compile_overview(tmp_path):
    present = tmp_path / "summary_a.json"
    present.write_text(json.dumps({"max_gain": -0.1}), encoding="utf-8")
    broken = tmp_path / "summary_b.json"
    broken.write_text("{", encoding="utf-8")
    output = tmp_path / "report" / "overview.json"

    overview = compile_overview({"a": present, "b": broken, "c": tmp_path / "missing.json"}, output)
    assert overview["a"] == {"max_gain": -0.1}
    assert overview["b"] is None and overview["c"] is None
    assert json.loads(output.read_text(encoding="utf-8"))["a"]["max_gain"] == -0.1
