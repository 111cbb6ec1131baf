import csv
import json

import numpy as np
import pytest

from eulbkit import presets
from eulbkit.cli import main
from eulbkit.config import ConfigError, load_config, parse_config

FIG2 = {
    "initial_state": {"type": "bell_diagonal_p", "p": 0.0},
    "channel": {"type": "gad", "pA": 0.9, "rA": 0.1, "pB": 0.9, "rB": 0.4},
}
SINGLET = {"initial_state": {"type": "bell_diagonal_p", "p": 1.0}, "channel": {"type": "identity"}}
FAST = {"population": 16, "generations": 15, "seed": 1}


@pytest.fixture
def write_cfg(tmp_path):
    def write(doc, name="cfg.json"):
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return str(path)

    return write


def test_defaults_filled():
    cfg = parse_config(FIG2)
    assert cfg.doc["observables"] == {"q": "x", "r": "z"}
    assert cfg.doc["search"]["n2_range"] == [1e-9, 1e5]
    assert cfg.doc["optimizer"]["population"] == 64
    sc = cfg.scenario()
    assert sc.ch_a.kind == "gad" and sc.ch_b.r == 0.4


@pytest.mark.parametrize(
    "doc, key",
    [
        ({**FIG2, "colour": 1}, "colour"),
        ({**FIG2, "channel": {**FIG2["channel"], "q": 0.1}}, "channel.q"),
        ({**FIG2, "initial_state": {"type": "x_state", "p": 1.7}}, "initial_state.p"),
        ({**FIG2, "initial_state": {"type": "x_state"}}, "initial_state.p"),
        ({**FIG2, "channel": {"type": "thermal"}}, "channel.type"),
        ({**FIG2, "optimizer": {"population": 2.5}}, "optimizer.population"),
        ({**FIG2, "search": {"n1_range": [0, 1]}}, "search"),
        ({**FIG2, "observables": {"q": "w"}}, "observables.q"),
        ({"channel": FIG2["channel"]}, "initial_state"),
        ({**FIG2, "initial_state": {"type": "bell_diagonal_c", "c1": 1, "c2": 1, "c3": 1}}, "initial_state"),
    ],
)
def test_config_errors_name_the_key(doc, key):
    with pytest.raises(ConfigError, match=key.replace(".", r"\.")):
        parse_config(doc)


def test_digest_stable_under_reordering(write_cfg):
    reordered = {"channel": dict(reversed(list(FIG2["channel"].items()))), "initial_state": FIG2["initial_state"]}
    assert load_config(write_cfg(FIG2, "a.json")).digest() == load_config(write_cfg(reordered, "b.json")).digest()
    assert parse_config(FIG2).digest() != parse_config(SINGLET).digest()


def test_bloch_observables():
    cfg = parse_config({**SINGLET, "observables": {"q": "z", "r": {"theta": np.pi / 3}}})
    from eulbkit.entropy import complementarity

    assert complementarity(cfg.scenario().obs) == pytest.approx(0.75)


def test_compute_singlet(write_cfg, capsys):
    assert main(["compute", "--config", write_cfg(SINGLET)]) == 0
    out = capsys.readouterr().out
    doc = json.loads(out)
    assert list(doc) == sorted(doc)
    assert doc["eulb"] == pytest.approx(0.0, abs=1e-12)
    assert doc["state_purity"] == pytest.approx(1.0)
    assert doc["weak_success_prob"] == pytest.approx(1.0)


def test_compute_fig2_baseline_is_reported(write_cfg, capsys):
    assert main(["compute", "--config", write_cfg(FIG2), "--m", "0.18", "--n1", "0.18", "--n2", "0.81"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["lhs_uncertainty"] >= doc["eulb"] - 1e-9
    assert doc["baseline"] > doc["eulb"]


def test_compute_exit_codes(write_cfg, tmp_path, capsys):
    bad = write_cfg({**FIG2, "initial_state": {"type": "x_state", "p": 1.7}}, "bad.json")
    assert main(["compute", "--config", bad]) == 2
    assert "initial_state.p" in capsys.readouterr().err
    garbage = tmp_path / "garbage.json"
    garbage.write_text("{not json")
    assert main(["compute", "--config", str(garbage)]) == 2
    assert main(["compute", "--config", str(tmp_path / "missing.json")]) == 2
    dead = write_cfg({"initial_state": {"type": "x_state", "p": 0.0}, "channel": {"type": "identity"}}, "dead.json")
    assert main(["compute", "--config", dead, "--m", "0"]) == 3
    assert main(["compute", "--config", dead, "--n1", "-1"]) == 2


def test_sweep_csv(write_cfg, tmp_path):
    out = tmp_path / "sweep.csv"
    cfg = write_cfg({**SINGLET, "optimizer": FAST})
    assert main(["sweep", "--config", cfg, "--m-min", "0.5", "--m-max", "2", "--m-steps", "4", "--out", str(out)]) == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["m", "n1_opt", "n2_opt", "eulb", "baseline"]
    assert len(rows) == 5
    assert [float(r[0]) for r in rows[1:]] == pytest.approx([0.5, 1.0, 1.5, 2.0])
    for r in rows[1:]:
        assert float(r[3]) < 1e-2
        assert all(len(v.replace("-", "").replace(".", "").split("e")[0].lstrip("0")) <= 9 for v in r)


def test_sweep_bad_output_path(write_cfg, tmp_path):
    cfg = write_cfg({**SINGLET, "optimizer": FAST})
    target = tmp_path / "no" / "such" / "dir" / "x.csv"
    assert main(["sweep", "--config", cfg, "--m-steps", "2", "--out", str(target)]) == 4
    assert main(["sweep", "--config", cfg, "--m-steps", "1", "--out", str(tmp_path / "x.csv")]) == 2


def test_optimize_deterministic(write_cfg, tmp_path, monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")
    cfg = write_cfg({**FIG2, "optimizer": FAST})
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["optimize", "--config", cfg, "--seed", "7", "--out", str(a)]) == 0
    assert main(["optimize", "--config", cfg, "--seed", "7", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert doc["seed"] == 7
    assert doc["eulb_min"] <= doc["baseline"]
    assert doc["scenario_digest"] == load_config(cfg).digest()
    assert doc["timestamp"] == "2023-11-14T22:13:20Z"


def test_optimize_unwritable(write_cfg, tmp_path):
    cfg = write_cfg({**FIG2, "optimizer": FAST})
    assert main(["optimize", "--config", cfg, "--out", str(tmp_path / "nope" / "r.json")]) == 4


def test_reproduce_unknown_figure(tmp_path, capsys):
    assert main(["reproduce", "--figure", "fig1", "--out", str(tmp_path)]) == 2
    assert "fig2" in capsys.readouterr().err


def test_reproduce_fig5(tmp_path, capsys):
    assert main(["reproduce", "--figure", "fig5", "--out", str(tmp_path), "--m-steps", "3"]) == 0
    assert "fig5[default]" in capsys.readouterr().out
    summary = json.loads((tmp_path / "fig5_summary.json").read_text())
    (reading,) = summary["readings"]
    assert reading["expected_eulb_min"] == 1.0 and reading["expected_baseline"] == 1.92
    assert reading["eulb_min_pass"] and reading["baseline_pass"]
    rows = list(csv.reader((tmp_path / "fig5_default_sweep.csv").open()))
    assert len(rows) == 4
    assert (tmp_path / "fig5_default_optimize.json").exists()


def test_reproduce_conflicting_figure_runs_both_readings(tmp_path):
    assert main(["reproduce", "--figure", "fig3", "--out", str(tmp_path), "--m-steps", "2"]) == 0
    labels = [r["variant"] for r in json.loads((tmp_path / "fig3_summary.json").read_text())["readings"]]
    assert labels == ["caption", "text"]
    assert list(presets.variants("fig9")) == ["text", "caption"]


def test_fig7_summary_has_advisory_flag():
    from eulbkit.reproduce import reproduce_figure

    (s,) = reproduce_figure("fig7", sweep=False)
    assert s["advisory_tolerance"] == 0.005
    assert "eulb_min_advisory_pass" in s


def test_module_entry_point():
    import subprocess
    import sys

    res = subprocess.run([sys.executable, "-m", "eulbkit", "--help"], capture_output=True, text=True)
    assert res.returncode == 0
    for cmd in ("compute", "sweep", "optimize", "reproduce"):
        assert cmd in res.stdout
