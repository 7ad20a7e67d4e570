"""CLI contract: exit codes, deterministic byte-identical artifacts."""

import json
import os

import pytest

from lorentzlab.cli import main


def test_verify_closed_forms_passes(capsys):
    assert main(["verify", "closed-forms"]) == 0
    out = capsys.readouterr().out
    assert "[PASS]" in out and "[FAIL]" not in out


def test_verify_unknown_suite_is_usage_error(capsys):
    assert main(["verify", "no-such-suite"]) == 2


def test_sweep_outputs_are_deterministic(tmp_path):
    argv = [
        "sweep", "--grid-p", "0.5,1,2", "--grid-r", "0.5,1,2",
        "--seed", "3", "--draws", "8",
    ]
    outs = []
    for tag in ("a", "b"):
        out = tmp_path / f"{tag}.csv"
        env_before = os.environ.get("LORENTZ_LAB_THREADS")
        os.environ["LORENTZ_LAB_THREADS"] = "1" if tag == "a" else "4"
        try:
            assert main(argv + ["--out", str(out)]) == 0
        finally:
            if env_before is None:
                os.environ.pop("LORENTZ_LAB_THREADS", None)
            else:
                os.environ["LORENTZ_LAB_THREADS"] = env_before
        csv_bytes = out.read_bytes()
        doc = json.loads((tmp_path / f"{tag}.json").read_text())
        outs.append((csv_bytes, doc["cells"]))
    assert outs[0][0] == outs[1][0]  # byte-identical CSV across thread settings
    assert outs[0][1] == outs[1][1]


def test_sweep_embeds_effective_config(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["sweep", "--grid-p", "1", "--grid-r", "1",
                 "--draws", "6", "--out", str(out)]) == 0
    doc = json.loads((tmp_path / "s.json").read_text())
    assert doc["config"]["draws"] == 6
    assert "version" in doc
    csv_text = out.read_text()
    assert csv_text.splitlines()[0].startswith("p,r,direction,")
    assert csv_text.endswith("\n") and "\r" not in csv_text


def test_sweep_bad_grid_is_usage_error(tmp_path):
    assert main(["sweep", "--grid-p", "nope", "--out", str(tmp_path / "x.csv")]) == 2


def test_sweep_unwritable_output_is_io_error(tmp_path):
    missing = tmp_path / "no" / "such" / "dir" / "x.csv"
    assert main(["sweep", "--grid-p", "1", "--grid-r", "1",
                 "--draws", "6", "--out", str(missing)]) == 3


def test_config_file_flags_win(tmp_path):
    cfg = tmp_path / "lab.cfg"
    cfg.write_text("draws = 6\nseed = 9\n# comment line\ngrid-p = 1\ngrid-r = 1\n")
    out = tmp_path / "c.csv"
    assert main(["--config", str(cfg), "sweep", "--seed", "2",
                 "--out", str(out)]) == 0
    doc = json.loads((tmp_path / "c.json").read_text())
    assert doc["config"]["seed"] == 2  # flag beats the file
    assert doc["config"]["draws"] == 6  # file beats the default


def test_probe_family_ladder(tmp_path):
    out = tmp_path / "fam.json"
    assert main([
        "probe", "family", "--family", "4.1", "--p", "2", "--r", "2",
        "--alpha-ladder", "0.2,0.1,0.05,0.025", "--out", str(out),
    ]) == 0
    doc = json.loads(out.read_text())
    assert abs(doc["fit"]["slope"] - 0.5) < 0.02
    assert (tmp_path / "fam.csv").exists()


def test_probe_regime_violation_exits_4(tmp_path, capsys):
    code = main([
        "probe", "cwikel", "--p", "1", "--q", "2", "--r", "1",
        "--regime", "i", "--sizes", "2", "--draws", "1",
        "--out", str(tmp_path / "p.json"),
    ])
    assert code == 4
    assert "regime" in capsys.readouterr().err.lower()


def test_probe_outputs_reports(tmp_path):
    out = tmp_path / "lem.json"
    assert main([
        "probe", "lemma61", "--p", "2", "--r", "2", "--sizes", "3,4",
        "--draws", "2", "--out", str(out),
    ]) == 0
    doc = json.loads(out.read_text())
    assert len(doc["reports"]) == 4
    assert all(r["probe"] == "lemma61" for r in doc["reports"])
    assert (tmp_path / "lem.csv").exists()


def test_probe_unknown_name_is_usage_error(tmp_path):
    assert main(["probe", "nonsense", "--out", str(tmp_path / "x.json")]) == 2


def test_no_command_prints_usage():
    assert main([]) == 2


def test_json_floats_survive_round_trip(tmp_path):
    out = tmp_path / "lem.json"
    main(["probe", "lemma61", "--p", "2", "--r", "2", "--sizes", "3",
          "--draws", "1", "--out", str(out)])
    doc = json.loads(out.read_text())
    rep = doc["reports"][0]
    # 17 significant digits: lhs/rhs/ratio reparse to the same float
    assert rep["ratio"] == pytest.approx(rep["lhs"] / rep["rhs"], rel=1e-15)
