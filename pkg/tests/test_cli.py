import json
import os

import numpy as np
import pytest

from hskdv import cli, regions
from hskdv.cli import (ConfigError, parse_config, to_json, EXIT_OK,
                       EXIT_CONFIG, EXIT_NUMERICAL, EXIT_ACCEPTANCE)


def test_parse_config_basic():
    cfg = parse_config("command=classify\na=0.5\nk=0\ns=0\n")
    assert cfg.command == "classify"
    assert cfg.get("a") == 0.5
    assert cfg.get("k") == "0"      # kept verbatim for exact handling
    assert cfg.seed == 0


def test_parse_config_sections_comments():
    text = """
    # comment
    [run]
    command = simulate
    ; other comment
    a = 2
    n = 128
    nonlinear = off
    """
    cfg = parse_config(text)
    assert cfg.command == "simulate"
    assert cfg.get("n") == 128
    assert cfg.get("nonlinear") is False


def test_parse_config_unknown_key_line():
    with pytest.raises(ConfigError) as err:
        parse_config("command=classify\nalpha_=3\n")
    assert "line 2" in str(err.value)
    assert "alpha_" in str(err.value)


def test_parse_config_wrong_command_key():
    with pytest.raises(ConfigError):
        parse_config("command=classify\nlemma=L61\n")


def test_parse_config_missing_command():
    with pytest.raises(ConfigError):
        parse_config("a=2\n")
    with pytest.raises(ConfigError):
        parse_config("command=frobnicate\n")


def test_parse_config_bad_values():
    with pytest.raises(ConfigError):
        parse_config("command=simulate\nn=many\n")
    with pytest.raises(ConfigError):
        parse_config("command=simulate\nnonlinear=maybe\n")
    with pytest.raises(ConfigError):
        parse_config("command=picard\nv_boxes=1:2:3:4\n")
    cfg = parse_config("command=picard\nv_boxes=1:2; 3:4:0.5\n")
    boxes = cfg.get("v_boxes").boxes
    assert len(boxes) == 2 and boxes[1].weight_exponent == 0.5
    cfg = parse_config("command=fre-scan\nlams=10, 100 1000\n")
    assert cfg.get("lams") == [10.0, 100.0, 1000.0]


def test_output_dir_from_environment(monkeypatch):
    monkeypatch.setenv("HSKDV_OUT", "/tmp/somewhere")
    cfg = parse_config("command=classify\n")
    assert cfg.output_dir == "/tmp/somewhere"
    cfg = parse_config("command=classify\noutput_dir=/tmp/else\n")
    assert cfg.output_dir == "/tmp/else"


def test_to_json_deterministic():
    obj = {"b": [1.0, 2.5], "a": {"x": True, "y": None}, "c": "q\"uote"}
    t1 = to_json(obj)
    assert t1 == to_json(obj)
    parsed = json.loads(t1)
    assert parsed["a"]["y"] is None
    assert parsed["c"] == 'q"uote'
    # stable key order and 17-digit floats
    assert t1.index('"a"') < t1.index('"b"') < t1.index('"c"')
    assert to_json(0.1) == "%.17g" % 0.1
    assert to_json({}) == "{}"
    assert to_json([]) == "[]"


def test_classify_supported_false(tmp_path):
    code = cli.main(["classify", "--a", "1", "--k", "0", "--s", "0",
                     "--out", str(tmp_path)])
    assert code == EXIT_OK
    out = json.loads((tmp_path / "classify.json").read_text())
    assert out["supported"] is False
    assert out["lwp"] is None and out["illposed"] is None


def test_classify_full_verdict(tmp_path):
    code = cli.main(["classify", "--a", "0.5", "--k", "1", "--s", "1",
                     "--gamma", "1", "--theta", "-1",
                     "--out", str(tmp_path)])
    assert code == EXIT_OK
    out = json.loads((tmp_path / "classify.json").read_text())
    assert out["lwp"] == "DirectA0"
    assert out["gwp"] == "Yes"


def test_atlas_artifacts(tmp_path):
    code = cli.main(["atlas", "--a", "0.5", "--out", str(tmp_path)])
    assert code == EXIT_OK
    svg = (tmp_path / "atlas_a0.5.svg").read_text()
    assert svg.count("marker-open") == 2
    assert svg.count("marker-closed") == 1
    for cls in ("region-blue", "region-gray", "region-red"):
        assert cls in svg
    segs = json.loads((tmp_path / "atlas_a0.5_segments.json").read_text())
    expect = [s.as_dict() for s in regions.boundary_segments(0.5)]
    assert segs == json.loads(to_json(expect))


def test_simulate_artifacts(tmp_path):
    code = cli.main(["simulate", "--a", "0.5", "--n", "64", "--T", "0.01",
                     "--dt", "1e-3", "--store-every", "5",
                     "--out", str(tmp_path)])
    assert code == EXIT_OK
    lines = (tmp_path / "trajectory.csv").read_text().splitlines()
    assert lines[0] == "t,u_norm,v_norm,mean_u,M,E"
    assert len(lines) == 4  # initial + 2 stored + final
    assert (tmp_path / "final.snap").exists()


def test_simulate_stability_exit(tmp_path, capsys):
    code = cli.main(["simulate", "--a", "0.5", "--n", "256", "--dt", "0.5",
                     "--T", "2.0", "--out", str(tmp_path)])
    assert code == EXIT_NUMERICAL
    err = capsys.readouterr().err
    assert "stability bound" in err
    assert not (tmp_path / "trajectory.csv").exists()


def test_picard_artifacts(tmp_path):
    code = cli.main(["picard", "--a", "0.5", "--iterate", "second_u",
                     "--v-boxes", "3:4", "--t", "0.01",
                     "--window-lo", "6", "--window-hi", "8",
                     "--out", str(tmp_path)])
    assert code == EXIT_OK
    lines = (tmp_path / "spectrum.csv").read_text().splitlines()
    assert lines[0] == "xi,re,im"
    assert len(lines) == 257


def test_picard_bad_iterate(tmp_path, capsys):
    code = cli.main(["picard", "--a", "0.5", "--iterate", "fourth_w",
                     "--v-boxes", "3:4", "--t", "0.01",
                     "--window-lo", "6", "--window-hi", "8",
                     "--out", str(tmp_path)])
    assert code == EXIT_CONFIG
    assert "config error" in capsys.readouterr().err


def test_ibps_acceptance_exit(tmp_path):
    code = cli.main(["ibps-check", "--a", "0.5", "--n", "128",
                     "--T", "0.005", "--dt", "1e-4", "--store-every", "2",
                     "--max-residual", "1e-30", "--out", str(tmp_path)])
    assert code == EXIT_ACCEPTANCE
    rep = json.loads((tmp_path / "ibps_report.json").read_text())
    assert rep["pass"] is False


def test_unknown_flag_and_help(tmp_path, capsys):
    assert cli.main(["classify", "--wat", "1",
                     "--out", str(tmp_path)]) == EXIT_CONFIG
    capsys.readouterr()
    assert cli.main(["--help"]) == EXIT_OK
    assert "classify" in capsys.readouterr().out
    assert cli.main([]) == EXIT_CONFIG


def test_config_file_with_flag_override(tmp_path):
    cfgfile = tmp_path / "run.cfg"
    cfgfile.write_text("command=classify\na=0.5\nk=0\ns=0\n")
    out = tmp_path / "out"
    code = cli.main(["classify", "--config", str(cfgfile),
                     "--s", "5", "--out", str(out)])
    assert code == EXIT_OK
    rep = json.loads((out / "classify.json").read_text())
    assert rep["s"] == 5.0
    assert rep["illposed"] == "C2"


def test_classify_byte_identical(tmp_path):
    outs = []
    for name in ("r1", "r2"):
        d = tmp_path / name
        cli.main(["classify", "--a", "0.5", "--k", "1", "--s", "1",
                  "--out", str(d)])
        outs.append((d / "classify.json").read_bytes())
    assert outs[0] == outs[1]
