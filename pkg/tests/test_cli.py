"""CLI contract tests: parsing, dispatch, artifacts, exit codes,
byte-level determinism, and the report writers."""

import json
import math

import numpy as np
import pytest

from stripfront import reporting
from stripfront.cli import (DEFAULT_SEED, RunConfig, main, parse_config,
                            parse_frontier, parse_n_grid)


# -- parsing ----------------------------------------------------------------


def test_parse_plan_command():
    cfg = parse_config(["plan", "--alpha", "1", "--a", "0.9", "--b", "0.5"])
    assert cfg.command == "plan"
    assert (cfg.alpha, cfg.a, cfg.b) == (1.0, 0.9, 0.5)
    assert cfg.seed == DEFAULT_SEED
    assert cfg.out_path is None


def test_parse_n_grid_scientific_notation():
    assert parse_n_grid("1e4,1e5,1e6") == [10000, 100000, 1000000]
    assert parse_n_grid("100,250") == [100, 250]
    with pytest.raises(ValueError):
        parse_n_grid("100,100")
    with pytest.raises(ValueError):
        parse_n_grid("1e4,1e3")
    with pytest.raises(ValueError):
        parse_n_grid("12.5")


def test_parse_frontier_specs():
    assert parse_frontier("constant:1.0").family == "constant"
    assert parse_frontier("cosine:1.0,0.3").params == (1.0, 0.3)
    pw = parse_frontier("piecewise-linear:0.8,1.2,0.6")
    assert pw.params == (0.8, 1.2, 0.6)
    for bad in ("constant", "constant:", "constant:a", "what:1.0",
                "cosine:1.0", "constant:0.0"):
        with pytest.raises(ValueError):
            parse_frontier(bad)


def test_missing_required_n_names_the_field(capsys):
    code = main(["estimate", "--out", "x.json"])
    assert code == 2
    assert "--n" in capsys.readouterr().err


def test_unknown_command_is_usage_error(capsys):
    assert main(["frobnicate"]) == 2


def test_estimate_derives_k_and_h_from_exponents():
    cfg = parse_config(["estimate", "--n", "10000", "--out", "x.json"])
    assert cfg.k == 3981
    assert cfg.h == pytest.approx(0.01)
    cfg = parse_config(["estimate", "--n", "100", "--k", "12", "--h", "0.2",
                        "--out", "x.json"])
    assert (cfg.k, cfg.h) == (12, 0.2)


def test_bad_k_for_n_rejected(capsys):
    assert main(["estimate", "--n", "100", "--k", "100", "--out", "x.json"]) == 2


# -- commands ----------------------------------------------------------------


def test_plan_writes_json(tmp_path, capsys):
    out = tmp_path / "plan.json"
    assert main(["plan", "--alpha", "1", "--a", "0.9", "--b", "0.5",
                 "--out", str(out)]) == 0
    line = capsys.readouterr().out.strip()
    assert line.count("\n") == 0 and "valid=True" in line
    payload = json.loads(out.read_text())
    assert payload["result"]["valid"] is True
    assert payload["result"]["hk_diverges"] is True


def test_sample_command_contains_points(tmp_path):
    out = tmp_path / "pts.csv"
    assert main(["sample", "--frontier", "constant:1.0", "--n", "1000",
                 "--seed", "7", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "x,y"
    assert len(lines) == 1001
    for line in lines[1:]:
        x, y = map(float, line.split(","))
        assert 0.0 <= x <= 1.0 and 0.0 <= y <= 1.0


def test_sample_rejects_json_format(capsys):
    assert main(["sample", "--n", "10", "--format", "json",
                 "--out", "pts.json"]) == 2


def test_estimate_command_json(tmp_path):
    out = tmp_path / "est.json"
    assert main(["estimate", "--frontier", "constant:1.0", "--n", "2000",
                 "--x", "0.5", "--seed", "3", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["command"] == "estimate"
    assert 0.0 < payload["result"]["estimate"] < 2.0
    assert payload["config"]["seed"] == 3


def test_sandwich_command_reports_zero_violations(tmp_path):
    out = tmp_path / "sw.json"
    assert main(["sandwich", "--frontier", "constant:1.0", "--n", "2000",
                 "--gamma", "0.1", "--replicates", "100", "--x", "0.5",
                 "--seed", "5", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["result"]["ordering_violations"] == 0
    assert payload["result"]["bracket_fail_rate"] <= 1.0


def test_clt_command_csv_writes_two_tables(tmp_path):
    out = tmp_path / "clt.csv"
    assert main(["clt", "--n-grid", "400,900", "--replicates", "20",
                 "--x", "0.5", "--seed", "42", "--format", "csv",
                 "--out", str(out)]) == 0
    summary = out.read_text().splitlines()
    assert summary[0] == "n,k,h,replicates,mean,sd,ks_distance,sigma_theory"
    assert len(summary) == 3
    errors = (tmp_path / "clt.errors.csv").read_text().splitlines()
    assert errors[0] == "n,replicate,standardized_error"
    assert len(errors) == 1 + 2 * 20
    # csv floats round-trip exactly
    first = summary[1].split(",")
    assert float(first[7]) == math.sqrt(0.6)


def test_clt_command_json_null_sd(tmp_path):
    out = tmp_path / "clt.json"
    assert main(["clt", "--n-grid", "400", "--replicates", "1",
                 "--seed", "2", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    cell = payload["result"]["per_n"][0]
    assert cell["sd"] is None
    assert cell["sd_reason"] == "needs >= 2 replicates"
    assert "nan" not in out.read_text().lower()


def test_gap_rate_command_csv(tmp_path):
    out = tmp_path / "gr.csv"
    assert main(["gap-rate", "--n-grid", "500,1000", "--replicates", "20",
                 "--gamma-policy", "inv-sqrt-k", "--seed", "4",
                 "--format", "csv", "--out", str(out)]) == 0
    rows = out.read_text().splitlines()
    assert rows[0].startswith("n,k,gamma,mean_u_gap,ratio")
    assert len(rows) == 3


def test_weight_sum_command(tmp_path):
    out = tmp_path / "ws.json"
    assert main(["weight-sum", "--n-grid", "1e3,1e4", "--x", "0.5",
                 "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    sums = payload["result"]["per_n"]
    assert len(sums) == 2
    assert sums[0]["n"] == 1000


def test_invalid_plan_for_clt_is_usage_error(tmp_path, capsys):
    out = tmp_path / "x.json"
    code = main(["clt", "--n-grid", "400", "--replicates", "5",
                 "--a", "0.5", "--b", "0.5", "--out", str(out)])
    assert code == 2
    assert "plan" in capsys.readouterr().err


def test_unwritable_out_path_is_runtime_error(tmp_path, capsys):
    code = main(["plan", "--a", "0.9", "--b", "0.5",
                 "--out", str(tmp_path / "no" / "such" / "dir" / "x.json")])
    assert code == 1


# -- config file ---------------------------------------------------------


def test_config_file_supplies_defaults(tmp_path):
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text(
        "# experiment defaults\n"
        "frontier = affine:0.5,1.0\n"
        "n = 300\n"
        "seed = 5\n")
    cfg = parse_config(["sample", "--config", str(cfg_file),
                        "--out", "pts.csv"])
    assert cfg.frontier.family == "affine"
    assert cfg.n == 300
    assert cfg.seed == 5


def test_cli_flags_override_config_file(tmp_path):
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text("n = 300\nseed = 5\n")
    cfg = parse_config(["sample", "--config", str(cfg_file),
                        "--seed", "9", "--out", "pts.csv"])
    assert cfg.seed == 9
    assert cfg.n == 300


def test_config_file_equivalent_to_flags(tmp_path):
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text("frontier = cosine:1.0,0.3\nn = 200\nseed = 11\n")
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    assert main(["sample", "--config", str(cfg_file), "--out", str(out1)]) == 0
    assert main(["sample", "--frontier", "cosine:1.0,0.3", "--n", "200",
                 "--seed", "11", "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_malformed_config_file(tmp_path, capsys):
    cfg_file = tmp_path / "bad.cfg"
    cfg_file.write_text("frontier constant:1.0\n")
    assert main(["sample", "--config", str(cfg_file), "--n", "10",
                 "--out", "x.csv"]) == 2
    assert main(["sample", "--config", str(tmp_path / "missing.cfg"),
                 "--n", "10", "--out", "x.csv"]) == 2


# -- determinism ---------------------------------------------------------


@pytest.mark.parametrize("argv", [
    ["sample", "--frontier", "cosine:1.0,0.3", "--n", "500", "--seed", "7"],
    ["plan", "--alpha", "0.7", "--a", "0.8", "--b", "0.4", "--format", "csv"],
    ["sandwich", "--n", "1500", "--gamma", "0.1", "--replicates", "40",
     "--seed", "3"],
    ["weight-sum", "--n-grid", "1e3,1e4", "--x", "0.4"],
    ["clt", "--n-grid", "300,600", "--replicates", "10", "--seed", "1",
     "--format", "csv"],
], ids=lambda a: a[0])
def test_repeat_runs_are_byte_identical(tmp_path, argv):
    ext = "csv" if "csv" in argv else "json"
    out1 = tmp_path / f"one.{ext}"
    out2 = tmp_path / f"two.{ext}"
    assert main(argv + ["--out", str(out1)]) == 0
    assert main(argv + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    if argv[0] == "clt":
        e1 = tmp_path / "one.errors.csv"
        e2 = tmp_path / "two.errors.csv"
        assert e1.read_bytes() == e2.read_bytes()


def test_threads_do_not_change_artifacts(tmp_path):
    base = ["clt", "--n-grid", "400", "--replicates", "16", "--seed", "6"]
    out1 = tmp_path / "t1.json"
    out2 = tmp_path / "t2.json"
    assert main(base + ["--threads", "1", "--out", str(out1)]) == 0
    assert main(base + ["--threads", "4", "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


# -- report writers --------------------------------------------------------


def test_fmt17_round_trips_doubles():
    vals = [0.1, 1.0 / 3.0, math.pi, 1e300, 5e-324, 0.0, 123456789.123456789]
    for v in vals:
        assert float(reporting.fmt17(v)) == v


def test_write_json_rejects_nan(tmp_path):
    with pytest.raises(ValueError):
        reporting.write_json(tmp_path / "bad.json", {"x": float("nan")})
    with pytest.raises(ValueError):
        reporting.write_json(tmp_path / "bad.json", {"x": [1.0, math.inf]})


def test_write_json_sorted_and_newline_terminated(tmp_path):
    path = tmp_path / "ok.json"
    reporting.write_json(path, {"b": 1, "a": {"z": None, "y": 0.5}})
    text = path.read_text()
    assert text.endswith("\n")
    assert text.index('"a"') < text.index('"b"')


def test_write_csv_quotes_and_booleans(tmp_path):
    path = tmp_path / "t.csv"
    reporting.write_csv(path, ["name", "flag", "value"],
                        [["with,comma", True, 0.1]])
    text = path.read_text()
    assert '"with,comma"' in text
    assert "true" in text
    assert reporting.fmt17(0.1) in text
