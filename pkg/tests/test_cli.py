"""Command-line front end: schemas, determinism, precedence, exit codes."""

import json

import pytest

from csma_game.cli import main


def run_cli(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def parse_csv(text):
    lines = [line for line in text.strip().splitlines() if line]
    header = lines[0].split(",")
    return header, [dict(zip(header, line.split(","))) for line in lines[1:]]


def test_nash_csv_contains_reference_point(capsys):
    code, out = run_cli(["nash", "--nd", "2", "--nw", "2"], capsys)
    assert code == 0
    header, rows = parse_csv(out)
    assert header == ["nd", "nw", "tau_d", "tau_w", "age", "throughput", "u_dsrc", "u_wifi"]
    assert len(rows) == 1
    assert float(rows[0]["tau_d"]) == pytest.approx(0.46)
    assert float(rows[0]["tau_w"]) == pytest.approx(0.46)


def test_optimum_rows_round_to_pinned_values(capsys):
    code, out = run_cli(["optimum", "--kind", "both", "--n", "2"], capsys)
    assert code == 0
    _, rows = parse_csv(out)
    by_kind = {r["kind"]: r for r in rows}
    assert round(float(by_kind["dsrc"]["tau_star"]), 4) == 0.0268
    assert round(float(by_kind["dsrc"]["value"]), 4) == 2.5576
    assert round(float(by_kind["wifi"]["tau_star"]), 4) == 0.0306
    assert round(float(by_kind["wifi"]["value"]), 4) == 0.4847


def test_metrics_age_curves_decrease_for_single_dsrc_node(capsys):
    for nw in ("1", "2", "5"):
        code, out = run_cli(["metrics", "--nd", "1", "--nw", nw, "--tau-w", "0.2"], capsys)
        assert code == 0
        _, rows = parse_csv(out)
        ages = [float(r["age"]) for r in rows]
        assert len(ages) == 99
        assert all(a >= b for a, b in zip(ages, ages[1:]))


def test_metrics_requires_exactly_one_fixed_strategy(capsys):
    code, _ = run_cli(["metrics", "--nd", "1", "--nw", "1"], capsys)
    assert code == 1
    code, _ = run_cli(
        ["metrics", "--nd", "1", "--nw", "1", "--tau-d", "0.2", "--tau-w", "0.2"], capsys
    )
    assert code == 1


def test_json_round_trip(tmp_path):
    out_path = tmp_path / "nash.json"
    assert main(["nash", "--nd", "2", "--nw", "2", "--format", "json", "--out", str(out_path)]) == 0
    records = json.loads(out_path.read_text())
    assert records[0]["tau_d"] == 0.46
    assert json.loads(json.dumps(records)) == records


def test_byte_identical_reruns(tmp_path):
    args = ["simulate", "--nd", "1", "--nw", "2", "--tau-d", "0.3", "--tau-w", "0.2",
            "--horizon", "20000", "--seed", "5"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_stackelberg_rows(capsys):
    code, out = run_cli(["stackelberg", "--nd", "2", "--nw", "2", "--leader", "wifi"], capsys)
    assert code == 0
    _, rows = parse_csv(out)
    assert len(rows) == 1
    assert rows[0]["leader"] == "wifi"
    assert float(rows[0]["tau_d"]) == pytest.approx(0.41, abs=0.011)


def test_sweep_crosses_cells_in_order(capsys):
    code, out = run_cli(["sweep", "--nd", "2,1", "--nw", "1", "--w-idle", "0", "--w-col", "0"], capsys)
    assert code == 0
    _, rows = parse_csv(out)
    assert [r["nd"] for r in rows] == ["1", "2"]
    assert all(r["nw"] == "1" for r in rows)


def test_sweep_weight_lists_must_pair(capsys):
    code, _ = run_cli(["sweep", "--nd", "1", "--nw", "1", "--w-idle", "0,1", "--w-col", "0"], capsys)
    assert code == 1


def test_costed_preset_with_per_opponent_scaling(capsys):
    code, out = run_cli(
        ["nash", "--nd", "1", "--nw", "1", "--preset", "costed", "--rescale", "per-opponent"],
        capsys,
    )
    assert code == 0
    _, rows = parse_csv(out)
    assert len(rows) >= 2


def test_verify_rows(capsys):
    code, out = run_cli(
        ["verify", "--nd", "2", "--nw", "2", "--player", "dsrc", "--tau-opp", "0.2,0.5",
         "--scan-step", "0.01"],
        capsys,
    )
    assert code == 0
    _, rows = parse_csv(out)
    assert len(rows) == 2
    assert all(r["pattern_ok"] == "true" for r in rows)
    assert all(int(r["sign_changes"]) <= 1 for r in rows)


def test_simulate_emits_analytic_columns(capsys):
    code, out = run_cli(
        ["simulate", "--nd", "1", "--nw", "1", "--tau-d", "0.4", "--tau-w", "0.3",
         "--horizon", "20000", "--seed", "2"],
        capsys,
    )
    assert code == 0
    _, rows = parse_csv(out)
    assert len(rows) == 2
    for row in rows:
        assert float(row["age_analytic"]) > 0.0
        assert abs(float(row["age_sim"]) - float(row["age_analytic"])) <= 5 * float(row["age_se"])


def test_config_file_with_flag_override(tmp_path, capsys):
    conf = tmp_path / "run.conf"
    conf.write_text("# experiment defaults\nnd = 2\nnw = 2\nbeta = 0.001\n")
    code, out = run_cli(["nash", "--config", str(conf), "--nw", "1"], capsys)
    assert code == 0
    _, rows = parse_csv(out)
    assert rows[0]["nd"] == "2"
    assert rows[0]["nw"] == "1"


def test_unknown_config_key_rejected(tmp_path, capsys):
    conf = tmp_path / "run.conf"
    conf.write_text("turbo = yes\n")
    code, _ = run_cli(["nash", "--config", str(conf)], capsys)
    assert code == 1


def test_invalid_flag_value_names_the_field(tmp_path, capsys):
    code = main(["nash", "--nd", "two"])
    err = capsys.readouterr().err
    assert code == 1
    assert "nd" in err


def test_out_of_range_beta_is_config_error(capsys):
    assert main(["nash", "--beta", "2.0"]) == 1


def test_unknown_flag_is_config_error(capsys):
    assert main(["nash", "--frequency", "5.9"]) == 1


def test_unwritable_output_path(capsys):
    assert main(["nash", "--nd", "1", "--nw", "1", "--out", "/nonexistent-dir/x.csv"]) == 2


def test_simulate_without_activity_is_runtime_error(capsys):
    code = main(["simulate", "--nd", "1", "--nw", "1", "--horizon", "100", "--seed", "0"])
    assert code == 2
