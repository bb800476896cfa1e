import json

import pytest

from certcap.cli import EXIT_ERROR, EXIT_OK, EXIT_UNDETERMINED, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_analyze_unsolvable_exits_zero(capsys, data_dir):
    code, out, _ = run_cli(capsys, "analyze",
                           "--plant", str(data_dir / "plant_diag3.json"),
                           "--channel", str(data_dir / "pentagon.json"),
                           "--regime", "se-fb", "--budget", "10000")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["outcome"] == "Unsolvable"
    assert doc["certificate"]["kind"] == "psi"


def test_analyze_zero_budget_exits_three(capsys, data_dir):
    code, out, _ = run_cli(capsys, "analyze",
                           "--plant", str(data_dir / "plant_diag3.json"),
                           "--channel", str(data_dir / "pentagon.json"),
                           "--regime", "se-fb", "--budget", "0")
    assert code == EXIT_UNDETERMINED
    assert json.loads(out)["outcome"] == "Undetermined"


def test_bad_channel_exits_one(capsys, data_dir):
    code, out, err = run_cli(capsys, "fb-capacity",
                             "--channel", str(data_dir / "bad_channel.json"))
    assert code == EXIT_ERROR
    assert not out
    assert "error" in err


def test_missing_file_exits_one(capsys, data_dir):
    code, _, err = run_cli(capsys, "eta", "--plant",
                           str(data_dir / "no_such_plant.json"))
    assert code == EXIT_ERROR
    assert "not found" in err


def test_unknown_flag_exits_one(capsys, data_dir):
    code, _, _ = run_cli(capsys, "fb-capacity",
                         "--channel", str(data_dir / "pentagon.json"),
                         "--frobnicate")
    assert code == EXIT_ERROR


def test_fb_capacity_pentagon(capsys, data_dir):
    code, out, _ = run_cli(capsys, "fb-capacity",
                           "--channel", str(data_dir / "pentagon.json"))
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["exact_inverse_psi"] == "5/2"
    assert doc["enclosure"]["level"] == 20


def test_eta_command(capsys, data_dir):
    code, out, _ = run_cli(capsys, "eta",
                           "--plant", str(data_dir / "plant_diag2.json"))
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["eta"]["lo"] == "1" and doc["eta"]["hi"] == "1"


def test_capacity_report_shape(capsys, data_dir):
    code, out, _ = run_cli(capsys, "capacity",
                           "--channel", str(data_dir / "pentagon.json"),
                           "--tolerance", "1/10000")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert set(doc) == {"c0_lb", "c0fb", "shannon"}
    assert doc["c0_lb"]["rungs"][1]["alpha"] == 5
    assert doc["shannon"]["iterations"] >= 1


def test_zero_error_ladder(capsys, data_dir):
    code, out, _ = run_cli(capsys, "zero-error",
                           "--channel", str(data_dir / "pentagon.json"),
                           "--max-block", "2")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert [r["n"] for r in doc["rungs"]] == [1, 2]


def test_simulate_writes_trace(capsys, data_dir, tmp_path):
    trace = tmp_path / "out.csv"
    code, out, _ = run_cli(capsys, "simulate",
                           "--plant", str(data_dir / "plant_3_2.json"),
                           "--channel", str(data_dir / "noiseless2.json"),
                           "--regime", "se-nofb", "--horizon", "200",
                           "--seed", "4", "--trace-out", str(trace))
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["bounded"] is True
    header = trace.read_text().splitlines()[0]
    assert header == "t,x,x_hat,error,u"


def test_simulate_auto_code(capsys, data_dir):
    code, out, _ = run_cli(capsys, "simulate",
                           "--plant", str(data_dir / "plant_3_2.json"),
                           "--channel", str(data_dir / "pentagon.json"),
                           "--regime", "se-nofb", "--horizon", "100",
                           "--seed", "1", "--code", "auto", "--block-length", "2")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["message_count"] == 5 and doc["block_length"] == 2
    assert doc["zero_error_transcript"] is True


def test_fixed_eta_analyze(capsys, data_dir):
    code, out, _ = run_cli(capsys, "analyze",
                           "--plant", str(data_dir / "plant_diag2.json"),
                           "--channel", str(data_dir / "noiseless2.json"),
                           "--regime", "se-nofb",
                           "--fixed-eta", "1/2", "--direction", "capacity-above",
                           "--budget", "100")
    assert code == EXIT_OK
    assert json.loads(out)["outcome"] == "Solvable"


def test_stream_channel_analyze(capsys, data_dir):
    code, out, _ = run_cli(capsys, "analyze",
                           "--plant", str(data_dir / "plant_diag3.json"),
                           "--channel", str(data_dir / "stream_hover.json"),
                           "--regime", "se-fb", "--budget", "500")
    assert code == EXIT_OK
    assert json.loads(out)["outcome"] == "Unsolvable"


def test_env_var_sets_default_budget(capsys, data_dir, monkeypatch):
    monkeypatch.setenv("CERTCAP_BUDGET", "0")
    code, out, _ = run_cli(capsys, "analyze",
                           "--plant", str(data_dir / "plant_diag3.json"),
                           "--channel", str(data_dir / "pentagon.json"),
                           "--regime", "se-fb")
    assert code == EXIT_UNDETERMINED
    assert json.loads(out)["budget"]["limit"] == 0
    # an explicit flag overrides the environment
    code, out, _ = run_cli(capsys, "analyze",
                           "--plant", str(data_dir / "plant_diag3.json"),
                           "--channel", str(data_dir / "pentagon.json"),
                           "--regime", "se-fb", "--budget", "10000")
    assert code == EXIT_OK
    assert json.loads(out)["outcome"] == "Unsolvable"


def test_text_format(capsys, data_dir):
    code, out, _ = run_cli(capsys, "--format", "text", "eta",
                           "--plant", str(data_dir / "plant_diag2.json"))
    assert code == EXIT_OK
    assert "eta.lo = 1" in out


GOLDEN_COMMANDS = [
    ("analyze", "--plant", "plant_diag3.json", "--channel", "pentagon.json",
     "--regime", "se-fb", "--budget", "10000"),
    ("analyze", "--plant", "plant_diag2.json", "--channel", "pentagon.json",
     "--regime", "se-nofb", "--budget", "10000"),
    ("analyze", "--plant", "plant_weak2.json", "--channel", "pentagon.json",
     "--regime", "weak", "--budget", "10000"),
    ("analyze", "--plant", "plant_diag3.json", "--channel", "stream_hover.json",
     "--regime", "se-fb", "--budget", "300"),
    ("capacity", "--channel", "pentagon.json", "--tolerance", "1/10000"),
    ("zero-error", "--channel", "pentagon.json"),
    ("fb-capacity", "--channel", "bsc_1_4.json"),
    ("fb-capacity", "--channel", "pentagon.json"),
    ("eta", "--plant", "plant_diag2.json"),
    ("simulate", "--plant", "plant_3_2.json", "--channel", "noiseless2.json",
     "--regime", "se-nofb", "--horizon", "300", "--seed", "2"),
]


def _resolve(data_dir, argv):
    return [str(data_dir / a) if a.endswith(".json") else a for a in argv]


@pytest.mark.parametrize("argv", GOLDEN_COMMANDS,
                         ids=[" ".join(a[:2]) + f"#{i}" for i, a in enumerate(GOLDEN_COMMANDS)])
def test_byte_determinism_across_runs(capsys, data_dir, argv):
    argv = _resolve(data_dir, list(argv))
    code1, out1, _ = run_cli(capsys, *argv)
    code2, out2, _ = run_cli(capsys, *argv)
    assert code1 == code2
    assert out1 == out2


@pytest.mark.parametrize("argv", GOLDEN_COMMANDS[:6],
                         ids=[f"rt{i}" for i in range(6)])
def test_json_round_trip_is_byte_stable(capsys, data_dir, argv):
    argv = _resolve(data_dir, list(argv))
    _, out, _ = run_cli(capsys, *argv)
    doc = json.loads(out)
    again = json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
    assert again == out
