import csv
import io

import pytest

from disentangle.cli import fmt, run


def invoke(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def parse(text):
    comments = [line for line in text.splitlines() if line.startswith("#")]
    body = "\n".join(line for line in text.splitlines() if not line.startswith("#"))
    return comments, list(csv.DictReader(io.StringIO(body)))


def test_fmt():
    assert fmt(None) == "none"
    assert fmt(-0.0) == "0"
    assert fmt(1 / 3) == "0.333333333333"
    assert fmt(True) == "pass"
    assert fmt(7) == "7"


def test_kernel_at_zero_distance(capsys):
    code, out, _ = invoke(capsys, "kernel", "--d", "0", "--t-max", "5")
    assert code == 0
    comments, rows = parse(out)
    assert "# command = kernel" in comments
    assert "# d = 0.0" in comments
    assert len(rows) == 101
    assert {r["b"] for r in rows} == {"1"}
    assert rows[0]["a"] == "1"


def test_evolve_output(capsys):
    code, out, _ = invoke(capsys, "evolve", "--state", "psi1", "--d", "6",
                          "--temperature", "100", "--t-max", "10")
    assert code == 0
    _, rows = parse(out)
    assert list(rows[0]) == ["t_ps", "a", "b", "concurrence", "eof"]
    eof = [float(r["eof"]) for r in rows]
    assert eof[0] == pytest.approx(1.0)
    assert eof[-1] < eof[0]


def test_evolve_with_states(capsys):
    code, out, _ = invoke(capsys, "evolve", "--t-max", "0.1", "--states")
    assert code == 0
    _, rows = parse(out)
    assert len(rows[0]) == 5 + 32
    assert float(rows[0]["rho_00_re"]) == pytest.approx(0.25)


def test_config_file_and_env(tmp_path, capsys, monkeypatch):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("temperature = 150\nstate = psi1\n")
    code, out, _ = invoke(capsys, "disentanglement-time", "--config", str(cfg))
    assert code == 0
    _, rows = parse(out)
    assert rows[0]["temperature_K"] == "150"
    assert 0 < float(rows[0]["t_d_ps"]) < 10
    monkeypatch.setenv("DISENTANGLE_CONFIG", str(cfg))
    code, out2, _ = invoke(capsys, "disentanglement-time")
    assert code == 0 and out2 == out
    # flags override the file
    code, out3, _ = invoke(capsys, "disentanglement-time", "--temperature", "40")
    assert parse(out3)[1][0]["t_d_ps"] == "none"


def test_critical_temperature_none_at_contact(capsys):
    code, out, _ = invoke(capsys, "critical-temperature", "--d", "0")
    assert code == 0
    assert parse(out)[1][0]["critical_temperature_K"] == "none"


def test_out_file(tmp_path, capsys):
    target = tmp_path / "k.csv"
    code, out, _ = invoke(capsys, "kernel", "--t-max", "1", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("# command = kernel\n")


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["kernel", "--bogus", "1"],
    ["kernel", "--d", "-1"],
    ["kernel", "--temperature", "warm"],
    ["kernel", "--config", "/nonexistent/run.cfg"],
    ["kernel", "--t-max", "1", "--out", "/nonexistent/dir/out.csv"],
])
def test_usage_errors(capsys, argv):
    code, _, err = invoke(capsys, *argv)
    assert code == 2
    assert "usage" in err or "error" in err


def test_domain_error(capsys):
    code, out, err = invoke(capsys, "disentanglement-time", "--delta-e", "6")
    assert code == 1
    assert out == "" and "delta_e" in err


def test_failed_sweep_points_set_exit_status(capsys):
    code, out, _ = invoke(capsys, "sweep-temperature", "--delta-e", "1",
                          "--temperature-min", "0", "--temperature-max", "10")
    assert code == 1
    _, rows = parse(out)
    assert len(rows) == 3
    assert all(r["error"].startswith("UnsupportedConfigurationError") for r in rows)


def test_repeated_runs_are_identical(capsys):
    argv = ["evolve", "--delta-e", "6", "--t-max", "4", "--states"]
    first = invoke(capsys, *argv)
    second = invoke(capsys, *argv)
    assert first == second
