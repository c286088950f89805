"""CLI and configuration tests: strict parsing, command behaviour, and the
end-to-end determinism contract."""

import os
import subprocess
import sys

import pytest

from zetamean.cli import ConfigError, RunConfig, load_config, main


def _write(tmp_path, text):
    path = tmp_path / "run.cfg"
    path.write_text(text)
    return path


def test_minimal_config_fills_defaults(tmp_path):
    cfg = load_config(_write(tmp_path, "command = constants\n"))
    assert cfg.command == "constants"
    assert cfg.max_order == 12
    assert cfg.format == "csv"


def test_unknown_key_fatal_with_location(tmp_path):
    path = _write(tmp_path, "command = constants\ntypo_key = 3\n")
    with pytest.raises(ConfigError, match=r"run\.cfg:2.*typo_key"):
        load_config(path)


def test_grid_out_of_order_rejected(tmp_path):
    path = _write(tmp_path, "command = compare\ngrid = 100, 300, 200\n")
    with pytest.raises(ConfigError, match=r"\(300\.0, 200\.0\)"):
        load_config(path)


def test_mollifier_requires_polynomial(tmp_path):
    path = _write(tmp_path, "command = empirical\ncoeffs = mollifier\n")
    with pytest.raises(ConfigError, match="mollifier_poly"):
        load_config(path)


def test_comments_and_inline_comments(tmp_path):
    text = "# run\ncommand = constants\nmax_order = 8  # inline\n"
    cfg = load_config(_write(tmp_path, text))
    assert cfg.max_order == 8


def test_bad_value_reports_line(tmp_path):
    path = _write(tmp_path, "command = zeros\ntmax = not-a-number\n")
    with pytest.raises(ConfigError, match=r"run\.cfg:2"):
        load_config(path)


def test_runconfig_validation():
    with pytest.raises(ConfigError):
        RunConfig(command="frobnicate")
    with pytest.raises(ConfigError):
        RunConfig(command="compare", coeffs="nonsense")
    with pytest.raises(ConfigError):
        RunConfig(command="compare", grid=(100.0, 2e4))


def test_constants_command_stdout(capsys):
    assert main(["constants", "--max-order", "4"]) == 0
    out = capsys.readouterr().out
    lines = out.strip().splitlines()
    assert lines[0] == "u,gamma_u,tilde_gamma_u,eta_u"
    assert len(lines) == 6
    gamma0 = float(lines[1].split(",")[1])
    assert abs(gamma0 - 0.5772156649) < 1e-9


def test_zeros_find_writes_29_lines(tmp_path):
    out = tmp_path / "zeros.txt"
    assert main(["zeros", "find", "--tmax", "100", "--output", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 29
    assert abs(float(lines[0]) - 14.134725142) < 1e-6


def test_zeros_find_requires_tmax():
    assert main(["zeros", "find"]) == 2


def test_unknown_flag_value_exits_nonzero(tmp_path):
    cfg = _write(tmp_path, "command = constants\nbroken = 1\n")
    assert main(["constants", "--config", str(cfg)]) == 2


def test_mainterm_json(tmp_path, capsys):
    assert main(["mainterm", "--m", "1", "--height", "300"]) == 0
    out = capsys.readouterr().out
    import json

    data = json.loads(out)
    assert data["height"] == 300.0
    assert "pq_polynomials" in data["pieces"]


def test_compare_fujii_end_to_end(tmp_path):
    out = tmp_path / "fujii.csv"
    rc = main(
        ["compare", "--preset", "fujii", "--grid", "200,500", "--output", str(out)]
    )
    assert rc == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0].startswith("T,emp_re")
    assert len(lines) == 3
    deviations = [float(line.split(",")[-1]) for line in lines[1:]]
    assert all(d < 0.10 for d in deviations)


def test_compare_determinism_across_worker_counts(tmp_path):
    """Byte-identical CSV whatever ZETAMEAN_THREADS says."""
    outputs = []
    for threads in ("1", "4"):
        out = tmp_path / f"run_{threads}.csv"
        env = dict(os.environ, ZETAMEAN_THREADS=threads)
        proc = subprocess.run(
            [
                sys.executable,
                "-m",
                "zetamean.cli",
                "compare",
                "--preset",
                "fujii",
                "--grid",
                "200,400",
                "--output",
                str(out),
            ],
            env=env,
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stderr
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]


def test_flags_override_config_file(tmp_path, capsys):
    cfg = _write(tmp_path, "command = constants\nmax_order = 12\n")
    assert main(["constants", "--config", str(cfg), "--max-order", "3"]) == 0
    out = capsys.readouterr().out
    assert len(out.strip().splitlines()) == 5  # header + orders 0..3


def test_empirical_command(tmp_path):
    out = tmp_path / "emp.csv"
    rc = main(
        [
            "empirical",
            "--m",
            "1",
            "--grid",
            "100,200",
            "--coeffs",
            "delta",
            "--output",
            str(out),
        ]
    )
    assert rc == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "T,sum_re,sum_im"
    assert len(lines) == 3


def test_moments_command(tmp_path):
    out = tmp_path / "mom.csv"
    rc = main(["moments", "--m", "1", "--grid", "200", "--output", str(out)])
    assert rc == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "T,moment,leading_order,ratio"
    ratio = float(lines[1].split(",")[-1])
    assert 0.0 < ratio < 2.0


def test_compare_with_zero_file(tmp_path):
    zero_file = tmp_path / "zeros.txt"
    assert main(["zeros", "find", "--tmax", "250", "--output", str(zero_file)]) == 0
    out = tmp_path / "cmp.csv"
    rc = main(
        [
            "compare",
            "--preset",
            "fujii",
            "--grid",
            "200",
            "--zeros",
            str(zero_file),
            "--output",
            str(out),
        ]
    )
    assert rc == 0
    assert len(out.read_text().strip().splitlines()) == 2
