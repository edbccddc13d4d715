"""End-to-end CLI runs: file formats, manifests, exit codes, determinism."""

import csv
import json
import math
import subprocess
import sys


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "sqspin.cli", *args],
        capture_output=True, text=True, timeout=300)


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_version_flag():
    proc = run_cli("--version")
    assert proc.returncode == 0
    assert "sqspin" in proc.stdout


def test_phase_diagram_equilibrium_outputs(tmp_path):
    out = tmp_path / "pd.csv"
    proc = run_cli("phase-diagram", "--mode", "equilibrium",
                   "--g", "0.5:4.5:9", "--t", "0:1:3", "--out", str(out))
    assert proc.returncode == 0
    rows = read_csv(out)
    assert rows[0] == ["g", "axis2", "phase", "omega", "h", "alpha"]
    assert len(rows) == 1 + 9 * 3
    phases = {r[2] for r in rows[1:]}
    assert phases <= {"ordered", "disordered", "critical"}
    assert "ordered" in phases and "disordered" in phases

    companion = tmp_path / "pd.critical_line.csv"
    assert companion.exists()
    crit = read_csv(companion)
    assert crit[0] == ["g", "axis2"]
    t0 = [float(r[0]) for r in crit[1:] if float(r[1]) == 0.0]
    assert any(abs(g - 4.0) < 1e-8 for g in t0)

    manifest = json.loads((tmp_path / "pd.csv.manifest.json").read_text())
    assert manifest["command"] == "phase-diagram"
    assert manifest["parameters"]["g"] == "0.5:4.5:9"
    assert manifest["failures"] == 0
    assert "timestamp" in manifest and "version" in manifest


def test_phase_diagram_is_deterministic(tmp_path):
    args = ("phase-diagram", "--mode", "ness", "--g", "0.3:3.9:7",
            "--gamma", "0:1.5:4")
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run_cli(*args, "--out", str(out1)).returncode == 0
    assert run_cli(*args, "--out", str(out2)).returncode == 0
    assert out1.read_bytes() == out2.read_bytes()
    m1 = json.loads((tmp_path / "a.csv.manifest.json").read_text())
    m2 = json.loads((tmp_path / "b.csv.manifest.json").read_text())
    m1.pop("timestamp"), m2.pop("timestamp")
    assert m1 == m2


def test_phase_diagram_requires_the_second_axis(tmp_path):
    proc = run_cli("phase-diagram", "--mode", "equilibrium",
                   "--g", "1:2:3", "--out", str(tmp_path / "x.csv"))
    assert proc.returncode == 2
    assert "--t" in proc.stderr


def test_csv_floats_roundtrip_doubles(tmp_path):
    out = tmp_path / "pd.csv"
    run_cli("phase-diagram", "--mode", "equilibrium",
            "--g", "1:2:3", "--t", "0:1:3", "--out", str(out))
    for row in read_csv(out)[1:]:
        omega = float(row[3])
        assert f"{omega:.17g}" == row[3]


def test_qfi_equilibrium_sweep(tmp_path):
    out = tmp_path / "q.csv"
    proc = run_cli("qfi", "--g", "0.5:3.5:7", "--out", str(out))
    assert proc.returncode == 0
    rows = read_csv(out)
    assert rows[0] == ["g", "qfi", "term_displacement", "term_squeezing"]
    gs = [float(r[0]) for r in rows[1:]]
    assert gs == sorted(gs) and len(gs) == 7
    g1 = next(r for r in rows[1:] if float(r[0]) == 1.0)
    assert float(g1[1]) == 0.1875


def test_qfi_sweep_crossing_the_transition(tmp_path):
    out = tmp_path / "q.csv"
    proc = run_cli("qfi", "--g", "3:5:5", "--out", str(out))
    assert proc.returncode == 0
    by_g = {float(r[0]): r for r in read_csv(out)[1:]}
    assert math.isinf(float(by_g[4.0][1]))
    assert float(by_g[4.5][1]) == 0.0 and float(by_g[5.0][1]) == 0.0


def test_qfi_ness_mode(tmp_path):
    out = tmp_path / "qn.csv"
    proc = run_cli("qfi", "--mode", "ness", "--gamma", "0.5",
                   "--g", "1:3:5", "--out", str(out))
    assert proc.returncode == 0
    rows = read_csv(out)
    assert rows[0] == ["g", "qfi", "term_displacement", "term_squeezing", "gamma"]
    assert all(float(r[4]) == 0.5 for r in rows[1:])


def test_qfi_mode_flag_validation(tmp_path):
    out = str(tmp_path / "x.csv")
    assert run_cli("qfi", "--mode", "ness", "--g", "1:3:5", "--out", out).returncode == 2
    assert run_cli("qfi", "--gamma", "0.3", "--g", "1:3:5", "--out", out).returncode == 2


def test_fisher_single_point(tmp_path):
    out = tmp_path / "f.csv"
    proc = run_cli("fisher", "--g", "0.9:1.1:2", "--omega", "1.0", "--out", str(out))
    assert proc.returncode == 0
    rows = read_csv(out)
    assert rows[0] == ["g", "omega_meas", "fisher", "qfi", "normalized"]
    assert len(rows) == 3
    for r in rows[1:]:
        assert 0.0 < float(r[2]) <= float(r[3]) * (1.0 + 1e-6)
        assert 0.0 < float(r[4]) <= 1.0 + 1e-6


def test_fisher_partial_failure_exit_code(tmp_path):
    # the derivative stencil spills into the disordered side this close to g=4
    out = tmp_path / "f.csv"
    proc = run_cli("fisher", "--g", "3.9999999:4.5:2", "--omega", "1.0",
                   "--out", str(out))
    assert proc.returncode == 3
    rows = read_csv(out)
    assert len(rows) == 3
    assert all(r[2] == "nan" for r in rows[1:])


def test_fisher_vs_squeezing_curve(tmp_path):
    out = tmp_path / "fs.csv"
    proc = run_cli("fisher-vs-squeezing", "--g", "1.0", "--r", "0:0.8:5",
                   "--out", str(out))
    assert proc.returncode == 0
    rows = read_csv(out)
    assert rows[0] == ["r", "fisher"]
    values = [float(r[1]) for r in rows[1:]]
    assert all(b >= a - 1e-9 for a, b in zip(values, values[1:]))
    # photon counting stays at the quantum bound along the whole curve
    assert all(abs(v - 0.1875) < 1e-8 for v in values)


def test_fisher_vs_squeezing_rejects_bad_coupling(tmp_path):
    proc = run_cli("fisher-vs-squeezing", "--g", "5.0", "--r", "0:1:3",
                   "--out", str(tmp_path / "x.csv"))
    assert proc.returncode == 2


def test_range_syntax_errors(tmp_path):
    out = str(tmp_path / "x.csv")
    assert run_cli("qfi", "--g", "1:2", "--out", out).returncode == 2
    assert run_cli("qfi", "--g", "2:1:5", "--out", out).returncode == 2
    assert run_cli("qfi", "--g", "1:2:1", "--out", out).returncode == 2


def test_json_format(tmp_path):
    out = tmp_path / "q.json"
    proc = run_cli("qfi", "--g", "3.5:4.5:3", "--format", "json", "--out", str(out))
    assert proc.returncode == 0
    payload = json.loads(out.read_text())
    assert isinstance(payload, list) and len(payload) == 3
    assert set(payload[0]) == {"g", "qfi", "term_displacement", "term_squeezing"}
    # non-finite values must survive the JSON round trip as strings
    assert payload[1]["qfi"] == "inf"


def test_plot_flag_renders_png(tmp_path):
    out = tmp_path / "pd.csv"
    proc = run_cli("phase-diagram", "--mode", "equilibrium", "--g", "1:5:5",
                   "--t", "0:1:3", "--out", str(out), "--plot")
    assert proc.returncode == 0
    png = tmp_path / "pd.png"
    assert png.exists()
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_validate_quick_passes(tmp_path):
    report = tmp_path / "report.json"
    proc = run_cli("validate", "--level", "quick", "--out", str(report))
    assert proc.returncode == 0
    assert "checks passed" in proc.stdout
    payload = json.loads(report.read_text())
    assert len(payload) >= 12
    assert all(entry["passed"] for entry in payload)
