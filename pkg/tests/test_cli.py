"""Command-line interface behaviour and golden outputs."""

import json

import pytest

from rigikit import LaurentPoly, catalog, framework_to_dict, normalize, poly_close, poly_parse
from rigikit.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_det_kagome_matches_golden_normal_form(capsys):
    code, out, _ = run(capsys, "det", "kagome")
    assert code == 0
    got = poly_parse(out.strip(), 2)
    zw = LaurentPoly(2, {(1, 1): 1.0})
    zb1 = LaurentPoly(2, {(-1, 0): 1.0, (0, 0): -1.0})
    wb1 = LaurentPoly(2, {(0, -1): 1.0, (0, 0): -1.0})
    zbwb = LaurentPoly(2, {(-1, 0): 1.0, (0, -1): -1.0})
    expected = normalize(zw * zb1 * wb1 * zbwb)
    assert poly_close(got, expected)


def test_rumscan_grid2_row_counts(capsys):
    code, out, _ = run(capsys, "rumscan", "grid2", "--grid", "8")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "s1,s2,mu,sigma_min,abs_det"
    assert len(lines) == 1 + 64
    mus = [int(line.split(",")[2]) for line in lines[1:]]
    assert sum(1 for m in mus if m >= 1) == 15


def test_rumscan_threads_same_output(capsys):
    _, single, _ = run(capsys, "rumscan", "kagome", "--grid", "6")
    _, multi, _ = run(capsys, "rumscan", "kagome", "--grid", "6", "--threads", "3")
    assert single == multi


def test_pebble_triangle_file_and_name(capsys, tmp_path):
    path = tmp_path / "triangle.json"
    path.write_text(json.dumps(framework_to_dict(catalog("triangle"))))
    code, out, _ = run(capsys, "pebble", "--k", "2", "--l", "3", str(path))
    assert code == 0
    assert out.splitlines()[0] == "tight"
    code, out2, _ = run(capsys, "pebble", "--k", "2", "--l", "3", "triangle")
    assert out2 == out


def test_pebble_motif_runs_on_quotient(capsys):
    code, out, _ = run(capsys, "pebble", "--k", "2", "--l", "2", "grid2-reduced")
    assert code == 0
    assert out.splitlines()[0] == "tight"


def test_catalog_emit_round_trips_through_symbol(capsys, tmp_path):
    from rigikit.catalog import MOTIF_NAMES

    for name in MOTIF_NAMES:
        path = tmp_path / f"{name}.json"
        code, _, _ = run(capsys, "catalog", name, "--seed", "5", "--emit", str(path))
        assert code == 0
        _, from_file, _ = run(capsys, "symbol", str(path))
        _, from_name, _ = run(capsys, "symbol", name, "--seed", "5")
        assert from_file == from_name, name


def test_byte_identical_output_across_runs(capsys):
    _, first, _ = run(capsys, "det", "quadgrid", "--seed", "3")
    _, second, _ = run(capsys, "det", "quadgrid", "--seed", "3")
    assert first == second


def test_unknown_name_is_domain_error(capsys):
    code, _, err = run(capsys, "det", "nonesuch")
    assert code == 1
    assert "error" in err


def test_motif_command_rejects_finite_framework(capsys):
    code, _, err = run(capsys, "det", "triangle")
    assert code == 1
    assert "motif" in err


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as info:
        main(["rumscan", "grid2"])  # missing required --grid
    assert info.value.code == 2


def test_strip_lock_output(capsys):
    code, out, _ = run(capsys, "strip", "--a", "2", "--b", "1", "--lock")
    assert code == 0
    lines = out.strip().split("\n")
    alpha1 = float(lines[0].split("=")[1])
    lam = float(lines[1].split("=")[1])
    assert 0 < lam < alpha1


def test_strip_gamma_output(capsys):
    code, out, _ = run(capsys, "strip", "--a", "2", "--b", "1", "--alpha", "0.1")
    gamma = float(out.strip().split("=")[1])
    assert code == 0
    assert 0 < gamma < 0.1


def test_deform_csv(capsys, tmp_path):
    out_path = tmp_path / "path.csv"
    code, out, _ = run(capsys, "deform", "quadgrid", "--seed", "0",
                       "--tmax", "0.1", "--steps", "5", "--out", str(out_path))
    assert code == 0
    lines = out_path.read_text().strip().split("\n")
    assert len(lines) == 1 + 6
    assert lines[0].startswith("t,alpha,beta,v0x,v0y")
    drift = max(float(line.split(",")[-1]) for line in lines[1:])
    assert drift < 1e-9


def test_wavemode_reports_multiplicity(capsys):
    code, out, _ = run(capsys, "wavemode", "kagome", "--phase", "0.33333333333333331,0.33333333333333331")
    assert code == 0
    assert "mu = 1" in out
    assert out.count("flex") == 1


def test_flexcheck_passes_on_kagome(capsys):
    code, out, _ = run(capsys, "flexcheck", "kagome", "--phase", "0,0", "--patch", "2")
    assert code == 0
    assert out.count("ok") == 3


def test_finite_reports(capsys):
    code, out, _ = run(capsys, "finite", "triangle")
    assert code == 0
    assert "rank = 3" in out
    assert "flex space dimension = 3" in out
    assert "stress space dimension = 0" in out


def test_maxwell_and_ross(capsys):
    code, out, _ = run(capsys, "maxwell", "kagome")
    assert code == 0
    assert "balance = 0" in out
    code, out, _ = run(capsys, "ross", "grid2-reduced")
    assert code == 0
    assert "pass" in out


def test_entry_point_installed():
    import subprocess
    import sys

    proc = subprocess.run(
        [sys.executable, "-m", "rigikit.cli", "maxwell", "kagome"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "balance = 0" in proc.stdout
