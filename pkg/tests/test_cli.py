"""CLI behavior: datasets, determinism, presets, config files, exit codes."""
import json
import math

import numpy as np
import pytest

from hartman.cli import main
from hartman.potential import ATOMIC, SquarePotential
from hartman.verify import transfer_matrix_amplitudes


def run_cli(args):
    return main(args)


def read_csv(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows


def test_amplitudes_free_case_all_zero_phase(tmp_path):
    out = tmp_path / "amp.csv"
    code = run_cli([
        "amplitudes", "--v0", "0", "--width", "2", "--k-min", "0.1",
        "--k-max", "5", "--samples", "50", "--out", str(out),
    ])
    assert code == 0
    header, rows = read_csv(out)
    assert header == ["d", "k", "re_T", "im_T", "abs_T2", "phi_T", "delta0", "delta1"]
    phi = [float(r[5]) for r in rows]
    assert max(abs(x) for x in phi) < 1e-12
    assert all(float(r[4]) == pytest.approx(1.0, abs=1e-14) for r in rows)


def test_amplitudes_column_matches_matching_oracle(tmp_path):
    out = tmp_path / "amp.csv"
    run_cli([
        "amplitudes", "--v0", "5", "--width", "1", "--k-min", "0.5",
        "--k-max", "3", "--samples", "40", "--out", str(out),
    ])
    _, rows = read_csv(out)
    pot = SquarePotential(5.0, 0.5)
    for r in rows[::7]:
        k = float(r[1])
        t_o, _ = transfer_matrix_amplitudes(pot, ATOMIC, k)
        assert float(r[4]) == pytest.approx(abs(t_o) ** 2, rel=1e-9)


def test_byte_identical_reruns(tmp_path):
    args = [
        "delay-sweep", "--v0-min", "-0.5", "--v0-max", "0.5", "--v0-step", "0.1",
        "--k", "0.1", "--width", "2",
    ]
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    assert run_cli(args + ["--out", str(out1)]) == 0
    assert run_cli(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_csv_roundtrip_exact(tmp_path):
    out = tmp_path / "d.csv"
    run_cli([
        "delay-sweep", "--v0-min", "1.0", "--v0-max", "3.0", "--v0-step", "0.5",
        "--out", str(out),
    ])
    header, rows = read_csv(out)
    # default precision (17 significant digits) round-trips doubles exactly
    from hartman.cli import _delay_row

    for r in rows:
        v0 = float(r[0])
        row = _delay_row((v0, 0.1, 2.0, 1.0, 1.0))
        for got, want in zip(r[1:4], row[1:4]):
            assert float(got) == want


def test_reduced_precision_roundtrip_within_one_ulp(tmp_path):
    out = tmp_path / "p12.csv"
    run_cli([
        "delay-sweep", "--v0-min", "1.0", "--v0-max", "2.0", "--v0-step", "0.5",
        "--precision", "12", "--out", str(out),
    ])
    _, rows = read_csv(out)
    from hartman.cli import _delay_row

    for r in rows:
        row = _delay_row((float(r[0]), 0.1, 2.0, 1.0, 1.0))
        for got, want in zip(r[1:4], row[1:4]):
            # one ulp at 12 emitted significant digits
            ulp = 10.0 ** (math.floor(math.log10(abs(want))) - 11)
            assert abs(float(got) - want) <= ulp


def test_delay_sweep_barrier_rows_obey_simple_bound(tmp_path):
    out = tmp_path / "d.csv"
    run_cli([
        "delay-sweep", "--v0-min", "0.5", "--v0-max", "5.0", "--v0-step", "0.5",
        "--out", str(out),
    ])
    _, rows = read_csv(out)
    for r in rows:
        assert float(r[1]) >= float(r[3]) - 1e-12  # delta_t >= bound_simple
        assert int(r[4]) == 0


def test_fig1_preset_emits_two_width_series(tmp_path):
    out = tmp_path / "fig1.csv"
    code = run_cli([
        "amplitudes", "--preset", "fig1", "--samples", "60", "--k-max", "2.0",
        "--out", str(out),
    ])
    assert code == 0
    _, rows = read_csv(out)
    widths = sorted({float(r[0]) for r in rows})
    assert widths == [1.0, 3.0]
    ks = [float(r[1]) for r in rows]
    assert max(ks) <= 2.0 + 1e-12


def test_no_adaptive_emits_exact_sample_count(tmp_path):
    out = tmp_path / "u.csv"
    run_cli([
        "amplitudes", "--v0", "5", "--width", "2", "--k-min", "0.05",
        "--k-max", "4", "--samples", "64", "--no-adaptive", "--out", str(out),
    ])
    _, rows = read_csv(out)
    ks = np.array([float(r[1]) for r in rows])
    # uniform base grid restricted to the requested range, no refinement rows
    assert np.allclose(np.diff(ks), ks[1] - ks[0], rtol=1e-12)


def test_fig2_preset_overridable(tmp_path):
    out = tmp_path / "fig2.csv"
    code = run_cli([
        "delay-sweep", "--preset", "fig2", "--v0-min", "-0.4",
        "--v0-max", "-0.2", "--v0-step", "0.05", "--out", str(out),
    ])
    assert code == 0
    header, rows = read_csv(out)
    assert header == ["v0", "delta_t", "bound_osc", "bound_simple", "n_b"]
    assert len(rows) == 5
    assert all(int(r[4]) == 1 for r in rows)


def test_packet_sweep_flags_divergent_row(tmp_path):
    out = tmp_path / "p.csv"
    code = run_cli([
        "packet-sweep", "--preset", "fig3", "--v0-min", "-0.05",
        "--v0-max", "0.05", "--v0-step", "0.05", "--out", str(out),
    ])
    assert code == 0
    header, rows = read_csv(out)
    assert header == [
        "v0", "p_t", "t_out", "t_classical", "t_subtracted",
        "classical_defined", "diverged",
    ]
    by_v0 = {float(r[0]): r for r in rows}
    assert by_v0[0.0][6] == "1"  # flagged, not fatal
    assert math.isnan(float(by_v0[0.0][2]))
    assert by_v0[-0.05][6] == "0"
    assert float(by_v0[-0.05][4]) < 0  # advancement window


def test_json_output_with_metadata(tmp_path):
    out = tmp_path / "p.json"
    run_cli([
        "packet-sweep", "--preset", "fig3", "--v0-min", "-0.3",
        "--v0-max", "-0.3", "--v0-step", "1.0", "--format", "json",
        "--out", str(out),
    ])
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert payload["metadata"]["k0"] == pytest.approx(math.pi / 8)
    assert payload["metadata"]["command"] == "packet-sweep"
    (row,) = payload["rows"]
    assert row["p_t"] > 0.5
    assert row["t_subtracted"] < 0


def test_out_dir_env_var(tmp_path, monkeypatch):
    monkeypatch.setenv("HARTMAN_OUT_DIR", str(tmp_path))
    run_cli([
        "delay-sweep", "--v0-min", "1.0", "--v0-max", "1.0", "--v0-step", "1.0",
        "--out", "rel.csv",
    ])
    assert (tmp_path / "rel.csv").exists()


def test_config_file_defaults_and_flag_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("v0-min=1.0\nv0-max=2.0\nv0_step=0.5\nk=0.2\n", encoding="utf-8")
    out = tmp_path / "c.csv"
    run_cli([
        "delay-sweep", "--config", str(cfg), "--v0-step", "1.0",
        "--out", str(out),
    ])
    _, rows = read_csv(out)
    assert [float(r[0]) for r in rows] == [1.0, 2.0]  # step overridden to 1.0


def test_jobs_parallel_matches_serial(tmp_path):
    args = [
        "delay-sweep", "--v0-min", "-1.0", "--v0-max", "0.0", "--v0-step", "0.25",
    ]
    a, b = tmp_path / "serial.csv", tmp_path / "par.csv"
    run_cli(args + ["--out", str(a)])
    run_cli(args + ["--jobs", "3", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_invalid_input_exit_code():
    assert run_cli(["amplitudes", "--v0", "5", "--width", "-1"]) == 2
    assert run_cli(["delay-sweep", "--v0-min", "0", "--v0-max", "1",
                    "--v0-step", "-0.1"]) == 2
    assert run_cli(["packet-sweep", "--v0-min", "0", "--v0-max", "0",
                    "--v0-step", "1", "--k0", "1", "--delta-p", "0.1",
                    "--x0", "5"]) == 2  # packet starts right of the barrier


def test_precision_floor_enforced():
    assert run_cli([
        "delay-sweep", "--v0-min", "0", "--v0-max", "1", "--v0-step", "1",
        "--precision", "6",
    ]) == 2


def test_verify_fast_suite_passes(capsys):
    code = run_cli(["verify", "--skip-slow"])
    out = capsys.readouterr().out
    assert code == 0
    assert "FAIL" not in out


def test_verify_corrupted_tolerance_fails(capsys):
    code = run_cli(["verify", "--skip-slow", "--tolerance-scale", "1e-9"])
    assert code == 1
    out = capsys.readouterr().out
    assert "FAIL" in out


def test_verify_json_format(capsys):
    code = run_cli(["verify", "--skip-slow", "--format", "json"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert all(entry["passed"] for entry in payload)
    assert any("unitarity" in entry["name"] for entry in payload)
