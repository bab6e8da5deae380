"""Command-line verbs end to end: reports, CSVs, exit codes, precedence."""

import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from igsched import LogisticScalar, save_model
from igsched.cli import main
from igsched.imaging import read_image, write_pgm

STUB = str(Path(__file__).with_name("provider_stub.py"))


def _report_dict(path) -> dict:
    pairs = {}
    for line in Path(path).read_text().splitlines():
        key, value = line.split("=", 1)
        pairs[key] = value
    return pairs


def test_attribute_report_and_byte_determinism(tmp_path):
    out = tmp_path / "report.txt"
    argv = ["attribute", "--m", "64", "--report", str(out)]
    assert main(argv) == 0
    first = out.read_bytes()
    pairs = _report_dict(out)
    assert pairs["config.scheduler"] == "uniform"
    assert pairs["config.m"] == "64"
    assert pairs["phi.shape"] == "1"
    assert pairs["total_steps"] == "64"
    assert pairs["work.forwards"] == "66"
    assert "timing.wall_s" not in pairs
    assert main(argv) == 0
    assert out.read_bytes() == first


def test_attribute_threshold_search_echoes_found_m(tmp_path):
    out = tmp_path / "report.txt"
    assert main(["attribute", "--delta-th", "0.02", "--report", str(out)]) == 0
    pairs = _report_dict(out)
    assert pairs["config.delta_th"] == "0.02"
    assert pairs["config.m"] == "128"
    assert float(pairs["delta"]) <= 0.02


def test_attribute_writes_to_stdout_by_default(capsys):
    assert main(["attribute", "--m", "8"]) == 0
    captured = capsys.readouterr()
    assert captured.out.startswith("config.scheduler=uniform")
    assert "phi.values=" in captured.out


def test_attribute_nonuniform_report_has_schedule(tmp_path):
    out = tmp_path / "report.txt"
    assert main(["attribute", "--scheduler", "nonuniform", "--n-int", "8",
                 "--m", "64", "--report", str(out)]) == 0
    pairs = _report_dict(out)
    assert pairs["config.n_int"] == "8"
    assert pairs["schedule.n_int"] == "8"
    assert len(pairs["schedule.steps"].split()) == 8
    assert pairs["work.probe_forwards"] == "9"


def test_attribute_timing_flag_adds_wall_clock(tmp_path):
    out = tmp_path / "report.txt"
    assert main(["attribute", "--m", "8", "--timing", "--report", str(out)]) == 0
    assert float(_report_dict(out)["timing.wall_s"]) > 0.0


def _image_job(tmp_path):
    rng = np.random.default_rng(3)
    weights = rng.normal(size=64)
    wfile = tmp_path / "weights.txt"
    save_model(LogisticScalar(weights, input_shape=(8, 8)), wfile)
    img = tmp_path / "input.pgm"
    write_pgm(img, rng.integers(0, 256, size=(8, 8), dtype=np.uint8))
    return wfile, img


def test_attribute_image_input_and_auto_heatmap(tmp_path):
    wfile, img = _image_job(tmp_path)
    out = tmp_path / "report.txt"
    assert main(["attribute", "--weights", str(wfile), "--input", str(img),
                 "--m", "16", "--report", str(out)]) == 0
    pairs = _report_dict(out)
    assert pairs["phi.shape"] == "8 8"
    assert len(pairs["phi.values"].split()) == 64
    heat = read_image(str(out) + ".pgm")
    assert heat.shape == (8, 8)


def test_attribute_explicit_heatmap_path(tmp_path):
    wfile, img = _image_job(tmp_path)
    heat_path = tmp_path / "custom.pgm"
    assert main(["attribute", "--weights", str(wfile), "--input", str(img),
                 "--m", "8", "--heatmap", str(heat_path)]) == 0
    assert heat_path.exists()
    assert not (tmp_path / "report.txt.pgm").exists()


def test_attribute_scalar_job_writes_no_heatmap(tmp_path):
    out = tmp_path / "report.txt"
    assert main(["attribute", "--m", "8", "--report", str(out)]) == 0
    assert not Path(str(out) + ".pgm").exists()


def test_compare_csv_frozen_canonical_rows(tmp_path):
    out = tmp_path / "table.csv"
    assert main(["compare", "--delta-ths", "0.02,0.005", "--n-ints", "4,8",
                 "--csv", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == ("scheduler,n_int,delta_th,steps,forwards,backwards,"
                        "reduction_ratio,overhead_fraction")
    assert lines[1] == "uniform,,0.02,128,130,128,1.0,0.0"
    assert lines[2] == "nonuniform,4,0.02,32,37,32,4.0,0.13513513513513514"
    assert lines[3] == "nonuniform,8,0.02,64,73,64,2.0,0.1232876712328767"
    assert lines[4] == "uniform,,0.005,256,258,256,1.0,0.0"
    assert lines[5] == "nonuniform,4,0.005,64,69,64,4.0,0.07246376811594203"
    assert lines[6] == "nonuniform,8,0.005,64,73,64,4.0,0.1232876712328767"


def test_compare_writes_stdout_without_csv(capsys):
    assert main(["compare", "--delta-ths", "0.02", "--n-ints", "4"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("scheduler,n_int,delta_th")
    assert "nonuniform,4,0.02,32" in out


def test_compare_latency_csv(tmp_path):
    table = tmp_path / "table.csv"
    lat = tmp_path / "lat.csv"
    assert main(["compare", "--delta-ths", "0.02", "--n-ints", "4",
                 "--csv", str(table), "--latency-csv", str(lat),
                 "--warmup", "0", "--repeats", "3"]) == 0
    lines = lat.read_text().splitlines()
    assert lines[0] == "scheduler,n_int,delta_th,steps,median_s,mad_s,normalized_latency"
    assert len(lines) == 3  # uniform + nonuniform(4)
    norms = [float(line.split(",")[-1]) for line in lines[1:]]
    assert min(norms) == 1.0


def test_bench_report_and_csv(tmp_path):
    out = tmp_path / "bench.csv"
    report = tmp_path / "bench.txt"
    assert main(["bench", "--scheduler", "nonuniform", "--n-int", "8",
                 "--m", "64", "--warmup", "1", "--repeats", "3",
                 "--csv", str(out), "--report", str(report)]) == 0
    pairs = _report_dict(report)
    assert pairs["config.scheduler"] == "nonuniform(n_int=8)"
    assert pairs["work.probe_forwards"] == "9"
    assert float(pairs["counter_estimate"]) == 9 / 137
    assert float(pairs["overhead_time_fraction"]) > 0.0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("scheduler,m,rule,batch_size")
    cells = lines[1].split(",")
    assert cells[0] == "nonuniform(n_int=8)"
    assert cells[1] == "64"


def test_bench_searches_m_when_given_threshold(tmp_path):
    report = tmp_path / "bench.txt"
    assert main(["bench", "--delta-th", "0.02", "--warmup", "0",
                 "--repeats", "3", "--report", str(report)]) == 0
    assert _report_dict(report)["config.m"] == "128"


def test_sweep_csv_rows_and_threshold_report(tmp_path):
    csv_out = tmp_path / "sweep.csv"
    report = tmp_path / "sweep.txt"
    assert main(["sweep", "--m-grid", "16,32", "--delta-th", "0.9",
                 "--csv", str(csv_out), "--report", str(report)]) == 0
    lines = csv_out.read_text().splitlines()
    assert lines[0] == "scheduler,m,delta,forwards,backwards,probe_forwards"
    assert [line.split(",")[1] for line in lines[1:]] == ["16", "32"]
    pairs = _report_dict(report)
    assert pairs["scheduler"] == "uniform"
    assert pairs["steps_at_threshold"] == "32"


def test_sweep_stdout_without_csv(capsys):
    assert main(["sweep", "--m-grid", "16"]) == 0
    assert capsys.readouterr().out.startswith("scheduler,m,delta")


def test_config_file_with_flag_override(tmp_path):
    ini = tmp_path / "run.ini"
    ini.write_text("[run]\nscheduler = nonuniform\nn_int = 8\nm = 64\n")
    out = tmp_path / "report.txt"
    assert main(["attribute", "--config", str(ini), "--n-int", "4",
                 "--report", str(out)]) == 0
    pairs = _report_dict(out)
    assert pairs["config.scheduler"] == "nonuniform"
    assert pairs["config.n_int"] == "4"  # flag beats file
    assert pairs["config.m"] == "64"


def test_remote_endpoint_through_cli(tmp_path):
    out = tmp_path / "report.txt"
    endpoint = f"stdio:{sys.executable} {STUB}"
    assert main(["attribute", "--endpoint", endpoint, "--m", "4",
                 "--report", str(out)]) == 0
    pairs = _report_dict(out)
    assert pairs["phi.shape"] == "2"
    assert float(pairs["delta"]) < 0.01


def test_exit_code_2_on_config_errors(tmp_path, capsys):
    assert main(["attribute", "--m", "8", "--delta-th", "0.1"]) == 2
    assert "exactly one of m / delta_th" in capsys.readouterr().err
    assert main(["attribute", "--model", "NoSuchModel", "--m", "8"]) == 2
    assert "igsched: error:" in capsys.readouterr().err
    assert main(["sweep", "--m-grid", "64,16"]) == 2
    assert main(["attribute", "--model", "LogisticScalar", "--m", "8"]) == 2
    assert "has no default weights" in capsys.readouterr().err


def test_exit_code_3_reports_best_attempt(capsys):
    assert main(["attribute", "--delta-th", "1e-14", "--m-max", "64"]) == 3
    err = capsys.readouterr().err
    assert "unreachable" in err and "best delta" in err


def test_exit_code_4_on_transport_failure(capsys):
    assert main(["attribute", "--endpoint", "tcp:127.0.0.1:1", "--m", "8"]) == 4
    assert "igsched: error:" in capsys.readouterr().err


def test_module_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "igsched", "attribute", "--m", "8"],
        capture_output=True, text=True, timeout=60,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("config.scheduler=uniform")
