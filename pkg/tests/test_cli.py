import json
from pathlib import Path

import numpy as np
import pytest

from gsee_bench.cli import RunConfig, main, run_evaluate, run_features, run_oracle
from gsee_bench.qubit_features import FEATURE_NAMES

DEMO = Path(__file__).parent.parent / "demo"
CATALOG = DEMO / "catalog"
SOLUTIONS = DEMO / "solutions"


def read_rows(path: Path) -> list[list[str]]:
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# gsee-bench")
    return [line.split(",") for line in lines[1:]]


def test_features_csv_shape(tmp_path):
    config = RunConfig(CATALOG, tmp_path)
    run_features(config)
    rows = read_rows(tmp_path / "features.csv")
    header, data = rows[0], rows[1:]
    assert header == ["task_uuid", *FEATURE_NAMES]
    assert len(data) == 12
    for row in data:
        assert len(row) == 1 + len(FEATURE_NAMES)
        values = [float(v) for v in row[1:]]
        assert all(np.isfinite(values))
    assert (tmp_path / "correlation.csv").exists()
    hist = read_rows(tmp_path / "orbital_histogram.csv")
    assert hist[0] == ["bin_lo", "bin_hi", "count"]
    assert sum(int(r[2]) for r in hist[1:]) == 12


def test_features_single_instance(tmp_path):
    import shutil

    mini = tmp_path / "catalog"
    shutil.copytree(CATALOG / "inst-03", mini / "inst-03")
    out = tmp_path / "out"
    run_features(RunConfig(mini, out))
    rows = read_rows(out / "features.csv")
    assert len(rows) == 2  # header + one data row
    assert not (out / "correlation.csv").exists()


def test_features_resilient_to_bad_fcidump(tmp_path, caplog):
    import shutil

    mini = tmp_path / "catalog"
    shutil.copytree(CATALOG / "inst-01", mini / "inst-01")
    shutil.copytree(CATALOG / "inst-03", mini / "inst-03")
    (mini / "inst-01" / "task-01-1.fcidump").write_text("garbage", encoding="utf-8")
    out = tmp_path / "out"
    run_features(RunConfig(mini, out))
    rows = read_rows(out / "features.csv")
    assert len(rows) == 3  # header + 2 surviving rows
    assert "task-01-1" not in {r[0] for r in rows[1:]}


def test_empty_catalog_is_fatal(tmp_path):
    code = main(["--catalog", str(tmp_path), "--out", str(tmp_path / "o"), "features"])
    assert code == 1


def test_evaluate_outcomes(tmp_path):
    config = RunConfig(CATALOG, tmp_path)
    run_evaluate(config, SOLUTIONS)
    rows = read_rows(tmp_path / "outcomes_size-limited.csv")
    data = {r[0]: r for r in rows[1:]}
    assert len(data) == 12
    assert data["task-03-1"][1] == "solved"
    assert data["task-07-1"][1] == "unsolved"
    assert data["task-10-1"][1] == "unlabeled"
    summary = {r[0]: r for r in read_rows(tmp_path / "solver_summary.csv")[1:]}
    assert summary["exact-echo"][2:] == ["11", "12"]
    assert summary["perturbed"][2:] == ["0", "12"]
    assert summary["size-limited"][2:] == ["6", "11"]


def test_oracle_outputs_match_references(tmp_path):
    config = RunConfig(CATALOG, tmp_path)
    run_oracle(config)
    payload = json.loads((tmp_path / "oracle.json").read_text())
    results = {r["task_uuid"]: r for r in payload["results"]}
    assert len(results) == 12
    instance = json.loads((CATALOG / "inst-01" / "inst-01.problem.json").read_text())
    for task in instance["tasks"]:
        entry = results[task["task_uuid"]]
        assert entry["converged"]
        assert entry["e0"] == pytest.approx(task["reference_energy"], abs=1e-10)
        assert entry["gap"] >= 0.0


def test_solvability_subcommand(tmp_path):
    code = main(
        [
            "--catalog", str(CATALOG), "--out", str(tmp_path),
            "--samples", "900", "--seed", "3",
            "solvability", "--solutions", str(SOLUTIONS), "--solver", "size-limited",
        ]
    )
    assert code == 0
    report = json.loads((tmp_path / "solvability_size-limited.json").read_text())
    assert 0.0 <= report["solvability_ratio"] <= 1.0
    assert report["metrics"]["f1"] == 1.0
    svg = (tmp_path / "latent_map_size-limited.svg").read_text()
    assert svg.startswith("<svg")
    assert "polygon" in svg  # guidestar star marker
    labels = [p["label"] for p in report["training_points"]]
    assert labels.count(None) == 1


def test_solvability_single_class_solver_fails_cleanly(tmp_path):
    code = main(
        [
            "--catalog", str(CATALOG), "--out", str(tmp_path),
            "--samples", "400",
            "solvability", "--solutions", str(SOLUTIONS), "--solver", "exact-echo",
        ]
    )
    assert code == 1


def test_config_file_with_flag_override(tmp_path):
    conf = tmp_path / "conf.json"
    conf.write_text(
        json.dumps(
            {
                "catalog": str(CATALOG),
                "out": str(tmp_path / "from_config"),
                "samples": 400,
                "seed": 11,
            }
        )
    )
    out_override = tmp_path / "overridden"
    code = main(["--config", str(conf), "--out", str(out_override), "features"])
    assert code == 0
    assert (out_override / "features.csv").exists()
    assert not (tmp_path / "from_config").exists()


def test_parallel_features_match_serial(tmp_path):
    serial = tmp_path / "serial"
    parallel = tmp_path / "parallel"
    run_features(RunConfig(CATALOG, serial))
    run_features(RunConfig(CATALOG, parallel, jobs=2))
    assert (serial / "features.csv").read_bytes() == (parallel / "features.csv").read_bytes()


def test_report_byte_identical_reruns(tmp_path):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    for out in (out_a, out_b):
        code = main(
            [
                "--catalog", str(CATALOG), "--out", str(out),
                "--samples", "900", "--seed", "7",
                "report", "--solutions", str(SOLUTIONS),
            ]
        )
        assert code == 0
    files_a = sorted(p.relative_to(out_a) for p in out_a.rglob("*") if p.is_file())
    files_b = sorted(p.relative_to(out_b) for p in out_b.rglob("*") if p.is_file())
    assert files_a == files_b
    for rel in files_a:
        assert (out_a / rel).read_bytes() == (out_b / rel).read_bytes(), rel


def test_invalid_threshold_rejected(tmp_path):
    code = main(
        ["--catalog", str(CATALOG), "--out", str(tmp_path), "--threshold", "1.5", "features"]
    )
    assert code == 1
