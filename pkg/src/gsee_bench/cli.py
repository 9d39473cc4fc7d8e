"""Command-line orchestrator: features, evaluate, solvability, oracle, report.

Subcommands scan a catalog directory tree, write CSV/JSON/SVG artifacts into
the output directory, and isolate per-task failures (logged, never fatal).
All outputs are deterministic for a fixed seed and configuration; CSV and SVG
files start with a comment line carrying the tool version and a hash of the
semantic configuration, JSON files carry the same data under "_meta".
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .catalog import (
    ProblemInstance,
    Task,
    Verdict,
    catalog_tasks,
    evaluate_solver,
    scan_catalog,
    scan_solutions,
)
from .errors import EmptyCatalog, GseeBenchError, InsufficientLabels, SingleClass
from .fcidump import parse_fcidump
from .fermionic import DEFAULT_DF_THRESHOLD
from .fci import solve_ground_state
from .ml.solvability import SolvabilityConfig, estimate_solvability
from .plots import render_latent_map
from .qubit_features import (
    FEATURE_NAMES,
    SPIN_ORBITAL_ORDERING,
    compute_feature_vector,
    correlation_matrix,
)

log = logging.getLogger(__name__)

# JW term construction is quartic in orbital count; larger dumps are skipped
# as per-task failures rather than stalling the whole run.
FEATURE_NORB_CAP = 32
HISTOGRAM_BIN_WIDTH = 10


@dataclass(frozen=True)
class RunConfig:
    catalog_dir: Path
    output_dir: Path
    df_threshold: float = DEFAULT_DF_THRESHOLD
    df_absolute: bool = False
    latent: str = "pca"
    latent_dim: int = 2
    n_samples: int = 10_000
    threshold: float = 0.5
    seed: int = 0
    jobs: int = 1

    def __post_init__(self):
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError("threshold must lie in [0, 1]")
        if self.latent not in ("pca", "nnmf"):
            raise ValueError("latent must be 'pca' or 'nnmf'")

    def semantic_hash(self) -> str:
        """Hash of result-affecting settings; paths and job count excluded."""
        payload = {
            "df_threshold": self.df_threshold,
            "df_absolute": self.df_absolute,
            "latent": self.latent,
            "latent_dim": self.latent_dim,
            "n_samples": self.n_samples,
            "threshold": self.threshold,
            "seed": self.seed,
        }
        blob = json.dumps(payload, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


def _header_comment(config: RunConfig) -> str:
    return f"# gsee-bench {__version__} config={config.semantic_hash()}"


def _write_csv(path: Path, config: RunConfig, columns: list[str], rows) -> None:
    lines = [_header_comment(config), ",".join(columns)]
    for row in rows:
        lines.append(",".join(_render_cell(cell) for cell in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _render_cell(cell) -> str:
    if cell is None:
        return ""
    if isinstance(cell, bool):
        return str(cell).lower()
    if isinstance(cell, float):
        return repr(cell)
    return str(cell)


def _write_json(path: Path, config: RunConfig, payload: dict) -> None:
    payload = {
        "_meta": {
            "tool": f"gsee-bench {__version__}",
            "config": config.semantic_hash(),
            "spin_orbital_ordering": SPIN_ORBITAL_ORDERING,
        },
        **payload,
    }
    path.write_text(json.dumps(payload, indent=1) + "\n", encoding="utf-8")


def _load_catalog(config: RunConfig) -> list[ProblemInstance]:
    instances = scan_catalog(config.catalog_dir)
    if not instances:
        raise EmptyCatalog(f"no *.problem.json under {config.catalog_dir}")
    return instances


@dataclass(frozen=True)
class FeatureRows:
    """Per-task feature table for the tasks whose extraction succeeded."""

    task_uuids: tuple[str, ...]
    norbs: tuple[int, ...]
    vectors: tuple


def _features_for_task(args: tuple[Task, float, bool]):
    task, df_threshold, df_absolute = args
    with open(task.fcidump_path, encoding="utf-8") as fh:
        dump = parse_fcidump(fh)
    if dump.norb > FEATURE_NORB_CAP:
        raise GseeBenchError(f"norb={dump.norb} exceeds feature cap {FEATURE_NORB_CAP}")
    vector = compute_feature_vector(dump, df_threshold, df_absolute)
    return task.task_uuid, dump.norb, vector


def _try_features(item):
    try:
        return _features_for_task(item)
    except Exception as exc:  # noqa: BLE001 - per-task isolation is the contract
        return exc


def _collect_features(config: RunConfig, tasks: list[Task]) -> FeatureRows:
    """Extract features task by task (a worker pool when jobs > 1), merging
    results in catalog order and logging failures without aborting."""
    work = [(task, config.df_threshold, config.df_absolute) for task in tasks]
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(_try_features, work))
    else:
        results = [_try_features(item) for item in work]
    task_uuids = []
    norbs = []
    vectors = []
    for task, outcome in zip(tasks, results):
        if isinstance(outcome, Exception):
            log.warning("features failed for task %s: %s", task.task_uuid, outcome)
            continue
        task_uuid, norb, vector = outcome
        task_uuids.append(task_uuid)
        norbs.append(norb)
        vectors.append(vector)
    return FeatureRows(tuple(task_uuids), tuple(norbs), tuple(vectors))


def run_features(config: RunConfig, feature_rows: FeatureRows | None = None) -> FeatureRows:
    """Extract per-task features; write features/correlation/histogram CSVs."""
    instances = _load_catalog(config)
    tasks = catalog_tasks(instances)
    config.output_dir.mkdir(parents=True, exist_ok=True)
    if feature_rows is None:
        feature_rows = _collect_features(config, tasks)

    rows = [
        [uuid, *(float(v) for v in vector.as_array())]
        for uuid, vector in zip(feature_rows.task_uuids, feature_rows.vectors)
    ]
    _write_csv(config.output_dir / "features.csv", config, ["task_uuid", *FEATURE_NAMES], rows)

    if len(feature_rows.vectors) >= 2:
        corr = correlation_matrix(list(feature_rows.vectors))
        corr_rows = [[name, *(float(v) for v in corr[i])] for i, name in enumerate(FEATURE_NAMES)]
        _write_csv(
            config.output_dir / "correlation.csv",
            config,
            ["feature", *FEATURE_NAMES],
            corr_rows,
        )
    else:
        log.warning("fewer than 2 feature rows; correlation matrix skipped")

    hist_rows = []
    if feature_rows.norbs:
        top = (max(feature_rows.norbs) // HISTOGRAM_BIN_WIDTH + 1) * HISTOGRAM_BIN_WIDTH
        edges = np.arange(0, top + 1, HISTOGRAM_BIN_WIDTH)
        counts, _ = np.histogram(feature_rows.norbs, bins=edges)
        hist_rows = [
            [int(edges[i]), int(edges[i + 1]), int(c)] for i, c in enumerate(counts)
        ]
    _write_csv(
        config.output_dir / "orbital_histogram.csv",
        config,
        ["bin_lo", "bin_hi", "count"],
        hist_rows,
    )
    return feature_rows


def run_evaluate(config: RunConfig, solutions_dir: Path) -> dict[str, list]:
    """Score every solver against the catalog; write per-solver outcome CSVs."""
    instances = _load_catalog(config)
    tasks = catalog_tasks(instances)
    solutions = scan_solutions(solutions_dir)
    if not solutions:
        log.warning("no *.solution.json under %s", solutions_dir)
    config.output_dir.mkdir(parents=True, exist_ok=True)

    summary_rows = []
    outcomes_by_solver: dict[str, list] = {}
    for solution in solutions:
        outcomes, summary = evaluate_solver(tasks, solution)
        outcomes_by_solver[solution.solver_uuid] = outcomes
        rows = [
            [o.task_uuid, o.verdict.value, o.abs_error, o.within_runtime, o.attempted]
            for o in outcomes
        ]
        _write_csv(
            config.output_dir / f"outcomes_{solution.solver_uuid}.csv",
            config,
            ["task_uuid", "verdict", "abs_error", "within_runtime", "attempted"],
            rows,
        )
        summary_rows.append(
            [
                solution.solver_uuid,
                solution.solver_short_name,
                summary["tasks_solved"],
                summary["tasks_attempted"],
            ]
        )
    _write_csv(
        config.output_dir / "solver_summary.csv",
        config,
        ["solver_uuid", "solver_short_name", "tasks_solved", "tasks_attempted"],
        summary_rows,
    )
    return outcomes_by_solver


def run_solvability(
    config: RunConfig,
    solutions_dir: Path,
    solver_uuid: str,
    feature_rows: FeatureRows | None = None,
) -> Path:
    """Train the solvability model for one solver and emit report/cloud/map."""
    instances = _load_catalog(config)
    tasks = catalog_tasks(instances)
    solutions = [s for s in scan_solutions(solutions_dir) if s.solver_uuid == solver_uuid]
    if not solutions:
        raise GseeBenchError(f"no solution file for solver {solver_uuid}")
    solution = solutions[0]
    outcomes, _ = evaluate_solver(tasks, solution)
    verdict_by_task = {o.task_uuid: o.verdict for o in outcomes}

    if feature_rows is None:
        feature_rows = _collect_features(config, tasks)
    features = []
    labels = []
    task_uuids = []
    for uuid, vector in zip(feature_rows.task_uuids, feature_rows.vectors):
        verdict = verdict_by_task[uuid]
        features.append(vector.as_array())
        labels.append(None if verdict is Verdict.UNLABELED else verdict is Verdict.SOLVED)
        task_uuids.append(uuid)

    ml_config = SolvabilityConfig(
        latent_kind=config.latent,
        latent_dim=config.latent_dim,
        n_samples=config.n_samples,
        threshold=config.threshold,
        seed=config.seed,
    )
    report = estimate_solvability(
        np.array(features), labels, ml_config, feature_names=FEATURE_NAMES
    )

    config.output_dir.mkdir(parents=True, exist_ok=True)
    report_path = config.output_dir / f"solvability_{solver_uuid}.json"
    _write_json(report_path, config, report.to_dict())

    cloud_rows = [
        [*map(float, pt), float(p)]
        for pt, p in zip(report.latent_points, report.probabilities)
    ]
    latent_cols = [f"latent_{i}" for i in range(report.latent_dim)]
    _write_csv(
        config.output_dir / f"latent_points_{solver_uuid}.csv",
        config,
        [*latent_cols, "probability"],
        cloud_rows,
    )
    train_rows = [
        [uuid, *map(float, row[:2]), "" if lab is None else str(bool(lab)).lower()]
        for uuid, row, lab in zip(task_uuids, report.training_embedding, report.training_labels)
    ]
    _write_csv(
        config.output_dir / f"training_points_{solver_uuid}.csv",
        config,
        ["task_uuid", "latent_0", "latent_1", "solved"],
        train_rows,
    )

    svg = render_latent_map(report, f"{solution.solver_short_name} solvability")
    svg_path = config.output_dir / f"latent_map_{solver_uuid}.svg"
    svg_path.write_text(
        svg.replace("<!--", f"<!-- {_header_comment(config)[2:]} |", 1), encoding="utf-8"
    )
    return report_path


def run_oracle(config: RunConfig) -> Path:
    """Exact ground-state energies for every oracle-sized task."""
    instances = _load_catalog(config)
    tasks = catalog_tasks(instances)
    config.output_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    for task in tasks:
        try:
            with open(task.fcidump_path, encoding="utf-8") as fh:
                dump = parse_fcidump(fh)
            spectrum, dim = solve_ground_state(dump, k=2)
        except Exception as exc:  # noqa: BLE001 - per-task isolation
            log.warning("oracle failed for task %s: %s", task.task_uuid, exc)
            continue
        entries.append(
            {
                "task_uuid": task.task_uuid,
                "e0": spectrum.energies[0],
                "e1": spectrum.energies[1] if len(spectrum.energies) > 1 else None,
                "gap": spectrum.gap,
                "dim": dim,
                "converged": spectrum.converged,
            }
        )
    path = config.output_dir / "oracle.json"
    _write_json(path, config, {"results": entries})
    return path


def _try_solvability(args) -> str | None:
    config, solutions_dir, solver_uuid, feature_rows = args
    try:
        run_solvability(config, solutions_dir, solver_uuid, feature_rows)
    except (InsufficientLabels, SingleClass) as exc:
        return f"solvability skipped for {solver_uuid}: {exc}"
    return None


def run_report(config: RunConfig, solutions_dir: Path) -> None:
    """Bundle features, evaluation, solvability per solver, and the oracle.

    Features are computed once and reused; solvability runs per solver
    (a worker pool when jobs > 1, each solver writing its own files).
    """
    feature_rows = run_features(config)
    run_evaluate(config, solutions_dir)
    work = [
        (config, solutions_dir, solution.solver_uuid, feature_rows)
        for solution in scan_solutions(solutions_dir)
    ]
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            notes = list(pool.map(_try_solvability, work))
    else:
        notes = [_try_solvability(item) for item in work]
    for note in notes:
        if note:
            log.warning("%s", note)
    run_oracle(config)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gsee-bench",
        description="Benchmark harness for ground-state energy estimation solvers",
    )
    parser.add_argument("--config", type=Path, help="JSON config file (flags override)")
    parser.add_argument("--catalog", type=Path, help="catalog directory")
    parser.add_argument("--out", type=Path, help="output directory")
    parser.add_argument("--df-threshold", type=float, help="DF eigenvalue cutoff")
    parser.add_argument(
        "--df-absolute", action="store_true", default=None,
        help="treat --df-threshold as an absolute Hartree cutoff",
    )
    parser.add_argument("--latent", choices=("pca", "nnmf"), help="latent space kind")
    parser.add_argument("--latent-dim", type=int, help="latent dimension")
    parser.add_argument("--samples", type=int, help="latent sample count")
    parser.add_argument("--threshold", type=float, help="probability threshold")
    parser.add_argument("--seed", type=int, help="random seed")
    parser.add_argument("--jobs", type=int, help="worker count")
    parser.add_argument("-v", "--verbose", action="store_true")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("features", help="extract the feature table")
    p_eval = sub.add_parser("evaluate", help="score solution files")
    p_eval.add_argument("--solutions", type=Path, required=True)
    p_solv = sub.add_parser("solvability", help="solvability report for one solver")
    p_solv.add_argument("--solutions", type=Path, required=True)
    p_solv.add_argument("--solver", required=True, help="solver uuid")
    sub.add_parser("oracle", help="exact reference energies for small tasks")
    p_rep = sub.add_parser("report", help="run every stage")
    p_rep.add_argument("--solutions", type=Path, required=True)
    return parser


_CONFIG_KEYS = {
    "catalog": "catalog_dir",
    "out": "output_dir",
    "df_threshold": "df_threshold",
    "df_absolute": "df_absolute",
    "latent": "latent",
    "latent_dim": "latent_dim",
    "samples": "n_samples",
    "threshold": "threshold",
    "seed": "seed",
    "jobs": "jobs",
}


def _make_config(args: argparse.Namespace) -> RunConfig:
    settings: dict = {}
    if args.config is not None:
        with open(args.config, encoding="utf-8") as fh:
            file_conf = json.load(fh)
        for key, attr in _CONFIG_KEYS.items():
            if key in file_conf:
                settings[attr] = file_conf[key]
    for key, attr in _CONFIG_KEYS.items():
        value = getattr(args, key, None)
        if value is not None:
            settings[attr] = value
    if "catalog_dir" not in settings or "output_dir" not in settings:
        raise GseeBenchError("--catalog and --out are required (flag or config file)")
    settings["catalog_dir"] = Path(settings["catalog_dir"])
    settings["output_dir"] = Path(settings["output_dir"])
    return RunConfig(**settings)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = _make_config(args)
        if args.command == "features":
            run_features(config)
        elif args.command == "evaluate":
            run_evaluate(config, args.solutions)
        elif args.command == "solvability":
            run_solvability(config, args.solutions, args.solver)
        elif args.command == "oracle":
            run_oracle(config)
        elif args.command == "report":
            run_report(config, args.solutions)
    except (GseeBenchError, OSError, ValueError) as exc:
        log.error("%s", exc)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
