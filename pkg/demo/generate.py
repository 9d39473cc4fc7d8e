"""Regenerate the bundled synthetic demo catalog and solution files.

Ten small random Hamiltonians (12 tasks: two instances carry two tasks) with
exact reference energies from the built-in solver, one guidestar task without
a reference, and three synthetic solvers:

  exact-echo    echoes the reference energy on every task (all solved)
  size-limited  solves the 2-orbital tasks, misses the 3-orbital ones
  perturbed     echoes the reference shifted by +2 mHa (all unsolved)

Run from the repository root: python3 demo/generate.py
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from gsee_bench.fcidump import FciDump, write_fcidump
from gsee_bench.fci import solve_ground_state

ROOT = Path(__file__).parent
SEED = 20240611
RUNTIME_LIMIT = 60.0


def random_fcidump(rng: np.random.Generator, norb: int, nelec: int, ms2: int) -> FciDump:
    h1 = rng.normal(scale=0.5, size=(norb, norb))
    h1 = (h1 + h1.T) / 2
    eri = np.zeros((norb,) * 4)
    for _ in range(norb + 1):
        g = rng.normal(scale=0.4, size=(norb, norb))
        g = (g + g.T) / 2
        eri += rng.normal() * np.einsum("ij,kl->ijkl", g, g)
    return FciDump.from_tensors(norb, nelec, ms2, float(rng.normal(scale=0.2)), h1, eri)


def dump_json(path: Path, obj: dict) -> None:
    path.write_text(json.dumps(obj, indent=1, sort_keys=True) + "\n", encoding="utf-8")


def main() -> None:
    rng = np.random.default_rng(SEED)
    catalog = ROOT / "catalog"
    solutions = ROOT / "solutions"
    catalog.mkdir(exist_ok=True)
    solutions.mkdir(exist_ok=True)

    # (instance, #tasks, norb); 12 tasks total, the last 3-orbital one a guidestar
    layout = [(1, 2, 2), (2, 2, 3), (3, 1, 2), (4, 1, 2), (5, 1, 2),
              (6, 1, 2), (7, 1, 3), (8, 1, 3), (9, 1, 3), (10, 1, 3)]
    guidestar_uuid = "task-10-1"

    tasks_meta = []  # (task_uuid, norb, reference_e0, is_guidestar)
    for inst_num, n_tasks, norb in layout:
        inst_dir = catalog / f"inst-{inst_num:02d}"
        inst_dir.mkdir(exist_ok=True)
        task_entries = []
        for t in range(1, n_tasks + 1):
            task_uuid = f"task-{inst_num:02d}-{t}"
            nelec, ms2 = (2, 0) if norb == 2 else (3, 1)
            dump = random_fcidump(rng, norb, nelec, ms2)
            fcidump_name = f"{task_uuid}.fcidump"
            (inst_dir / fcidump_name).write_text(write_fcidump(dump), encoding="utf-8")
            spectrum, _ = solve_ground_state(dump)
            e0 = spectrum.energies[0]
            is_guidestar = task_uuid == guidestar_uuid
            entry = {
                "task_uuid": task_uuid,
                "fcidump_path": fcidump_name,
                "runtime_limit": RUNTIME_LIMIT,
            }
            if is_guidestar:
                entry["is_guidestar"] = True
            else:
                entry["reference_energy"] = e0
                entry["metadata"] = {"reference_source": "exact diagonalization"}
            task_entries.append(entry)
            tasks_meta.append((task_uuid, norb, e0, is_guidestar))
        dump_json(
            inst_dir / f"inst-{inst_num:02d}.problem.json",
            {
                "instance_uuid": f"inst-{inst_num:02d}",
                "short_name": f"synthetic-{norb}orb-{inst_num:02d}",
                "tasks": task_entries,
            },
        )

    def solution(uuid: str, name: str, results: list) -> None:
        dump_json(
            solutions / f"{uuid}.solution.json",
            {"solver_uuid": uuid, "solver_short_name": name, "results": results},
        )

    solution(
        "exact-echo",
        "reference echo",
        [
            {"task_uuid": u, "energy": e0, "run_time": 1.0}
            for u, _, e0, _ in tasks_meta
        ],
    )
    solution(
        "perturbed",
        "reference echo +2 mHa",
        [
            {"task_uuid": u, "energy": e0 + 2.0e-3, "run_time": 1.0}
            for u, _, e0, _ in tasks_meta
        ],
    )
    size_limited = []
    for u, norb, e0, is_guidestar in tasks_meta:
        if is_guidestar:
            size_limited.append({"task_uuid": u, "attempted": False})
        elif norb == 2:
            size_limited.append({"task_uuid": u, "energy": e0, "run_time": 2.0})
        else:
            size_limited.append({"task_uuid": u, "energy": e0 + 5.0e-3, "run_time": 2.0})
    solution("size-limited", "small-system specialist", size_limited)
    print(f"wrote {len(tasks_meta)} tasks under {catalog}")


if __name__ == "__main__":
    main()
