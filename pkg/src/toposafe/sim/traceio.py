"""Trace persistence: per-run positions CSV plus a JSON sidecar."""

from __future__ import annotations

import csv
import dataclasses
import json
from pathlib import Path

import numpy as np

from ..errors import DataError
from .behavior import BehaviorParams
from .scenario import ScenarioConfig, SimulationTrace

TRACE_HEADER = ["step", "robot_id", "x", "y"]


def write_trace(trace: SimulationTrace, csv_path, json_path, run_id: int | None = None) -> None:
    """Write positions as (step, robot_id, x, y) rows and metadata as JSON."""
    csv_path, json_path = Path(csv_path), Path(json_path)
    t_steps, n, _ = trace.positions.shape
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACE_HEADER)
        for t in range(t_steps):
            step = trace.positions[t]
            for i in range(n):
                w.writerow([t, i, repr(float(step[i, 0])), repr(float(step[i, 1]))])

    sidecar = {
        "run_id": run_id,
        "params": dataclasses.asdict(trace.params),
        "config": dataclasses.asdict(trace.config),
        "collision_count": trace.collision_count,
        "deadlock_count": trace.deadlock_count,
    }
    with open(json_path, "w") as fh:
        json.dump(sidecar, fh, indent=2)
        fh.write("\n")


def read_trace_positions(csv_path) -> np.ndarray:
    """Load a trace CSV back into a (n_steps, n_robots, 2) array."""
    csv_path = Path(csv_path)
    try:
        raw = np.loadtxt(csv_path, delimiter=",", skiprows=1, ndmin=2)
    except (OSError, ValueError) as exc:
        raise DataError(f"unreadable trace file {csv_path}: {exc}") from exc
    if raw.size == 0 or raw.shape[1] != 4:
        raise DataError(f"trace file {csv_path} has no (step, robot_id, x, y) rows")
    steps = raw[:, 0].astype(int)
    robots = raw[:, 1].astype(int)
    t_steps, n = steps.max() + 1, robots.max() + 1
    if raw.shape[0] != t_steps * n:
        raise DataError(f"trace file {csv_path} is missing rows")
    positions = np.empty((t_steps, n, 2))
    positions[steps, robots, 0] = raw[:, 2]
    positions[steps, robots, 1] = raw[:, 3]
    return positions


def read_sidecar(json_path) -> dict:
    """Load a run sidecar; raises DataError when unreadable or incomplete."""
    try:
        with open(json_path) as fh:
            meta = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"unreadable sidecar {json_path}: {exc}") from exc
    for key in ("params", "config", "collision_count", "deadlock_count"):
        if key not in meta:
            raise DataError(f"sidecar {json_path} lacks '{key}'")
    return meta


def sidecar_params(meta: dict) -> BehaviorParams:
    return BehaviorParams(**meta["params"])


def sidecar_config(meta: dict) -> ScenarioConfig:
    return ScenarioConfig(**meta["config"])
