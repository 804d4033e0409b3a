"""Crossing-scenario fleet simulator with collision and deadlock detection."""

from .behavior import (
    BehaviorParams,
    ParamRanges,
    fleet_raw_commands,
    sample_params,
    step_behavior,
)
from .events import count_collision_events, detect_collisions, detect_deadlocks
from .scenario import RobotState, ScenarioConfig, SimulationTrace, run_simulation, spawn
from .traceio import read_sidecar, read_trace_positions, write_trace

__all__ = [
    "BehaviorParams",
    "ParamRanges",
    "RobotState",
    "ScenarioConfig",
    "SimulationTrace",
    "count_collision_events",
    "detect_collisions",
    "detect_deadlocks",
    "fleet_raw_commands",
    "read_sidecar",
    "read_trace_positions",
    "run_simulation",
    "sample_params",
    "spawn",
    "step_behavior",
    "write_trace",
]
