"""Crossing scenario: disc robots pendle between opposing waypoints.

Four waypoints sit at (+-s/2, 0) and (0, +-s/2); half of the fleet commutes
along the x axis, the other half along the y axis, so the flows contest the
center of the square.  Integration is explicit Euler at a fixed dt and every
run is a deterministic function of (config, params, seed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from ..errors import ConfigError
from . import behavior as bh
from .events import detect_deadlocks


@dataclass(frozen=True)
class ScenarioConfig:
    """Geometry and timing of one crossing run.

    ``side_s`` is the side length of the square spanned by the waypoints;
    robots are clamped to the square inflated by ``bound_margin``.  Arrival
    at a waypoint is declared within ``arrival_tol`` (defaults to the robot
    radius).
    """

    side_s: float = 2.0
    n_robots: int = 20
    robot_radius: float = 0.04
    n_steps: int = 2000
    dt: float = 0.1
    rng_seed: int = 0
    bound_margin: float = 0.2
    arrival_tol: float | None = None

    def __post_init__(self):
        if self.side_s <= 0:
            raise ConfigError(f"side_s must be > 0, got {self.side_s}")
        if self.n_robots < 1:
            raise ConfigError(f"n_robots must be >= 1, got {self.n_robots}")
        if self.robot_radius <= 0:
            raise ConfigError("robot_radius must be > 0")
        if self.n_steps < 1:
            raise ConfigError("n_steps must be >= 1")
        if self.dt <= 0:
            raise ConfigError("dt must be > 0")
        if self.bound_margin < 0:
            raise ConfigError("bound_margin must be >= 0")

    @property
    def arrival_tolerance(self) -> float:
        return self.robot_radius if self.arrival_tol is None else self.arrival_tol

    def waypoints(self) -> np.ndarray:
        """The four targets; indices 0-1 form the x pair, 2-3 the y pair."""
        h = self.side_s / 2.0
        return np.array([[-h, 0.0], [h, 0.0], [0.0, -h], [0.0, h]])


@dataclass
class RobotState:
    """Pose and twist of one robot plus the waypoint it is tracking."""

    x: float
    y: float
    heading: float
    vx: float = 0.0
    vy: float = 0.0
    omega: float = 0.0
    current_waypoint: int = 0


@dataclass(frozen=True)
class SimulationTrace:
    """Per-step robot clouds plus the collision / deadlock outcome of a run.

    ``positions`` has shape (n_steps, n_robots, 2); ``waypoint_dists`` holds
    each robot's distance to its tracked waypoint at each recorded step and
    feeds the deadlock detector's arrival exclusion.
    """

    positions: np.ndarray
    collision_count: int
    deadlock_count: int
    params: bh.BehaviorParams
    config: ScenarioConfig
    waypoint_dists: np.ndarray = field(repr=False, default=None)

    @property
    def n_steps(self) -> int:
        return self.positions.shape[0]


def spawn(config: ScenarioConfig, rng: np.random.Generator) -> list[RobotState]:
    """Place robots uniformly in the square, rejection-sampled to not overlap.

    The first half of the fleet is assigned to the x waypoint pair, the rest
    to the y pair; each robot starts toward a random end of its pair with
    zero velocity.
    """
    half = config.side_s / 2.0 - config.robot_radius
    if half <= 0:
        raise ConfigError("square too small for the robot radius")
    min_sep = 2.2 * config.robot_radius
    placed = np.empty((config.n_robots, 2))
    attempts = 0
    for i in range(config.n_robots):
        while True:
            attempts += 1
            if attempts > 1000 * (config.n_robots + 1):
                raise ConfigError(
                    f"could not place {config.n_robots} non-overlapping robots "
                    f"of radius {config.robot_radius} in a {config.side_s} m square"
                )
            cand = rng.uniform(-half, half, size=2)
            if i == 0 or np.all(
                (placed[:i, 0] - cand[0]) ** 2 + (placed[:i, 1] - cand[1]) ** 2 >= min_sep**2
            ):
                placed[i] = cand
                break

    n_axis_x = config.n_robots // 2
    waypoints = config.waypoints()
    states = []
    for i in range(config.n_robots):
        base = 0 if i < n_axis_x else 2
        wp = base + int(rng.integers(0, 2))
        tgt = waypoints[wp]
        heading = math.atan2(tgt[1] - placed[i, 1], tgt[0] - placed[i, 0])
        states.append(
            RobotState(x=placed[i, 0], y=placed[i, 1], heading=heading, current_waypoint=wp)
        )
    return states


def run_simulation(
    config: ScenarioConfig,
    params: bh.BehaviorParams,
    initial_states: list[RobotState] | None = None,
    deadlock_window: float = 5.0,
    deadlock_speed_frac: float = 0.1,
) -> SimulationTrace:
    """Run one seeded crossing simulation and detect its negative events.

    ``initial_states`` overrides the random spawn (used for controlled
    experiments); otherwise placement is drawn from the config seed.
    """
    if initial_states is None:
        rng = np.random.default_rng(np.random.SeedSequence([int(config.rng_seed), 1]))
        initial_states = spawn(config, rng)
    if len(initial_states) != config.n_robots:
        raise ConfigError(
            f"got {len(initial_states)} initial states for n_robots={config.n_robots}"
        )

    n = config.n_robots
    pos = np.array([[st.x, st.y] for st in initial_states])
    vel = np.array([[st.vx, st.vy] for st in initial_states])
    heading = np.array([st.heading for st in initial_states])
    wp_idx = np.array([st.current_waypoint for st in initial_states], dtype=int)
    if np.any((wp_idx < 0) | (wp_idx > 3)):
        raise ConfigError("current_waypoint indices must be in 0..3")

    waypoints = config.waypoints()
    bound = config.side_s / 2.0 + config.bound_margin
    tol = config.arrival_tolerance
    gain_v = bh.relaxation_gain(config.dt, params.tau)
    gain_h = bh.relaxation_gain(config.dt, params.tau_rot)

    positions = np.empty((config.n_steps, n, 2))
    wp_dists = np.empty((config.n_steps, n))

    iu, ju = np.triu_indices(n, k=1)
    contact_d2 = (2.0 * config.robot_radius) ** 2
    in_contact = _contact_pairs(pos, iu, ju, contact_d2)
    collision_events = int(in_contact.sum())

    for t in range(config.n_steps):
        positions[t] = pos
        tgt = waypoints[wp_idx]
        d = np.sqrt((tgt[:, 0] - pos[:, 0]) ** 2 + (tgt[:, 1] - pos[:, 1]) ** 2)
        wp_dists[t] = d
        arrived = d <= tol
        if arrived.any():
            wp_idx = np.where(arrived, wp_idx ^ 1, wp_idx)
            tgt = waypoints[wp_idx]

        raw = bh.fleet_raw_commands(
            pos, vel, tgt, params, config.robot_radius, config.dt, headings=heading
        )

        # steering lag: the executed command points along the heading, which
        # only relaxes toward the desired direction with time constant tau_rot
        speed = np.sqrt(raw[:, 0] ** 2 + raw[:, 1] ** 2)
        desired = np.where(speed > 1e-12, np.arctan2(raw[:, 1], raw[:, 0]), heading)
        heading = bh.wrap_angle(heading + bh.wrap_angle(desired - heading) * gain_h)
        cmd = speed[:, None] * np.column_stack([np.cos(heading), np.sin(heading)])

        vel = vel + (cmd - vel) * gain_v
        pos = pos + vel * config.dt

        # collision events fire at the moment of physical contact
        now = _contact_pairs(pos, iu, ju, contact_d2)
        collision_events += int((now & ~in_contact).sum())
        in_contact = now

        # discs cannot interpenetrate: project overlapping pairs apart
        if now.any():
            pos = _resolve_overlaps(pos, 2.0 * config.robot_radius)
        pos = np.clip(pos, -bound, bound)

    deadlocks = detect_deadlocks(
        positions,
        wp_dists,
        v_opt=params.v_opt,
        dt=config.dt,
        window_T=deadlock_window,
        speed_frac=deadlock_speed_frac,
        arrival_tol=tol,
    )
    return SimulationTrace(
        positions=positions,
        collision_count=int(collision_events),
        deadlock_count=int(deadlocks),
        params=params,
        config=config,
        waypoint_dists=wp_dists,
    )


def _contact_pairs(pos, iu, ju, contact_d2):
    d2 = (pos[iu, 0] - pos[ju, 0]) ** 2 + (pos[iu, 1] - pos[ju, 1]) ** 2
    return d2 < contact_d2


def _resolve_overlaps(pos, contact_dist, sweeps: int = 2):
    """Push overlapping discs apart (Jacobi projection, reflection-exact)."""
    for _ in range(sweeps):
        dx = pos[:, None, 0] - pos[None, :, 0]
        dy = pos[:, None, 1] - pos[None, :, 1]
        d2 = dx * dx + dy * dy
        np.fill_diagonal(d2, np.inf)
        overlap = d2 < contact_dist**2
        if not overlap.any():
            break
        d = np.where(overlap, np.sqrt(np.maximum(d2, 1e-18)), 1.0)
        push = np.where(overlap, 0.5 * (contact_dist - d) / d, 0.0)
        pos = pos + np.column_stack([(push * dx).sum(axis=1), (push * dy).sum(axis=1)])
    return pos
