"""Reactive crossing behavior: pick a heading, cap the speed, smooth the motion.

Each control step scores a fixed fan of candidate headings around the bearing
to the target.  A candidate is rejected when, assuming neighbors keep their
current velocity, the predicted minimum clearance within the collision
horizon eta falls below the safety margin sigma.  Among the surviving
candidates the one closest to the target bearing wins, with a small bonus for
extra clearance; speed is capped so the remaining clearance cannot be
consumed within the horizon; the actual velocity and the heading relax toward
the command with time constants tau and tau_rot.

The candidate table is built to be exactly closed under reflection
(sin entries of paired candidates are bitwise negations, sin(pi) is forced to
0.0), which makes whole simulations mirror bitwise when their initial states
are mirrored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError

N_CANDIDATES = 36


def _candidate_table():
    steps = np.arange(19)
    ang = steps * (np.pi / 18.0)
    c = np.cos(ang)
    s = np.sin(ang)
    c[18] = -1.0
    s[18] = 0.0
    cos_t, sin_t, dev = [c[0]], [s[0]], [0.0]
    for k in range(1, 18):
        cos_t += [c[k], c[k]]
        sin_t += [s[k], -s[k]]
        dev += [ang[k], ang[k]]
    cos_t.append(c[18])
    sin_t.append(s[18])
    dev.append(ang[18])
    return np.asarray(cos_t), np.asarray(sin_t), np.asarray(dev)


_COS, _SIN, _DEV = _candidate_table()


@dataclass(frozen=True)
class BehaviorParams:
    """Navigation behavior parameters.

    v_opt: preferred speed (m/s); tau_rot: heading relaxation time (s);
    sigma: safety margin kept beyond contact distance (m); eta: collision
    horizon (s); tau: velocity relaxation time (s).
    """

    v_opt: float = 0.12
    tau_rot: float = 0.5
    sigma: float = 0.0
    eta: float = 0.5
    tau: float = 0.5

    def __post_init__(self):
        for name in ("v_opt", "tau_rot", "sigma", "eta", "tau"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0.0):
                raise ConfigError(f"behavior parameter {name} must be finite and >= 0, got {v}")


@dataclass(frozen=True)
class ParamRanges:
    """Per-parameter sampling intervals; a point interval pins a value."""

    v_opt: tuple[float, float] = (0.12, 0.12)
    tau_rot: tuple[float, float] = (0.5, 0.5)
    sigma: tuple[float, float] = (0.0, 0.1)
    eta: tuple[float, float] = (0.0, 1.0)
    tau: tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        for name in ("v_opt", "tau_rot", "sigma", "eta", "tau"):
            lo, hi = getattr(self, name)
            if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
                raise ConfigError(f"invalid interval for {name}: [{lo}, {hi}]")


def sample_params(ranges: ParamRanges, rng: np.random.Generator) -> BehaviorParams:
    """Draw each behavior parameter independently and uniformly from its interval."""
    draws = {}
    for name in ("v_opt", "tau_rot", "sigma", "eta", "tau"):
        lo, hi = getattr(ranges, name)
        draws[name] = lo if lo == hi else float(rng.uniform(lo, hi))
    return BehaviorParams(**draws)


def fleet_raw_commands(
    positions: np.ndarray,
    velocities: np.ndarray,
    targets: np.ndarray,
    params: BehaviorParams,
    robot_radius: float,
    dt: float,
    headings: np.ndarray | None = None,
) -> np.ndarray:
    """Unsmoothed velocity commands for the whole fleet, shape (n, 2).

    Pure function of the current state; the caller applies the tau/tau_rot
    relaxation.  ``headings`` (radians) adds a turn-penalty hysteresis that
    damps side-to-side flicker in crowds.  All arithmetic is
    reflection-symmetric bitwise.
    """
    n = positions.shape[0]
    delta = targets - positions
    dist = np.sqrt(delta[:, 0] ** 2 + delta[:, 1] ** 2)
    safe_dist = np.maximum(dist, 1e-12)
    ux = delta[:, 0] / safe_dist
    uy = delta[:, 1] / safe_dist

    # candidate unit headings, rotated copies of the target bearing: (n, K)
    dir_x = ux[:, None] * _COS[None, :] - uy[:, None] * _SIN[None, :]
    dir_y = ux[:, None] * _SIN[None, :] + uy[:, None] * _COS[None, :]

    horizon = max(params.eta, dt)
    contact = 2.0 * robot_radius
    if n == 1:
        clearance = np.full((1, N_CANDIDATES), np.inf)
        end_clear = np.full((1, N_CANDIDATES), np.inf)
        cur_clear = np.full(1, np.inf)
    else:
        rel_x = positions[None, :, 0] - positions[:, None, 0]  # (self, nbr)
        rel_y = positions[None, :, 1] - positions[:, None, 1]
        w_x = velocities[None, :, 0, None] - params.v_opt * dir_x[:, None, :]
        w_y = velocities[None, :, 1, None] - params.v_opt * dir_y[:, None, :]
        pw = rel_x[:, :, None] * w_x + rel_y[:, :, None] * w_y
        ww = w_x * w_x + w_y * w_y
        t_close = np.clip(-pw / np.maximum(ww, 1e-18), 0.0, horizon)
        cx = rel_x[:, :, None] + t_close * w_x
        cy = rel_y[:, :, None] + t_close * w_y
        d2 = cx * cx + cy * cy
        ex = rel_x[:, :, None] + horizon * w_x
        ey = rel_y[:, :, None] + horizon * w_y
        e2 = ex * ex + ey * ey
        r2 = rel_x * rel_x + rel_y * rel_y
        idx = np.arange(n)
        d2[idx, idx, :] = np.inf
        e2[idx, idx, :] = np.inf
        r2[idx, idx] = np.inf
        clearance = np.sqrt(d2.min(axis=1)) - contact
        end_clear = np.sqrt(e2.min(axis=1)) - contact
        cur_clear = np.sqrt(r2.min(axis=1)) - contact

    accepted = clearance >= params.sigma

    # speed low enough to cover at most the margin surplus within a short
    # reaction budget; the avoidance steering handles everything farther out
    brake = 2.0 * dt
    cand_speed = np.clip((clearance - params.sigma) / brake, 0.0, params.v_opt)

    # trade angular deviation against achievable speed so that a fast swerve
    # beats crawling straight at the target; penalizing turns away from the
    # current heading keeps avoidance choices committed between steps
    slowness = 1.0 - cand_speed / max(params.v_opt, 1e-12)
    score = _DEV[None, :] + 1.2 * slowness
    if headings is not None:
        hx, hy = np.cos(headings), np.sin(headings)
        cos_turn = hx[:, None] * dir_x + hy[:, None] * dir_y
        score = score + 0.3 * (1.0 - cos_turn)
    score[~accepted] = np.inf

    rows = np.arange(n)
    best = np.argmin(score, axis=1)
    speed = cand_speed[rows, best]

    # escape mode: everything violates the margin, so move wherever the
    # end-of-horizon clearance improves the most (typically retreat) and
    # freeze when no direction improves it
    blocked = ~accepted.any(axis=1)
    if blocked.any():
        esc = np.argmax(end_clear[blocked], axis=1)
        best[blocked] = esc
        gain = end_clear[blocked, esc] - cur_clear[blocked]
        speed[blocked] = np.clip(gain / brake, 0.0, params.v_opt)

    return speed[:, None] * np.column_stack([dir_x[rows, best], dir_y[rows, best]])


def wrap_angle(a):
    """Wrap to [-pi, pi]; exactly odd (round-half-even keeps wrap(-a) == -wrap(a))."""
    return a - (2.0 * np.pi) * np.round(a / (2.0 * np.pi))


def relaxation_gain(dt: float, time_constant: float) -> float:
    """First-order blend gain over one step; instantaneous when the constant is ~0."""
    if time_constant <= 1e-9:
        return 1.0
    return 1.0 - math.exp(-dt / time_constant)


def step_behavior(state, neighbors, params: BehaviorParams, config) -> tuple[float, float, float]:
    """One robot's smoothed velocity command (vx, vy, omega).

    ``state`` and ``neighbors`` are RobotState values; the target is the
    robot's current waypoint in ``config``.  Equivalent to one row of the
    vectorized fleet update.
    """
    others = list(neighbors)
    positions = np.array([[state.x, state.y]] + [[nb.x, nb.y] for nb in others])
    velocities = np.array([[state.vx, state.vy]] + [[nb.vx, nb.vy] for nb in others])
    waypoints = config.waypoints()
    targets = np.repeat(waypoints[state.current_waypoint][None, :], len(others) + 1, axis=0)

    headings = np.array([state.heading] + [nb.heading for nb in others])
    raw = _self_raw_command(
        positions, velocities, targets[0], params, config.robot_radius, config.dt, headings
    )

    speed = math.hypot(raw[0], raw[1])
    desired = math.atan2(raw[1], raw[0]) if speed > 1e-12 else state.heading
    gain_h = relaxation_gain(config.dt, params.tau_rot)
    turn = float(wrap_angle(desired - state.heading)) * gain_h
    new_heading = float(wrap_angle(state.heading + turn))

    gain_v = relaxation_gain(config.dt, params.tau)
    vx = state.vx + (speed * math.cos(new_heading) - state.vx) * gain_v
    vy = state.vy + (speed * math.sin(new_heading) - state.vy) * gain_v
    return float(vx), float(vy), turn / config.dt


def _self_raw_command(positions, velocities, target, params, robot_radius, dt, headings):
    targets = positions.copy()
    targets[0] = target
    cmd = fleet_raw_commands(positions, velocities, targets, params, robot_radius, dt, headings)
    return cmd[0]
