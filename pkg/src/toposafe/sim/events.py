"""Collision and deadlock detectors over recorded traces."""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError


def detect_collisions(cloud, robot_radius: float) -> list[tuple[int, int]]:
    """Pairs (i, j), i < j, whose centers are strictly closer than 2 * radius."""
    pts = np.asarray(cloud, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 1:
        raise ValueError("cloud must be a non-empty (n, 2) array")
    n = pts.shape[0]
    if n == 1:
        return []
    ii, jj = np.triu_indices(n, k=1)
    d2 = (pts[ii, 0] - pts[jj, 0]) ** 2 + (pts[ii, 1] - pts[jj, 1]) ** 2
    hit = d2 < (2.0 * robot_radius) ** 2
    return [(int(a), int(b)) for a, b in zip(ii[hit], jj[hit])]


def count_collision_events(positions: np.ndarray, robot_radius: float) -> int:
    """Edge-triggered collision events over a whole trace.

    A pair contributes one event per transition from non-contact to contact;
    pairs already in contact at step 0 count once.  A sustained overlap is a
    single event.
    """
    positions = np.asarray(positions, dtype=float)
    t_steps, n, _ = positions.shape
    if n < 2:
        return 0
    ii, jj = np.triu_indices(n, k=1)
    d2 = (positions[:, ii, 0] - positions[:, jj, 0]) ** 2 + (
        positions[:, ii, 1] - positions[:, jj, 1]
    ) ** 2
    contact = d2 < (2.0 * robot_radius) ** 2
    events = int(contact[0].sum())
    if t_steps > 1:
        events += int((contact[1:] & ~contact[:-1]).sum())
    return events


def detect_deadlocks(
    positions: np.ndarray,
    waypoint_dists: np.ndarray,
    v_opt: float,
    dt: float,
    window_T: float = 5.0,
    speed_frac: float = 0.1,
    arrival_tol: float = 0.0,
) -> int:
    """Number of robots that were ever deadlocked during the trace.

    A robot is deadlocked when over some sliding window of duration
    ``window_T`` its net displacement stays below
    ``speed_frac * v_opt * window_T`` while it never comes within
    ``arrival_tol`` of its tracked waypoint.  Each robot counts at most once.
    """
    if window_T <= 0:
        raise ConfigError("window_T must be > 0")
    if not (0.0 < speed_frac < 1.0):
        raise ConfigError("speed_frac must be in (0, 1)")
    positions = np.asarray(positions, dtype=float)
    waypoint_dists = np.asarray(waypoint_dists, dtype=float)
    t_steps = positions.shape[0]
    w = int(round(window_T / dt))
    if w < 1 or t_steps <= w:
        return 0

    disp = np.sqrt(
        (positions[w:, :, 0] - positions[:-w, :, 0]) ** 2
        + (positions[w:, :, 1] - positions[:-w, :, 1]) ** 2
    )
    slow = disp < speed_frac * v_opt * window_T

    # windows touching the waypoint (any step t..t+w within arrival_tol) are excluded
    near = (waypoint_dists <= arrival_tol).astype(np.int64)
    csum = np.concatenate([np.zeros((1, near.shape[1]), dtype=np.int64), np.cumsum(near, axis=0)])
    visited = (csum[w + 1 :] - csum[: -(w + 1)]) > 0

    return int(np.any(slow & ~visited, axis=0).sum())
