"""0-dimensional Vietoris-Rips persistence barcodes and persistent entropy.

For a planar point cloud, every 0-dimensional feature is born at scale 0 and
dies when its connected component merges into another one.  The death scales
are exactly the edge weights of a Euclidean minimum spanning tree, so the
barcode is computed with Kruskal's algorithm instead of a full filtration.
The component that never dies is excluded from the barcode (its death would
depend on an arbitrary cap); an optional mode caps it at the cloud diameter
for sensitivity checks.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Barcode",
    "EntropyValue",
    "zero_dim_barcode",
    "zero_dim_deaths_batch",
    "persistent_entropy",
    "brute_force_zero_dim",
    "write_barcode_csv",
]


@dataclass(frozen=True)
class Barcode:
    """Multiset of (birth, death) intervals of a fixed homology dimension.

    ``degenerate`` marks barcodes from clouds with fewer than two points,
    which carry no interval at all.
    """

    bars: np.ndarray  # shape (m, 2), birth <= death per row
    dim: int = 0
    degenerate: bool = False

    def __post_init__(self):
        bars = np.asarray(self.bars, dtype=float).reshape(-1, 2)
        object.__setattr__(self, "bars", bars)
        if bars.size and np.any(bars[:, 0] > bars[:, 1]):
            raise ValueError("barcode has an interval with birth > death")

    @property
    def lengths(self) -> np.ndarray:
        return self.bars[:, 1] - self.bars[:, 0]

    def __len__(self) -> int:
        return self.bars.shape[0]


@dataclass(frozen=True)
class EntropyValue:
    """Persistent entropy (natural log). ``degenerate`` flags an all-zero barcode."""

    h: float
    degenerate: bool = False

    def __float__(self) -> float:
        return self.h


def _as_cloud(cloud) -> np.ndarray:
    pts = np.asarray(cloud, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError(f"point cloud must have shape (n, 2), got {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise ValueError("point cloud contains non-finite coordinates")
    return pts


class _UnionFind:
    """Union-find with path compression and union by rank."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, i: int) -> int:
        parent = self.parent
        root = i
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, parent[i]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True


def _pairwise_distances(pts: np.ndarray):
    n = pts.shape[0]
    ii, jj = np.triu_indices(n, k=1)
    diff = pts[ii] - pts[jj]
    d = np.sqrt(diff[:, 0] ** 2 + diff[:, 1] ** 2)
    return ii, jj, d


def zero_dim_barcode(cloud, cap_at_max_distance: bool = False) -> Barcode:
    """0-dimensional Vietoris-Rips barcode of a planar point cloud.

    Returns one (0, w) bar per minimum-spanning-tree edge weight w, i.e.
    n - 1 bars for n points, sorted by death.  The never-dying component is
    excluded unless ``cap_at_max_distance`` is set, in which case it is
    reported as (0, max pairwise distance).

    A cloud with fewer than two points yields an empty, degenerate barcode.
    Duplicate points are fine and produce zero-length bars.
    """
    pts = _as_cloud(cloud)
    n = pts.shape[0]
    if n < 2:
        return Barcode(bars=np.empty((0, 2)), dim=0, degenerate=True)

    ii, jj, d = _pairwise_distances(pts)
    # stable deterministic processing order on ties: (weight, min index, max index)
    order = np.lexsort((jj, ii, d))
    uf = _UnionFind(n)
    deaths = np.empty(n - 1)
    k = 0
    for e in order:
        if uf.union(int(ii[e]), int(jj[e])):
            deaths[k] = d[e]
            k += 1
            if k == n - 1:
                break
    bars = np.column_stack([np.zeros(n - 1), deaths])
    if cap_at_max_distance:
        bars = np.vstack([bars, [0.0, float(d.max())]])
    return Barcode(bars=bars, dim=0)


def zero_dim_deaths_batch(clouds: np.ndarray) -> np.ndarray:
    """Death scales for a batch of clouds, shape (B, n, 2) -> (B, n - 1).

    Vectorized Prim sweep over the whole batch; per cloud the returned
    multiset equals the MST edge weights used by :func:`zero_dim_barcode`
    (all minimum spanning trees share one weight multiset).  Deaths are
    returned in tree-growth order, not sorted.
    """
    clouds = np.asarray(clouds, dtype=float)
    if clouds.ndim != 3 or clouds.shape[2] != 2:
        raise ValueError(f"batch must have shape (B, n, 2), got {clouds.shape}")
    b, n, _ = clouds.shape
    if n < 2:
        raise ValueError("clouds need at least two points")
    diff = clouds[:, :, None, :] - clouds[:, None, :, :]
    d2 = diff[..., 0] ** 2 + diff[..., 1] ** 2

    rows = np.arange(b)
    # grow every tree from vertex 0; best[i] = squared distance to the tree
    best = d2[:, 0, :].copy()
    best[:, 0] = np.inf
    deaths2 = np.empty((b, n - 1))
    for step in range(n - 1):
        nxt = np.argmin(best, axis=1)
        deaths2[:, step] = best[rows, nxt]
        best[rows, nxt] = np.inf
        np.minimum(best, d2[rows, nxt, :], out=best)
        best[rows, nxt] = np.inf
    return np.sqrt(deaths2)


def persistent_entropy(barcode: Barcode) -> EntropyValue:
    """Shannon entropy of the normalized bar-length distribution.

    h = -sum_i (l_i / L) ln(l_i / L) over bars with positive length l_i,
    where L is the total bar length.  Zero-length bars contribute nothing
    (x ln x -> 0).  If every bar has zero length the value is defined as 0
    and flagged degenerate.  Equal-length barcodes return ln(count) exactly.
    """
    if len(barcode) == 0:
        raise ValueError("persistent entropy of an empty barcode is undefined")
    lengths = barcode.lengths
    pos = lengths[lengths > 0.0]
    if pos.size == 0:
        return EntropyValue(h=0.0, degenerate=True)
    if np.all(pos == pos[0]):
        return EntropyValue(h=math.log(pos.size))
    p = pos / pos.sum()
    h = float(-np.sum(p * np.log(p)))
    # clamp float noise to the mathematically valid range
    h = min(max(h, 0.0), math.log(pos.size))
    return EntropyValue(h=h)


def brute_force_zero_dim(cloud, max_points: int = 64) -> Barcode:
    """Test oracle: 0-dim persistence by sweeping the full VR 1-skeleton.

    Walks all edges in sorted order and tracks connected components by
    exhaustively relabeling a component-id array; each merge records a
    death.  Quadratic bookkeeping, refused above ``max_points``.
    """
    pts = _as_cloud(cloud)
    n = pts.shape[0]
    if n > max_points:
        raise ValueError(f"oracle limited to {max_points} points, got {n}")
    if n < 2:
        return Barcode(bars=np.empty((0, 2)), dim=0, degenerate=True)

    ii, jj, d = _pairwise_distances(pts)
    order = np.lexsort((jj, ii, d))
    labels = np.arange(n)
    deaths = []
    for e in order:
        la, lb = labels[ii[e]], labels[jj[e]]
        if la != lb:
            labels[labels == lb] = la
            deaths.append(d[e])
            if len(deaths) == n - 1:
                break
    bars = np.column_stack([np.zeros(n - 1), deaths])
    return Barcode(bars=bars, dim=0)


def write_barcode_csv(barcode: Barcode, path) -> None:
    """Debug export: one (birth, death) row per bar."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["birth", "death"])
        for birth, death in barcode.bars:
            w.writerow([repr(float(birth)), repr(float(death))])
