"""Closed target sets: point clouds, axis boxes, balls and unions.

These are the shapes jets live on and cutoffs wrap around.  Each region
answers Euclidean distance queries from batched points and from axis-aligned
boxes; the box variant is what the cube decomposition admission test needs.
"""

from __future__ import annotations

import numpy as np

__all__ = ["Region", "PointCloud", "Box", "Ball", "RegionUnion"]


class Region:
    """Interface: `distance` from points, `distance_to_boxes`, `contains`."""

    def distance(self, u: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def distance_to_boxes(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def contains(self, u: np.ndarray) -> np.ndarray:
        return self.distance(u) == 0.0

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError


def _rows(u) -> np.ndarray:
    arr = np.asarray(u, dtype=np.float64)
    return arr[None, :] if arr.ndim == 1 else arr


class PointCloud(Region):
    __slots__ = ("points",)

    def __init__(self, points):
        pts = np.asarray(points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise ValueError("point cloud needs a nonempty (P, n) array")
        if not np.all(np.isfinite(pts)):
            raise ValueError("point cloud entries must be finite")
        self.points = pts.copy()
        self.points.setflags(write=False)

    def distance(self, u):
        rows = _rows(u)
        d = np.linalg.norm(rows[:, None, :] - self.points[None, :, :], axis=-1)
        return d.min(axis=1)

    def nearest_index(self, u):
        rows = _rows(u)
        d = np.linalg.norm(rows[:, None, :] - self.points[None, :, :], axis=-1)
        return d.argmin(axis=1)

    def distance_to_boxes(self, lo, hi):
        lo, hi = np.asarray(lo, float), np.asarray(hi, float)
        # per-axis excess of each point outside each box
        gap = np.maximum(lo[:, None, :] - self.points[None, :, :],
                         self.points[None, :, :] - hi[:, None, :])
        gap = np.maximum(gap, 0.0)
        return np.linalg.norm(gap, axis=-1).min(axis=1)

    def bounding_box(self):
        return self.points.min(axis=0), self.points.max(axis=0)


class Box(Region):
    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        lo = np.asarray(lo, dtype=np.float64)
        hi = np.asarray(hi, dtype=np.float64)
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ValueError("box corners must be matching flat arrays")
        if np.any(hi < lo):
            raise ValueError("box upper corner must dominate the lower corner")
        self.lo, self.hi = lo.copy(), hi.copy()

    def distance(self, u):
        rows = _rows(u)
        gap = np.maximum(self.lo - rows, rows - self.hi)
        return np.linalg.norm(np.maximum(gap, 0.0), axis=-1)

    def distance_to_boxes(self, lo, hi):
        lo, hi = np.asarray(lo, float), np.asarray(hi, float)
        gap = np.maximum(self.lo[None, :] - hi, lo - self.hi[None, :])
        return np.linalg.norm(np.maximum(gap, 0.0), axis=-1)

    def contains(self, u):
        rows = _rows(u)
        return np.all((rows >= self.lo) & (rows <= self.hi), axis=-1)

    def bounding_box(self):
        return self.lo.copy(), self.hi.copy()


class Ball(Region):
    __slots__ = ("center", "radius")

    def __init__(self, center, radius):
        center = np.asarray(center, dtype=np.float64)
        if center.ndim != 1:
            raise ValueError("ball center must be a flat array")
        if radius < 0:
            raise ValueError(f"ball radius must be nonnegative, got {radius}")
        self.center = center.copy()
        self.radius = float(radius)

    def distance(self, u):
        rows = _rows(u)
        return np.maximum(
            np.linalg.norm(rows - self.center, axis=-1) - self.radius, 0.0
        )

    def distance_to_boxes(self, lo, hi):
        gap = np.maximum(np.asarray(lo, float) - self.center,
                         self.center - np.asarray(hi, float))
        d = np.linalg.norm(np.maximum(gap, 0.0), axis=-1)
        return np.maximum(d - self.radius, 0.0)

    def bounding_box(self):
        return self.center - self.radius, self.center + self.radius


class RegionUnion(Region):
    __slots__ = ("parts",)

    def __init__(self, parts):
        parts = list(parts)
        if not parts:
            raise ValueError("union needs at least one region")
        self.parts = parts

    def distance(self, u):
        return np.min([p.distance(u) for p in self.parts], axis=0)

    def distance_to_boxes(self, lo, hi):
        return np.min([p.distance_to_boxes(lo, hi) for p in self.parts], axis=0)

    def contains(self, u):
        out = self.parts[0].contains(u)
        for p in self.parts[1:]:
            out = out | p.contains(u)
        return out

    def bounding_box(self):
        los, his = zip(*(p.bounding_box() for p in self.parts))
        return np.min(los, axis=0), np.max(his, axis=0)
