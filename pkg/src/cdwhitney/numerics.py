"""Quadrature rules, finite differences and sample grids.

Field functions throughout the package are batched: they accept an ``(N, n)``
array of coordinate rows and return ``(N,)`` scalars or ``(N, d)`` value rows.
All rules here follow that convention so integrands are evaluated in a handful
of large vectorized calls.
"""

from __future__ import annotations

import itertools

import numpy as np
from numpy.polynomial.hermite import hermgauss

__all__ = [
    "QuadratureRule",
    "hermite_rule",
    "uniform_rule",
    "default_hermite_points",
    "integrate_gaussian",
    "integrate_box",
    "finite_diff",
    "fd_field",
    "ball_grid",
]

# Tensor grids above this row count are almost certainly a mistake.
_MAX_TENSOR_NODES = 1 << 24


class QuadratureRule:
    """Tensor-product rule from one shared 1-D node/weight pair.

    ``kind`` is ``"hermite"`` (weight exp(-t**2) on the line) or ``"uniform"``
    (midpoint rule on [-halfwidth, halfwidth]).  The full tensor grid is
    materialized lazily and cached; rows follow C order of the per-axis index,
    so orderings are deterministic.
    """

    __slots__ = ("kind", "n", "points_per_axis", "axis_nodes", "axis_weights",
                 "halfwidth", "_nodes", "_weights")

    def __init__(self, kind: str, n: int, axis_nodes, axis_weights,
                 halfwidth: float | None = None):
        if kind not in ("hermite", "uniform"):
            raise ValueError(f"unknown rule kind {kind!r}")
        if n < 1:
            raise ValueError(f"arity must be positive, got {n}")
        axis_nodes = np.asarray(axis_nodes, dtype=np.float64)
        axis_weights = np.asarray(axis_weights, dtype=np.float64)
        if axis_nodes.ndim != 1 or axis_nodes.shape != axis_weights.shape:
            raise ValueError("axis nodes and weights must be matching 1-D arrays")
        if np.any(axis_weights <= 0):
            raise ValueError("axis weights must be positive")
        m = axis_nodes.size
        if m ** n > _MAX_TENSOR_NODES:
            raise ValueError(
                f"tensor rule too large: {m}**{n} nodes exceeds {_MAX_TENSOR_NODES}"
            )
        self.kind = kind
        self.n = int(n)
        self.points_per_axis = m
        self.axis_nodes = axis_nodes
        self.axis_weights = axis_weights
        self.halfwidth = halfwidth
        self._nodes = None
        self._weights = None

    @property
    def size(self) -> int:
        return self.points_per_axis ** self.n

    def nodes(self) -> np.ndarray:
        """Tensor nodes, shape (size, n)."""
        if self._nodes is None:
            grids = np.meshgrid(*([self.axis_nodes] * self.n), indexing="ij")
            self._nodes = np.stack([g.ravel() for g in grids], axis=-1)
        return self._nodes

    def weights(self) -> np.ndarray:
        """Tensor weights, shape (size,)."""
        if self._weights is None:
            w = self.axis_weights
            out = w
            for _ in range(self.n - 1):
                out = np.multiply.outer(out, w)
            self._weights = out.ravel()
        return self._weights

    def __repr__(self) -> str:
        return (f"QuadratureRule(kind={self.kind!r}, n={self.n}, "
                f"points_per_axis={self.points_per_axis})")


def default_hermite_points(n: int) -> int:
    """Per-axis Gauss-Hermite node count keeping tensor sizes workable.

    Beyond arity 12 even four nodes per axis would overflow the tensor node
    cap, so those arities are refused outright.
    """
    if n <= 4:
        return 20
    if n <= 8:
        return 8
    if n <= 12:
        return 4
    raise ValueError(
        f"tensor Gauss-Hermite quadrature is impractical for arity {n}"
    )


def hermite_rule(n: int, points_per_axis: int | None = None) -> QuadratureRule:
    if points_per_axis is None:
        points_per_axis = default_hermite_points(n)
    nodes, weights = hermgauss(points_per_axis)
    return QuadratureRule("hermite", n, nodes, weights)


def uniform_rule(n: int, points_per_axis: int, halfwidth: float) -> QuadratureRule:
    """Midpoint rule on the centered cube of the given halfwidth."""
    if halfwidth <= 0:
        raise ValueError(f"halfwidth must be positive, got {halfwidth}")
    h = 2.0 * halfwidth / points_per_axis
    nodes = -halfwidth + h * (np.arange(points_per_axis) + 0.5)
    weights = np.full(points_per_axis, h)
    return QuadratureRule("uniform", n, nodes, weights, halfwidth=halfwidth)


def _eval_chunked(f, points: np.ndarray, chunk: int) -> np.ndarray:
    if points.shape[0] <= chunk:
        return np.asarray(f(points))
    pieces = [np.asarray(f(points[i:i + chunk]))
              for i in range(0, points.shape[0], chunk)]
    return np.concatenate(pieces, axis=0)


def integrate_gaussian(f, center, scale: float, rule: QuadratureRule,
                       chunk: int = 1 << 18):
    """``integral of f(y) * exp(-scale**2 |y - center|**2) dy`` over R**n.

    Substitutes ``y = center + t / scale`` so the Hermite weight absorbs the
    Gaussian exactly; ``f`` sees one large batch of shifted nodes.  Returns a
    float for scalar integrands, an array for vector-valued ones.
    """
    if rule.kind != "hermite":
        raise ValueError("integrate_gaussian needs a hermite rule")
    if scale <= 0:
        raise ValueError(f"scale must be positive, got {scale}")
    center = np.asarray(center, dtype=np.float64)
    if center.shape != (rule.n,):
        raise ValueError(f"center must have shape ({rule.n},), got {center.shape}")
    pts = center + rule.nodes() / scale
    vals = _eval_chunked(f, pts, chunk)
    w = rule.weights()
    if vals.ndim == 1:
        acc = float(w @ vals)
    else:
        acc = w @ vals
    return acc * scale ** (-rule.n)


def integrate_box(f, rule: QuadratureRule, center=None, chunk: int = 1 << 18):
    """Plain integral over the rule's cube (midpoint tensor rule)."""
    if rule.kind != "uniform":
        raise ValueError("integrate_box needs a uniform rule")
    pts = rule.nodes()
    if center is not None:
        pts = pts + np.asarray(center, dtype=np.float64)
    vals = _eval_chunked(f, pts, chunk)
    w = rule.weights()
    return float(w @ vals) if vals.ndim == 1 else w @ vals


# ---------------------------------------------------------------------------
# finite differences

# Central coefficients with O(h**2) truncation, per derivative order.
_CENTRAL = {
    0: ((0, 1.0),),
    1: ((-1, -0.5), (1, 0.5)),
    2: ((-1, 1.0), (0, -2.0), (1, 1.0)),
    3: ((-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)),
    4: ((-2, 1.0), (-1, -4.0), (0, 6.0), (1, -4.0), (2, 1.0)),
    5: ((-3, -0.5), (-2, 2.0), (-1, -2.5), (1, 2.5), (2, -2.0), (3, 0.5)),
    6: ((-3, 1.0), (-2, -6.0), (-1, 15.0), (0, -20.0), (1, 15.0), (2, -6.0),
        (3, 1.0)),
}


def _tensor_stencil(k: np.ndarray):
    per_axis = []
    for kj in k:
        if kj not in _CENTRAL:
            raise ValueError(
                f"finite difference tables cover axis orders <= 6, got {kj}"
            )
        per_axis.append(_CENTRAL[int(kj)])
    offsets = []
    coeffs = []
    for combo in itertools.product(*per_axis):
        offsets.append([c[0] for c in combo])
        coeffs.append(float(np.prod([c[1] for c in combo])))
    return np.asarray(offsets, dtype=np.float64), np.asarray(coeffs)


def _central_diff(f, z, k, h):
    offsets, coeffs = _tensor_stencil(k)
    pts = z[None, :] + offsets * h
    vals = np.asarray(f(pts))
    scale = h ** float(k.sum())
    if vals.ndim == 1:
        return float(coeffs @ vals) / scale
    return (coeffs @ vals) / scale


def finite_diff(f, z, k, h: float = 1e-3, richardson: bool = False):
    """Mixed partial derivative of order ``k`` at ``z`` by central differences.

    ``k`` is a per-coordinate order vector; entries up to 6 are supported.
    The plain variant is O(h**2); ``richardson=True`` combines steps ``h`` and
    ``h/2`` for O(h**4).  ``f`` must be batched.
    """
    z = np.asarray(z, dtype=np.float64)
    k = np.asarray(k, dtype=np.int64)
    if k.shape != z.shape:
        raise ValueError(f"order vector shape {k.shape} does not match point {z.shape}")
    if np.any(k < 0):
        raise ValueError("derivative orders must be nonnegative")
    if h <= 0:
        raise ValueError(f"step must be positive, got {h}")
    if richardson:
        coarse = _central_diff(f, z, k, h)
        fine = _central_diff(f, z, k, h / 2.0)
        return (4.0 * fine - coarse) / 3.0
    return _central_diff(f, z, k, h)


def ball_grid(center, radius: float, points_per_axis: int) -> np.ndarray:
    """Uniform tensor grid on the bounding cube clipped to the closed ball.

    Rows come out in C order of the grid index, so the layout is reproducible.
    A zero radius degenerates to the single center point.
    """
    center = np.asarray(center, dtype=np.float64)
    if center.ndim != 1:
        raise ValueError("center must be a flat coordinate array")
    if radius < 0:
        raise ValueError(f"radius must be nonnegative, got {radius}")
    if points_per_axis < 1:
        raise ValueError("points_per_axis must be at least 1")
    n = center.size
    if radius == 0.0 or points_per_axis == 1:
        return center[None, :].copy()
    axis = np.linspace(-radius, radius, points_per_axis)
    grids = np.meshgrid(*([axis] * n), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=-1)
    keep = np.linalg.norm(pts, axis=1) <= radius * (1.0 + 1e-12)
    return center + pts[keep]
