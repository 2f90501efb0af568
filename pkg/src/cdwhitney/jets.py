"""Jets of prescribed partial derivatives on finite point sets.

A jet of order ``m`` on points of ``A_r**l`` assigns to every point and every
coordinate multi-index ``k`` with ``|k| <= m`` an algebra value ``f_k``,
playing the role of the partial derivative of an extension.  Values are stored
as flat coefficient arrays: length ``2**r`` over the reals, ``2 * 2**r`` for
the complexified algebra (real parts first).

The Taylor field of a jet anchored at one of its points,

    psi_{m;k}(z; y) = sum_{|s| <= m - |k|} f_{k+s}(y) / s! * (z - y)**s,

is the polynomial the jet predicts for the derivative of order ``k`` near
``y``.  `remainder` measures how far the jet misses its own predictions
between points, and `whitney_check` turns that into the classical divided
difference test: a jet of class C^m must satisfy
``|f_k(x) - psi_{m;k}(x; y)| <= eps |x - y|**(m - |k|)`` at small separations.
"""

from __future__ import annotations

import itertools
import json
import math

import numpy as np

from .numerics import finite_diff

__all__ = [
    "ORDER_CAP",
    "MultiIndex",
    "WhitneyJet",
    "WhitneyReport",
    "monomial",
    "iter_multiindices",
    "taylor_field",
    "remainder",
    "whitney_check",
    "jet_from_function",
    "scalar_field",
    "jet_to_json",
    "jet_from_json",
]

# Factorials and monomials stay well conditioned only so far; jets above this
# total order are refused.
ORDER_CAP = 12


class MultiIndex:
    """Immutable vector of per-coordinate derivative orders."""

    __slots__ = ("exponents",)

    def __init__(self, exponents):
        exps = tuple(int(e) for e in np.asarray(exponents).ravel())
        if any(e < 0 for e in exps):
            raise ValueError(f"exponents must be nonnegative, got {exps}")
        if sum(exps) > ORDER_CAP:
            raise ValueError(
                f"multi-index order {sum(exps)} exceeds cap {ORDER_CAP}"
            )
        object.__setattr__(self, "exponents", exps)

    def __setattr__(self, name, value):
        raise AttributeError("MultiIndex is immutable")

    @property
    def order(self) -> int:
        return sum(self.exponents)

    @property
    def n(self) -> int:
        return len(self.exponents)

    def factorial(self) -> float:
        out = 1
        for e in self.exponents:
            out *= math.factorial(e)
        return float(out)

    def __add__(self, other: "MultiIndex") -> "MultiIndex":
        if not isinstance(other, MultiIndex):
            return NotImplemented
        if self.n != other.n:
            raise ValueError(f"arity mismatch: {self.n} vs {other.n}")
        return MultiIndex([a + b for a, b in zip(self.exponents, other.exponents)])

    def as_array(self) -> np.ndarray:
        return np.asarray(self.exponents, dtype=np.int64)

    def __eq__(self, other):
        return isinstance(other, MultiIndex) and self.exponents == other.exponents

    def __hash__(self):
        return hash(self.exponents)

    def __repr__(self) -> str:
        return f"MultiIndex{self.exponents}"


def iter_multiindices(n: int, max_order: int):
    """All multi-indices with ``|k| <= max_order`` in graded lexicographic order."""
    if max_order > ORDER_CAP:
        raise ValueError(f"max order {max_order} exceeds cap {ORDER_CAP}")
    for total in range(max_order + 1):
        for bars in itertools.combinations(range(total + n - 1), n - 1):
            prev = -1
            exps = []
            for b in bars:
                exps.append(b - prev - 1)
                prev = b
            exps.append(total + n - 1 - prev - 1)
            yield MultiIndex(exps)


def monomial(u, k) -> np.ndarray | float:
    """``u**k`` coordinatewise product; batched over leading axes of ``u``."""
    u = np.asarray(u, dtype=np.float64)
    karr = k.as_array() if isinstance(k, MultiIndex) else np.asarray(k, dtype=np.int64)
    if u.shape[-1] != karr.size:
        raise ValueError(f"coordinate count {u.shape[-1]} != index size {karr.size}")
    out = np.prod(u ** karr, axis=-1)
    return float(out) if out.ndim == 0 else out


class WhitneyJet:
    """Order-``m`` jet on a finite family of distinct points.

    ``points`` is ``(P, n)`` with ``n = arity * 2**level``; ``values`` maps
    ``(point_index, exponent_tuple)`` to a flat value array.  Construction
    checks that every point carries a value for every ``|k| <= m``.
    """

    __slots__ = ("level", "arity", "order", "field", "points", "values",
                 "_kindex")

    def __init__(self, level: int, arity: int, order: int, field: str,
                 points, values):
        if field not in ("R", "C"):
            raise ValueError(f"field must be 'R' or 'C', got {field!r}")
        if order < 0 or order > ORDER_CAP:
            raise ValueError(f"jet order {order} outside [0, {ORDER_CAP}]")
        n = arity * (1 << level)
        pts = np.asarray(points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != n:
            raise ValueError(
                f"points must have shape (P, {n}), got {pts.shape}"
            )
        if not np.all(np.isfinite(pts)):
            raise ValueError("jet points must be finite")
        if pts.shape[0] == 0:
            raise ValueError("jet needs at least one point")
        if pts.shape[0] > 1:
            diffs = pts[:, None, :] - pts[None, :, :]
            dist = np.linalg.norm(diffs, axis=-1)
            np.fill_diagonal(dist, np.inf)
            if dist.min() == 0.0:
                raise ValueError("jet points must be distinct")
        dim = (1 << level) * (2 if field == "C" else 1)
        keys = [k.exponents for k in iter_multiindices(n, order)]
        store: dict[tuple[int, tuple], np.ndarray] = {}
        for i in range(pts.shape[0]):
            for key in keys:
                if (i, key) not in values:
                    raise ValueError(
                        f"jet is missing value for point {i}, k={key}"
                    )
                v = np.asarray(values[(i, key)], dtype=np.float64)
                if v.shape != (dim,):
                    raise ValueError(
                        f"value for point {i}, k={key} must have shape ({dim},), "
                        f"got {v.shape}"
                    )
                if not np.all(np.isfinite(v)):
                    raise ValueError(f"value for point {i}, k={key} is not finite")
                store[(i, key)] = v.copy()
        pts = pts.copy()
        pts.setflags(write=False)
        object.__setattr__(self, "level", int(level))
        object.__setattr__(self, "arity", int(arity))
        object.__setattr__(self, "order", int(order))
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "values", store)
        object.__setattr__(self, "_kindex", {key: j for j, key in enumerate(keys)})

    def __setattr__(self, name, value):
        raise AttributeError("WhitneyJet is immutable")

    @property
    def n(self) -> int:
        return self.arity * (1 << self.level)

    @property
    def num_points(self) -> int:
        return self.points.shape[0]

    @property
    def value_dim(self) -> int:
        return (1 << self.level) * (2 if self.field == "C" else 1)

    def multiindices(self) -> list[MultiIndex]:
        return list(iter_multiindices(self.n, self.order))

    def value(self, point_index: int, k) -> np.ndarray:
        key = k.exponents if isinstance(k, MultiIndex) else tuple(int(e) for e in k)
        try:
            return self.values[(point_index, key)]
        except KeyError:
            raise KeyError(
                f"no value stored for point {point_index}, k={key}"
            ) from None

    def value_array(self, k) -> np.ndarray:
        """Values of ``f_k`` across all points, shape (P, dim)."""
        key = k.exponents if isinstance(k, MultiIndex) else tuple(int(e) for e in k)
        return np.stack([self.values[(i, key)] for i in range(self.num_points)])

    def point_index(self, y) -> int:
        """Index of the jet point equal to ``y`` (within 1e-12), or raise."""
        y = np.asarray(y, dtype=np.float64)
        dists = np.linalg.norm(self.points - y, axis=1)
        i = int(np.argmin(dists))
        if dists[i] > 1e-12 * max(1.0, float(np.linalg.norm(y))):
            raise ValueError(
                f"anchor {y.tolist()} is not a jet point (nearest miss {dists[i]:.3e})"
            )
        return i


def _anchor_index(jet: WhitneyJet, y) -> int:
    if isinstance(y, (int, np.integer)):
        i = int(y)
        if not 0 <= i < jet.num_points:
            raise ValueError(f"anchor index {i} outside [0, {jet.num_points})")
        return i
    return jet.point_index(y)


def _as_index(jet: WhitneyJet, k) -> MultiIndex:
    k = k if isinstance(k, MultiIndex) else MultiIndex(k)
    if k.n != jet.n:
        raise ValueError(f"multi-index arity {k.n} != jet arity {jet.n}")
    return k


def taylor_field(jet: WhitneyJet, k, z, y) -> np.ndarray:
    """``psi_{m;k}(z; y)`` for an anchor point ``y`` of the jet.

    ``z`` may be one coordinate row or a batch ``(N, n)``; the result matches
    (``(dim,)`` or ``(N, dim)``).  For ``|k| > m`` the sum is empty and the
    result is zero.
    """
    k = _as_index(jet, k)
    i = _anchor_index(jet, y)
    z = np.asarray(z, dtype=np.float64)
    single = z.ndim == 1
    zb = z[None, :] if single else z
    if zb.shape[-1] != jet.n:
        raise ValueError(f"points must have {jet.n} coordinates, got {zb.shape[-1]}")
    u = zb - jet.points[i]
    out = np.zeros((zb.shape[0], jet.value_dim))
    budget = jet.order - k.order
    if budget >= 0:
        for s in iter_multiindices(jet.n, budget):
            coeff = jet.value(i, k + s) / s.factorial()
            out += monomial(u, s)[:, None] * coeff[None, :]
    return out[0] if single else out


def remainder(jet: WhitneyJet, k, x, y) -> np.ndarray:
    """``f_k(x) - psi_{m;k}(x; y)`` between two jet points."""
    k = _as_index(jet, k)
    ix = _anchor_index(jet, x)
    iy = _anchor_index(jet, y)
    return jet.value(ix, k) - taylor_field(jet, k, jet.points[ix], iy)


class WhitneyReport:
    """Outcome of `whitney_check`.

    ``worst_by_order`` maps ``|k|`` to ``(ratio, (i, j))`` for the worst pair
    at the base separation; ``scale_worst`` lists the overall worst ratio at
    each inspected separation (base, base/2, base/4, ...).
    """

    __slots__ = ("passed", "eps", "delta", "order", "pairs_checked",
                 "worst_by_order", "scale_worst")

    def __init__(self, passed, eps, delta, order, pairs_checked,
                 worst_by_order, scale_worst):
        self.passed = passed
        self.eps = eps
        self.delta = delta
        self.order = order
        self.pairs_checked = pairs_checked
        self.worst_by_order = worst_by_order
        self.scale_worst = scale_worst

    @property
    def worst_ratio(self) -> float:
        return self.scale_worst[0] if self.scale_worst else 0.0

    def shrinking(self) -> bool:
        """Whether the worst ratio is non-increasing as the scale halves."""
        vals = [v for v in self.scale_worst if not np.isnan(v)]
        return all(b <= a * (1 + 1e-12) for a, b in zip(vals, vals[1:]))

    def __repr__(self) -> str:
        status = "pass" if self.passed else "FAIL"
        return (f"WhitneyReport({status}, worst={self.worst_ratio:.3e}, "
                f"eps={self.eps}, delta={self.delta})")


def whitney_check(jet: WhitneyJet, eps: float, delta: float | None = None,
                  scales: int = 1) -> WhitneyReport:
    """Divided-difference test of the C^m conditions on all close pairs.

    Pairs at separation below ``delta`` (default: every distinct pair) are
    tested for every ``|k| <= m``.  With ``scales > 1`` the test repeats at
    ``delta/2, delta/4, ...`` and records the worst ratio per scale; genuinely
    C^m data drives those ratios down, while jets of a non-smooth function
    keep them level.
    """
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if scales < 1:
        raise ValueError("scales must be at least 1")
    P = jet.num_points
    if P < 2:
        raise ValueError("whitney_check needs at least two points")
    diffs = jet.points[:, None, :] - jet.points[None, :, :]
    dist = np.linalg.norm(diffs, axis=-1)
    if delta is None:
        delta = float(dist.max()) * (1 + 1e-12)
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")

    ii, jj = np.nonzero((dist > 0) & (dist < delta))
    if ii.size == 0:
        raise ValueError(f"no point pairs closer than delta={delta}")
    sep = dist[ii, jj]

    worst_by_order: dict[int, tuple[float, tuple[int, int]]] = {}
    ratios = np.zeros(ii.size)
    for k in iter_multiindices(jet.n, jet.order):
        power = jet.order - k.order
        # psi_{m;k}(x_i; y_j) accumulated over all close pairs at once
        psi = np.zeros((ii.size, jet.value_dim))
        for s in iter_multiindices(jet.n, power):
            coeff = jet.value_array(k + s) / s.factorial()
            mono = monomial(diffs[ii, jj], s)
            psi += mono[:, None] * coeff[jj]
        resid = np.linalg.norm(jet.value_array(k)[ii] - psi, axis=1)
        ratio_k = resid / sep ** power
        ratios = np.maximum(ratios, ratio_k)
        w = int(np.argmax(ratio_k))
        cur = worst_by_order.get(k.order, (-1.0, (0, 0)))
        if ratio_k[w] > cur[0]:
            worst_by_order[k.order] = (float(ratio_k[w]), (int(ii[w]), int(jj[w])))

    scale_worst = []
    for t in range(scales):
        mask = sep < delta / 2 ** t
        scale_worst.append(float(ratios[mask].max()) if mask.any() else float("nan"))
    passed = scale_worst[0] <= eps
    return WhitneyReport(passed, eps, delta, jet.order, int(ii.size),
                         worst_by_order, scale_worst)


def scalar_field(g, dim: int):
    """Embed a real scalar field as an algebra-valued one on component 0."""
    def wrapped(u):
        vals = np.asarray(g(u), dtype=np.float64)
        out = np.zeros(vals.shape + (dim,))
        out[..., 0] = vals
        return out
    return wrapped


def jet_from_function(f, points, order: int, level: int, arity: int,
                      field: str = "R", h: float = 1e-3,
                      richardson: bool = True) -> WhitneyJet:
    """Sample a jet from a batched field function by central differences.

    ``f`` maps ``(N, n)`` coordinates to ``(N, dim)`` values; each requested
    derivative is taken numerically, so ``order`` is limited by the finite
    difference tables (axis orders up to 6).
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2:
        raise ValueError("points must be a (P, n) array")
    values = {}
    for i, z in enumerate(pts):
        for k in iter_multiindices(pts.shape[1], order):
            if k.order == 0:
                v = np.asarray(f(z[None, :]))[0]
            else:
                v = finite_diff(f, z, k.as_array(), h=h, richardson=richardson)
            values[(i, k.exponents)] = np.asarray(v, dtype=np.float64)
    return WhitneyJet(level, arity, order, field, pts, values)


# ---------------------------------------------------------------------------
# JSON interchange

def jet_to_json(jet: WhitneyJet, indent: int | None = 2) -> str:
    """Serialize with sorted keys and graded-lex value order (stable bytes)."""
    entries = []
    for i in range(jet.num_points):
        for k in iter_multiindices(jet.n, jet.order):
            entries.append({
                "point": i,
                "k": list(k.exponents),
                "value": jet.value(i, k).tolist(),
            })
    doc = {
        "r": jet.level,
        "l": jet.arity,
        "m": jet.order,
        "field": jet.field,
        "points": [row.tolist() for row in jet.points],
        "values": entries,
    }
    return json.dumps(doc, indent=indent, sort_keys=True)


def _require(doc: dict, key: str):
    if key not in doc:
        raise ValueError(f"jet file is missing required field {key!r}")
    return doc[key]


def jet_from_json(text: str) -> WhitneyJet:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"jet file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValueError("jet file must contain a JSON object")
    level = _require(doc, "r")
    arity = _require(doc, "l")
    order = _require(doc, "m")
    field = _require(doc, "field")
    points = _require(doc, "points")
    raw = _require(doc, "values")
    if not isinstance(raw, list):
        raise ValueError("field 'values' must be a list")
    values = {}
    for idx, entry in enumerate(raw):
        if not isinstance(entry, dict):
            raise ValueError(f"values[{idx}] must be an object")
        for need in ("point", "k", "value"):
            if need not in entry:
                raise ValueError(f"values[{idx}] is missing field {need!r}")
        key = tuple(int(e) for e in entry["k"])
        values[(int(entry["point"]), key)] = np.asarray(entry["value"],
                                                        dtype=np.float64)
    return WhitneyJet(int(level), int(arity), int(order), str(field),
                      np.asarray(points, dtype=np.float64), values)
