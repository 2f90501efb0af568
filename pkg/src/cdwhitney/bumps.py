"""The compactly supported bump profile and cutoff steps built from it.

Everything starts from the polynomial

    theta(u) = -1 + 2 * prod_c (1 - u_c**2)

on the cube ``[-1, 1]**n``: it is 1 at the center, -1 on the boundary, and
strictly between on the punctured open cube.  Feeding it through
``theta1 = theta / (1 - theta**2)`` and exponentiating gives the bump
``Theta = exp(theta1)``: zero to all orders on the cube boundary, divergent at
the center.  The divergence is deliberate; partitions of unity normalize it
away, which is why evaluation here works with the log weight ``theta1``
directly.  ``Theta1 = 1/Theta`` vanishes at the center instead and is the
finite companion used near vertices.

`cutoff_step` combines two shifted copies of the profile into a smooth
monotone ramp that is exactly 1 for arguments <= 0 and exactly 0 from 1 on.
"""

from __future__ import annotations

import numpy as np

__all__ = ["theta", "theta1", "log_weight", "Theta", "Theta1", "cutoff_step"]


def _as_rows(u) -> np.ndarray:
    arr = np.asarray(u, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise ValueError(f"expected (N, n) coordinates, got shape {arr.shape}")
    return arr


def theta(u) -> np.ndarray:
    """``-1 + 2 prod (1 - u_c**2)``, batched; scalar in = scalar out."""
    arr = _as_rows(u)
    out = -1.0 + 2.0 * np.prod(1.0 - arr * arr, axis=-1)
    return out if np.asarray(u).ndim > 1 else float(out[0])


def theta1(u):
    """``theta / (1 - theta**2)``; +/-inf where theta hits +/-1."""
    t = np.asarray(theta(u), dtype=np.float64)
    with np.errstate(divide="ignore"):
        out = np.where(
            np.abs(t) == 1.0,
            np.sign(t) * np.inf,
            t / (1.0 - t * t),
        )
    return out if out.ndim else float(out)


def log_weight(u) -> np.ndarray:
    """``theta1`` inside the open cube, ``-inf`` outside (and +inf at center).

    This is the quantity partitions of unity aggregate; keeping it in log
    space sidesteps the overflow near vertices.
    """
    arr = _as_rows(u)
    inside = np.all(np.abs(arr) < 1.0, axis=-1)
    out = np.full(arr.shape[0], -np.inf)
    if inside.any():
        out[inside] = theta1(arr[inside])
    return out if np.asarray(u).ndim > 1 else float(out[0])


def Theta(u):
    """``exp(theta1)`` on the open cube, 0 outside; diverges at the center."""
    lw = np.asarray(log_weight(u), dtype=np.float64)
    with np.errstate(over="ignore"):
        out = np.exp(lw)
    return out if out.ndim else float(out)


def Theta1(u):
    """``1 / Theta`` with the value 0 at the center of the cube."""
    lw = np.asarray(log_weight(u), dtype=np.float64)
    with np.errstate(over="ignore"):
        out = np.exp(-lw)
    return out if out.ndim else float(out)


def cutoff_step(t) -> np.ndarray:
    """Smooth ramp: 1 for ``t <= 0``, 0 for ``t >= 1``, monotone between.

    Built as the normalized pair of profile bumps centered at 0 and 1, so all
    derivatives vanish at both ends of the transition.
    """
    arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
    out = np.empty_like(arr)
    out[arr <= 0.0] = 1.0
    out[arr >= 1.0] = 0.0
    mid = (arr > 0.0) & (arr < 1.0)
    if mid.any():
        tm = arr[mid]
        lw0 = theta1(tm[:, None])          # bump centered at 0
        lw1 = theta1(tm[:, None] - 1.0)    # bump centered at 1
        peak = np.maximum(lw0, lw1)
        e0 = np.exp(lw0 - peak)
        e1 = np.exp(lw1 - peak)
        out[mid] = e0 / (e0 + e1)
    return out if np.asarray(t).ndim else float(out[0])
