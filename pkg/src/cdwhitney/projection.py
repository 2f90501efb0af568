"""Coordinate projections between algebra elements and real vectors.

A vector of ``l`` Cayley-Dickson numbers of level ``r`` carries ``n = l * 2**r``
real coordinates.  The flattening is part-major: coordinates of the first
component come first, then the second, and so on.  `vectorize` / `devectorize`
move between the two pictures by reading coefficient arrays.

`pi_j` instead computes a single coordinate algebraically,

    pi_j(z) = (-z i_j + i_j (2**r - 2)**-1 {-z + sum_k i_k (z i_k^*)}) / 2

for j >= 1, with the j = 0 variant replacing the leading ``-z i_j`` by ``z``.
The inner sum collapses to a multiple of the conjugate, which is why the
formula needs ``2**r - 2 != 0`` and hence level 2 or higher.  `conj_phrase`
exposes that inner sum on its own, and `gauss_phrase` builds the Gaussian
expression exp(sum_p b_p |z_p|^2) out of it without ever reading coordinates.
"""

from __future__ import annotations

import numpy as np

from .algebra import CDComplexNumber, CDNumber, multiplication_table

__all__ = [
    "CoordinateVector",
    "pi_j",
    "vectorize",
    "devectorize",
    "conj_phrase",
    "gauss_phrase",
]


class CoordinateVector:
    """Flat real coordinates of an ``l``-tuple of level-``r`` algebra numbers."""

    __slots__ = ("level", "arity", "entries")

    def __init__(self, level: int, arity: int, entries):
        if arity < 1:
            raise ValueError(f"arity must be positive, got {arity}")
        n = arity * (1 << level)
        arr = np.asarray(entries, dtype=np.float64)
        if arr.shape != (n,):
            raise ValueError(
                f"level {level}, arity {arity} needs {n} entries, got {arr.shape}"
            )
        if not np.all(np.isfinite(arr)):
            raise ValueError("entries must be finite")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "level", int(level))
        object.__setattr__(self, "arity", int(arity))
        object.__setattr__(self, "entries", arr)

    def __setattr__(self, name, value):
        raise AttributeError("CoordinateVector is immutable")

    @property
    def n(self) -> int:
        return self.arity * (1 << self.level)

    def part(self, p: int) -> np.ndarray:
        """Coefficient block of component ``p`` (0-based)."""
        d = 1 << self.level
        if not 0 <= p < self.arity:
            raise ValueError(f"part index {p} outside [0, {self.arity})")
        return self.entries[p * d:(p + 1) * d]

    def as_array(self) -> np.ndarray:
        return self.entries

    def __eq__(self, other):
        return (
            isinstance(other, CoordinateVector)
            and self.level == other.level
            and self.arity == other.arity
            and bool(np.array_equal(self.entries, other.entries))
        )

    def __hash__(self):
        return hash((self.level, self.arity, self.entries.tobytes()))

    def __repr__(self) -> str:
        return (
            f"CoordinateVector(level={self.level}, arity={self.arity}, "
            f"{np.array2string(self.entries, separator=', ', precision=6)})"
        )


def vectorize(parts) -> CoordinateVector:
    """Flatten a sequence of same-level CDNumbers into a CoordinateVector."""
    parts = list(parts)
    if not parts:
        raise ValueError("need at least one component")
    level = parts[0].level
    for p in parts:
        if not isinstance(p, CDNumber):
            raise ValueError(f"components must be CDNumber, got {type(p).__name__}")
        if p.level != level:
            raise ValueError(f"level mismatch: {level} vs {p.level}")
    return CoordinateVector(
        level, len(parts), np.concatenate([p.coeffs for p in parts])
    )


def devectorize(u, level: int | None = None, arity: int | None = None) -> list[CDNumber]:
    """Split flat coordinates back into the list of algebra components."""
    if isinstance(u, CoordinateVector):
        level, arity = u.level, u.arity
        arr = u.entries
    else:
        if level is None or arity is None:
            raise ValueError("level and arity are required for raw arrays")
        arr = np.asarray(u, dtype=np.float64)
        n = arity * (1 << level)
        if arr.shape != (n,):
            raise ValueError(f"expected {n} entries, got shape {arr.shape}")
    d = 1 << level
    return [CDNumber(level, arr[p * d:(p + 1) * d]) for p in range(arity)]


# Multiplying by a basis vector is a signed permutation of coefficients, so
# the phrase sums run on raw arrays instead of going through full products.

def _mul_basis_right(level: int, z: np.ndarray, k: int) -> np.ndarray:
    tab = multiplication_table(level)
    out = np.empty_like(z)
    out[tab.target[:, k]] = z * tab.sign[:, k]
    return out


def _mul_basis_left(level: int, k: int, z: np.ndarray) -> np.ndarray:
    tab = multiplication_table(level)
    out = np.empty_like(z)
    out[tab.target[k, :]] = z * tab.sign[k, :]
    return out


def conj_phrase(z: CDNumber) -> CDNumber:
    """``sum_k i_k (z i_k)`` over the whole basis.

    Numerically this equals ``-(2**r - 2) * conj(z)``; the sum is kept literal
    so the identity stays a checkable fact rather than an assumption.
    """
    acc = np.zeros(z.dim)
    for k in range(z.dim):
        acc += _mul_basis_left(z.level, k, _mul_basis_right(z.level, z.coeffs, k))
    return CDNumber(z.level, acc)


def _projection_core(z: CDNumber) -> np.ndarray:
    # (2**r - 2)**-1 {-z + sum_{k>=1} i_k (z i_k^*)}, the piece shared by
    # every pi_j; algebraically it is conj(z).
    denom = (1 << z.level) - 2
    acc = -z.coeffs.copy()
    for k in range(1, z.dim):
        acc += _mul_basis_left(z.level, k, -_mul_basis_right(z.level, z.coeffs, k))
    return acc / denom


def _real_part_checked(w: CDNumber, scale: float, where: str) -> float:
    resid = float(np.abs(w.coeffs[1:]).max()) if w.dim > 1 else 0.0
    if resid > 1e-9 * max(1.0, scale):
        raise ArithmeticError(
            f"{where}: non-real residue {resid:.3e} exceeds tolerance"
        )
    return w.real


def pi_j(z, j: int):
    """Coordinate ``u_j`` of ``z`` computed through the algebraic formula.

    Accepts a CDNumber (returns float) or CDComplexNumber (returns complex).
    Levels 0 and 1 are rejected because the formula divides by ``2**r - 2``.
    """
    if isinstance(z, CDComplexNumber):
        return complex(pi_j(z.re, j), pi_j(z.im, j))
    if not isinstance(z, CDNumber):
        raise ValueError(f"pi_j expects CDNumber, got {type(z).__name__}")
    if z.level < 2:
        raise ValueError(
            f"projection formula needs level >= 2, got {z.level}"
        )
    if not 0 <= j < z.dim:
        raise ValueError(f"coordinate index {j} outside [0, {z.dim})")
    core = _projection_core(z)
    if j == 0:
        w = (z.coeffs + core) / 2
    else:
        w = (-_mul_basis_right(z.level, z.coeffs, j)
             + _mul_basis_left(z.level, j, core)) / 2
    return _real_part_checked(CDNumber(z.level, w), z.norm(), f"pi_{j}")


def gauss_phrase(parts, b) -> float:
    """``exp(-(2**r - 2)**-1 sum_p b_p [z_p sum_k i_k (z_p i_k)])``.

    Built entirely from algebra products; equals exp(sum_p b_p |z_p|^2).  The
    bracketed factors are checked to be real before exponentiating.
    """
    if isinstance(parts, CoordinateVector):
        parts = devectorize(parts)
    elif isinstance(parts, CDNumber):
        parts = [parts]
    else:
        parts = list(parts)
    if not parts:
        raise ValueError("need at least one component")
    level = parts[0].level
    if level < 2:
        raise ValueError(f"gauss_phrase needs level >= 2, got {level}")
    weights = np.asarray(b, dtype=np.float64)
    if weights.shape != (len(parts),):
        raise ValueError(
            f"need one weight per component, got {weights.shape} for {len(parts)}"
        )
    denom = float((1 << level) - 2)
    total = 0.0
    for zp, bp in zip(parts, weights):
        if zp.level != level:
            raise ValueError(f"level mismatch: {level} vs {zp.level}")
        w = zp * conj_phrase(zp)
        total += bp * _real_part_checked(w, zp.norm_sq(), "gauss_phrase")
    return float(np.exp(-total / denom))
