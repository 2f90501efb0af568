"""Real Cayley-Dickson algebras and their complexifications.

The algebra of level ``r`` has dimension ``2**r`` over the reals: level 0 is
the reals themselves, then complex numbers, quaternions, octonions, sedenions
and so on.  Products are defined by the doubling rule

    (a + b*l) * (c + d*l) = (a*c - conj(d)*b) + (d*a + b*conj(c))*l

where ``l`` is the new imaginary unit adjoined at each level.  Basis elements
multiply to plus or minus another basis element and the target index is always
the XOR of the factor indices; the sign pattern is what distinguishes the
levels.  Everything above the octonions is nonassociative, and from the
sedenions (level 4) on there are zero divisors, so norms stop being
multiplicative there.

Two product implementations are provided: a recursive one that follows the
doubling rule literally (`cd_multiply_doubling`) and a cached
structure-constant table (`MultiplicationTable`) used by `cd_multiply` and the
batched helpers.  They agree bit for bit on basis vectors and to rounding on
dense inputs; the recursive form exists as the reference and for benchmarks.
"""

from __future__ import annotations

import threading
from functools import lru_cache

import numpy as np

__all__ = [
    "R_MAX",
    "CDNumber",
    "CDComplexNumber",
    "MultiplicationTable",
    "multiplication_table",
    "basis_product",
    "cd_multiply",
    "cd_multiply_doubling",
    "cd_conjugate",
    "cd_norm_sq",
    "cd_inverse",
    "verified_inverse",
    "cd_power",
    "table_multiply",
    "batch_conjugate",
    "batch_norm_sq",
    "random_cd",
]

# Levels above 6 (128 dimensions) are refused: tables grow quadratically and
# nothing in the library needs them.
R_MAX = 6


def _check_level(level: int) -> int:
    if not isinstance(level, (int, np.integer)):
        raise ValueError(f"level must be an integer, got {type(level).__name__}")
    if level < 0 or level > R_MAX:
        raise ValueError(f"level {level} outside supported range [0, {R_MAX}]")
    return int(level)


def _as_coeffs(level: int, values) -> np.ndarray:
    dim = 1 << level
    arr = np.asarray(values, dtype=np.float64)
    if arr.shape != (dim,):
        raise ValueError(
            f"level {level} needs {dim} coefficients, got shape {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise ValueError("coefficients must be finite")
    return arr


# ---------------------------------------------------------------------------
# structure constants

@lru_cache(maxsize=None)
def basis_product(level: int, a: int, b: int) -> tuple[int, int]:
    """Product of basis elements ``i_a * i_b`` as ``(index, sign)``.

    The index is always ``a ^ b``; the sign comes from unwinding the doubling
    rule on the two halves of the index range.
    """
    if level == 0:
        return 0, 1
    h = 1 << (level - 1)
    if a < h and b < h:
        _, s = basis_product(level - 1, a, b)
        return a ^ b, s
    if a < h:
        # i_a * (i_{b-h} l) = (i_{b-h} i_a) l
        _, s = basis_product(level - 1, b - h, a)
        return a ^ b, s
    if b < h:
        # (i_{a-h} l) * i_b = (i_{a-h} conj(i_b)) l
        _, s = basis_product(level - 1, a - h, b)
        return a ^ b, s if b == 0 else -s
    # (i_{a-h} l) * (i_{b-h} l) = -(conj(i_{b-h}) i_{a-h})
    _, s = basis_product(level - 1, b - h, a - h)
    return a ^ b, -s if b == h else s


class MultiplicationTable:
    """Structure constants for one level, cached per process.

    ``sign[a, b]`` is the sign of ``i_a * i_b`` and ``target[a, b]`` its basis
    index; the target always equals ``a ^ b``.
    """

    __slots__ = ("level", "sign", "target")

    def __init__(self, level: int):
        level = _check_level(level)
        dim = 1 << level
        sign = np.empty((dim, dim), dtype=np.int8)
        target = np.empty((dim, dim), dtype=np.int64)
        for a in range(dim):
            for b in range(dim):
                k, s = basis_product(level, a, b)
                sign[a, b] = s
                target[a, b] = k
        self.level = level
        self.sign = sign
        self.target = target

    def __repr__(self) -> str:
        return f"MultiplicationTable(level={self.level})"


_TABLES: dict[int, MultiplicationTable] = {}
_TABLE_LOCK = threading.Lock()


def multiplication_table(level: int) -> MultiplicationTable:
    """Return the cached table for ``level``, building it on first use."""
    level = _check_level(level)
    tab = _TABLES.get(level)
    if tab is None:
        with _TABLE_LOCK:
            tab = _TABLES.get(level)
            if tab is None:
                tab = MultiplicationTable(level)
                _TABLES[level] = tab
    return tab


# ---------------------------------------------------------------------------
# array-level products

def _conj_array(x: np.ndarray) -> np.ndarray:
    out = -x
    out[..., 0] = x[..., 0]
    return out


def _doubling(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    if x.shape[-1] == 1:
        return x * y
    h = x.shape[-1] // 2
    a, b = x[..., :h], x[..., h:]
    c, d = y[..., :h], y[..., h:]
    lo = _doubling(a, c) - _doubling(_conj_array(d), b)
    hi = _doubling(d, a) + _doubling(b, _conj_array(c))
    return np.concatenate([lo, hi], axis=-1)


def cd_multiply_doubling(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Reference product computed by literal recursion on the doubling rule."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape[-1] != y.shape[-1]:
        raise ValueError(f"dimension mismatch: {x.shape[-1]} vs {y.shape[-1]}")
    return _doubling(x, y)


def table_multiply(level: int, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Table-driven product on coefficient arrays of shape ``(..., 2**level)``.

    Broadcasts over leading axes, so identity suites can push ``(n, dim)``
    sample blocks through in one call.
    """
    tab = multiplication_table(level)
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    dim = 1 << level
    if x.shape[-1] != dim or y.shape[-1] != dim:
        raise ValueError(
            f"level {level} arrays need last axis {dim}, "
            f"got {x.shape[-1]} and {y.shape[-1]}"
        )
    out = np.zeros(np.broadcast_shapes(x.shape, y.shape), dtype=np.float64)
    sign = tab.sign.astype(np.float64)
    for a in range(dim):
        # row a scatters onto targets a ^ b, a permutation of the basis
        out[..., a ^ np.arange(dim)] += x[..., a, None] * y * sign[a]
    return out


def batch_conjugate(x: np.ndarray) -> np.ndarray:
    """Conjugate coefficient arrays of shape ``(..., dim)``."""
    return _conj_array(np.asarray(x, dtype=np.float64))


def batch_norm_sq(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    return np.sum(x * x, axis=-1)


# ---------------------------------------------------------------------------
# scalar wrappers

class CDNumber:
    """One element of the level-``r`` Cayley-Dickson algebra.

    Stores a read-only float64 coefficient vector over the canonical basis
    ``i_0 .. i_{2**r - 1}`` with ``i_0 = 1``.
    """

    __slots__ = ("level", "coeffs")

    def __init__(self, level: int, coeffs):
        level = _check_level(level)
        arr = _as_coeffs(level, coeffs).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("CDNumber is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def basis(cls, level: int, j: int) -> "CDNumber":
        level = _check_level(level)
        dim = 1 << level
        if not 0 <= j < dim:
            raise ValueError(f"basis index {j} outside [0, {dim})")
        c = np.zeros(dim)
        c[j] = 1.0
        return cls(level, c)

    @classmethod
    def from_real(cls, level: int, t: float) -> "CDNumber":
        level = _check_level(level)
        c = np.zeros(1 << level)
        c[0] = float(t)
        return cls(level, c)

    @classmethod
    def zero(cls, level: int) -> "CDNumber":
        return cls(level, np.zeros(1 << _check_level(level)))

    @classmethod
    def one(cls, level: int) -> "CDNumber":
        return cls.from_real(level, 1.0)

    # -- basic queries ------------------------------------------------------

    @property
    def dim(self) -> int:
        return 1 << self.level

    @property
    def real(self) -> float:
        return float(self.coeffs[0])

    def _match(self, other: "CDNumber") -> None:
        if self.level != other.level:
            raise ValueError(
                f"level mismatch: {self.level} vs {other.level}"
            )

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, CDNumber):
            self._match(other)
            return CDNumber(self.level, self.coeffs + other.coeffs)
        if isinstance(other, (int, float, np.floating, np.integer)):
            c = self.coeffs.copy()
            c[0] += float(other)
            return CDNumber(self.level, c)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, CDNumber):
            self._match(other)
            return CDNumber(self.level, self.coeffs - other.coeffs)
        if isinstance(other, (int, float, np.floating, np.integer)):
            return self + (-float(other))
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return CDNumber(self.level, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, CDNumber):
            self._match(other)
            return CDNumber(
                self.level, table_multiply(self.level, self.coeffs, other.coeffs)
            )
        if isinstance(other, (int, float, np.floating, np.integer)):
            return CDNumber(self.level, self.coeffs * float(other))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return CDNumber(self.level, self.coeffs * float(other))
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return CDNumber(self.level, self.coeffs / float(other))
        return NotImplemented

    def __eq__(self, other):
        return (
            isinstance(other, CDNumber)
            and self.level == other.level
            and bool(np.array_equal(self.coeffs, other.coeffs))
        )

    def __hash__(self):
        return hash((self.level, self.coeffs.tobytes()))

    def conjugate(self) -> "CDNumber":
        return CDNumber(self.level, _conj_array(self.coeffs))

    def norm_sq(self) -> float:
        return float(np.dot(self.coeffs, self.coeffs))

    def norm(self) -> float:
        return float(np.sqrt(self.norm_sq()))

    def inverse(self) -> "CDNumber":
        return cd_inverse(self)

    def power(self, m: int) -> "CDNumber":
        return cd_power(self, m)

    def __repr__(self) -> str:
        body = np.array2string(self.coeffs, separator=", ", precision=6)
        return f"CDNumber(level={self.level}, {body})"


def cd_multiply(a: CDNumber, b: CDNumber) -> CDNumber:
    """Algebra product, table-driven; equal to the doubling recursion."""
    return a * b


def cd_conjugate(a: CDNumber) -> CDNumber:
    return a.conjugate()


def cd_norm_sq(a: CDNumber) -> float:
    return a.norm_sq()


def cd_inverse(a: CDNumber) -> CDNumber:
    """``conj(a) / |a|**2``.

    At levels with zero divisors (4 and above) this is only a one-sided
    candidate and may fail to invert; use `verified_inverse` when a checked
    result is required.
    """
    nsq = a.norm_sq()
    if nsq == 0.0:
        raise ZeroDivisionError("zero has no inverse")
    return CDNumber(a.level, _conj_array(a.coeffs) / nsq)


def verified_inverse(a: CDNumber, tol: float = 1e-9) -> CDNumber:
    """`cd_inverse` plus a residual check of ``a * a_inv`` against one."""
    inv = cd_inverse(a)
    resid = (a * inv - CDNumber.one(a.level)).norm()
    if resid > tol * max(1.0, a.norm()):
        raise ArithmeticError(
            f"inverse candidate failed: |a*inv - 1| = {resid:.3e} at level {a.level}"
        )
    return inv


def cd_power(a: CDNumber, m: int) -> CDNumber:
    """``a**m`` for integer ``m >= 0`` by left-to-right products.

    Power associativity makes the bracketing immaterial; tests confirm the
    numerical agreement.
    """
    if not isinstance(m, (int, np.integer)) or m < 0:
        raise ValueError(f"exponent must be a nonnegative integer, got {m!r}")
    out = CDNumber.one(a.level)
    for _ in range(int(m)):
        out = out * a
    return out


def random_cd(rng: np.random.Generator, level: int, size: int | None = None,
              scale: float = 1.0) -> np.ndarray:
    """Standard-normal coefficient samples, shape ``(size, dim)`` or ``(dim,)``."""
    dim = 1 << _check_level(level)
    shape = (dim,) if size is None else (size, dim)
    return scale * rng.standard_normal(shape)


# ---------------------------------------------------------------------------
# complexification

class CDComplexNumber:
    """Element ``x + i*y`` of the complexified algebra.

    The complex unit ``i`` is central and commutes with every basis element,
    so products reduce to ``(x*u - y*v) + i*(x*v + y*u)`` on the real parts.
    Conjugation acts on each part separately.
    """

    __slots__ = ("re", "im")

    def __init__(self, re: CDNumber, im: CDNumber):
        if not isinstance(re, CDNumber) or not isinstance(im, CDNumber):
            raise ValueError("re and im must be CDNumber")
        re._match(im)
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    def __setattr__(self, name, value):
        raise AttributeError("CDComplexNumber is immutable")

    @classmethod
    def from_re(cls, re: CDNumber) -> "CDComplexNumber":
        return cls(re, CDNumber.zero(re.level))

    @property
    def level(self) -> int:
        return self.re.level

    def __add__(self, other):
        if isinstance(other, CDComplexNumber):
            return CDComplexNumber(self.re + other.re, self.im + other.im)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, CDComplexNumber):
            return CDComplexNumber(self.re - other.re, self.im - other.im)
        return NotImplemented

    def __neg__(self):
        return CDComplexNumber(-self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, CDComplexNumber):
            return CDComplexNumber(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        if isinstance(other, (int, float, np.floating, np.integer)):
            return CDComplexNumber(self.re * other, self.im * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return CDComplexNumber(self.re * other, self.im * other)
        return NotImplemented

    def conjugate(self) -> "CDComplexNumber":
        return CDComplexNumber(self.re.conjugate(), self.im.conjugate())

    def norm_sq(self) -> float:
        return self.re.norm_sq() + self.im.norm_sq()

    def __eq__(self, other):
        return (
            isinstance(other, CDComplexNumber)
            and self.re == other.re
            and self.im == other.im
        )

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        return f"CDComplexNumber(re={self.re!r}, im={self.im!r})"
