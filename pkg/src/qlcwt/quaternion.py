"""Quaternion arithmetic, sampled quaternion fields and their L2 pairing.

Quaternion-valued arrays are stored as real numpy arrays whose last axis has
length 4 and holds the components ``(q0, q1, q2, q3)`` of
``q0 + i q1 + j q2 + k q3``.  All array helpers broadcast over leading axes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GeometryError

# ---------------------------------------------------------------------------
# array-level algebra
# ---------------------------------------------------------------------------


def qmul(a, b):
    """Hamilton product of quaternion arrays ``a`` and ``b`` (broadcasting)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a0, a1, a2, a3 = np.moveaxis(a, -1, 0)
    b0, b1, b2, b3 = np.moveaxis(b, -1, 0)
    return np.stack(
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a1 * b0 + a0 * b1 + a2 * b3 - a3 * b2,
            a0 * b2 + a2 * b0 + a3 * b1 - a1 * b3,
            a0 * b3 + a3 * b0 + a1 * b2 - a2 * b1,
        ],
        axis=-1,
    )


_CONJ = np.array([1.0, -1.0, -1.0, -1.0])


def qconj(a):
    """Quaternion conjugate of an array."""
    return np.asarray(a, dtype=float) * _CONJ


def qnorm2(a):
    """Squared quaternion modulus ``q0^2 + q1^2 + q2^2 + q3^2``."""
    a = np.asarray(a, dtype=float)
    return np.sum(a * a, axis=-1)


def qnorm(a):
    return np.sqrt(qnorm2(a))


def from_i(z):
    """Embed an i-complex array ``x + i y`` as quaternions ``(x, y, 0, 0)``."""
    z = np.asarray(z, dtype=complex)
    zero = np.zeros(z.shape)
    return np.stack([z.real, z.imag, zero, zero], axis=-1)


def from_j(z):
    """Embed a complex array as the j-complex quaternion ``x + j y``."""
    z = np.asarray(z, dtype=complex)
    zero = np.zeros(z.shape)
    return np.stack([z.real, zero, z.imag, zero], axis=-1)


def from_real(x):
    x = np.asarray(x, dtype=float)
    zero = np.zeros(x.shape)
    return np.stack([x, zero, zero, zero], axis=-1)


def to_pair(a):
    """Split quaternions into the complex pair ``(f1, f2)`` with ``a = f1 + j f2``.

    ``f1 = q0 + i q1`` and ``f2 = q2 - i q3``.
    """
    a = np.asarray(a, dtype=float)
    return a[..., 0] + 1j * a[..., 1], a[..., 2] - 1j * a[..., 3]


def from_pair(f1, f2):
    f1 = np.asarray(f1, dtype=complex)
    f2 = np.asarray(f2, dtype=complex)
    return np.stack([f1.real, f1.imag, f2.real, -f2.imag], axis=-1)


def pair_inner(f, g):
    """Pointwise pairing ``f conj(g)`` evaluated through the complex-pair formula."""
    f1, f2 = to_pair(f)
    g1, g2 = to_pair(g)
    return from_pair(f1 * np.conj(g1) + np.conj(f2) * g2, f2 * np.conj(g1) - np.conj(f1) * g2)


def inner_product_pointwise(f, g):
    """``<f, g>_H = f conj(g)`` for quaternions or quaternion arrays."""
    if isinstance(f, Quaternion) and isinstance(g, Quaternion):
        return f * g.conj()
    return qmul(f, qconj(g))


# ---------------------------------------------------------------------------
# scalar quaternion value type
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Quaternion:
    q0: float = 0.0
    q1: float = 0.0
    q2: float = 0.0
    q3: float = 0.0

    @classmethod
    def from_array(cls, a) -> "Quaternion":
        a = np.asarray(a, dtype=float).reshape(4)
        return cls(*(float(v) for v in a))

    def to_array(self) -> np.ndarray:
        return np.array([self.q0, self.q1, self.q2, self.q3])

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return Quaternion.from_array(qmul(self.to_array(), other.to_array()))
        return Quaternion.from_array(self.to_array() * float(other))

    def __rmul__(self, other):
        return Quaternion.from_array(self.to_array() * float(other))

    def __add__(self, other):
        return Quaternion.from_array(self.to_array() + other.to_array())

    def __sub__(self, other):
        return Quaternion.from_array(self.to_array() - other.to_array())

    def __neg__(self):
        return Quaternion.from_array(-self.to_array())

    def conj(self) -> "Quaternion":
        return Quaternion(self.q0, -self.q1, -self.q2, -self.q3)

    def norm(self) -> float:
        return math.sqrt(self.q0**2 + self.q1**2 + self.q2**2 + self.q3**2)

    def to_pair(self) -> "ComplexPair":
        return ComplexPair(complex(self.q0, self.q1), complex(self.q2, -self.q3))


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


@dataclass(frozen=True)
class ComplexPair:
    """Quaternion written as ``f1 + j f2`` with complex ``f1, f2``."""

    f1: complex
    f2: complex

    def to_quaternion(self) -> Quaternion:
        return Quaternion(self.f1.real, self.f1.imag, self.f2.real, -self.f2.imag)

    def conj(self) -> "ComplexPair":
        return ComplexPair(self.f1.conjugate(), -self.f2)


def qconj_norm(a: Quaternion) -> tuple[Quaternion, float]:
    """Return ``(conj(a), |a|)``."""
    return a.conj(), a.norm()


# ---------------------------------------------------------------------------
# sampled fields
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Grid2D:
    """Uniform 2D sample grid; sample ``(p, q)`` sits at ``(min1 + p d1, min2 + q d2)``."""

    n1: int
    n2: int
    d1: float
    d2: float
    min1: float
    min2: float

    def __post_init__(self):
        if self.n1 < 2 or self.n2 < 2:
            raise GeometryError(f"grid needs at least 2 samples per axis, got {self.n1}x{self.n2}")
        if not (self.d1 > 0 and self.d2 > 0):
            raise GeometryError("grid spacings must be positive")

    @classmethod
    def centered(cls, n: int, length: float, n2: int | None = None, length2: float | None = None):
        """Grid of ``n`` samples spanning ``length`` with ``min = -(n/2) d``."""
        n2 = n if n2 is None else n2
        length2 = length if length2 is None else length2
        d1, d2 = length / n, length2 / n2
        return cls(n, n2, d1, d2, -(n // 2) * d1, -(n2 // 2) * d2)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n1, self.n2)

    @property
    def cell(self) -> float:
        return self.d1 * self.d2

    def axis1(self) -> np.ndarray:
        return self.min1 + self.d1 * np.arange(self.n1)

    def axis2(self) -> np.ndarray:
        return self.min2 + self.d2 * np.arange(self.n2)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.axis1(), self.axis2(), indexing="ij")

    def conjugate(self) -> "Grid2D":
        """Centered frequency grid with ``dw = 2 pi / (n d)``."""
        w1 = 2 * np.pi / (self.n1 * self.d1)
        w2 = 2 * np.pi / (self.n2 * self.d2)
        return Grid2D(self.n1, self.n2, w1, w2, -(self.n1 // 2) * w1, -(self.n2 // 2) * w2)

    def matches(self, other: "Grid2D", rtol: float = 1e-12) -> bool:
        if self.shape != other.shape:
            return False
        a = np.array([self.d1, self.d2, self.min1, self.min2])
        b = np.array([other.d1, other.d2, other.min1, other.min2])
        return bool(np.allclose(a, b, rtol=rtol, atol=rtol * max(self.d1, self.d2)))

    def to_dict(self) -> dict:
        return {"n1": self.n1, "n2": self.n2, "d1": self.d1, "d2": self.d2, "min1": self.min1, "min2": self.min2}


def _freeze(data) -> np.ndarray:
    arr = np.array(data, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class QField2D:
    grid: Grid2D
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        data = _freeze(self.data)
        if data.shape != (self.grid.n1, self.grid.n2, 4):
            raise GeometryError(f"data shape {data.shape} does not match grid {self.grid.shape}")
        object.__setattr__(self, "data", data)

    def with_data(self, data):
        return type(self)(self.grid, data)

    def __add__(self, other):
        _check_same(self, other)
        return self.with_data(self.data + other.data)

    def __sub__(self, other):
        _check_same(self, other)
        return self.with_data(self.data - other.data)

    def scale(self, s: float):
        return self.with_data(self.data * s)

    def lmul(self, q):
        """Left-multiply every sample by the quaternion ``q``."""
        q = q.to_array() if isinstance(q, Quaternion) else q
        return self.with_data(qmul(q, self.data))

    def rmul(self, q):
        q = q.to_array() if isinstance(q, Quaternion) else q
        return self.with_data(qmul(self.data, q))


class QSignal2D(QField2D):
    """Quaternion-valued function sampled on a spatial grid."""

    @property
    def n1(self):
        return self.grid.n1

    @property
    def n2(self):
        return self.grid.n2

    @property
    def dx1(self):
        return self.grid.d1

    @property
    def dx2(self):
        return self.grid.d2

    @property
    def x1_min(self):
        return self.grid.min1

    @property
    def x2_min(self):
        return self.grid.min2

    @classmethod
    def zeros(cls, grid: Grid2D):
        return cls(grid, np.zeros(grid.shape + (4,)))

    @classmethod
    def from_function(cls, grid: Grid2D, func):
        """Sample ``func(x1, x2) -> (..., 4)`` quaternion array on ``grid``."""
        x1, x2 = grid.mesh()
        return cls(grid, func(x1, x2))


@dataclass(frozen=True)
class QSpectrum2D(QField2D):
    """Quaternion samples on a frequency grid.

    ``source`` remembers the spatial grid the spectrum was computed from so the
    inverse transform lands on exactly the same samples.
    """

    source: Grid2D | None = None

    def with_data(self, data):
        return QSpectrum2D(self.grid, data, self.source)

    @property
    def dw1(self):
        return self.grid.d1

    @property
    def dw2(self):
        return self.grid.d2

    @property
    def w1_min(self):
        return self.grid.min1

    @property
    def w2_min(self):
        return self.grid.min2


def _check_same(f: QField2D, g: QField2D):
    if not f.grid.matches(g.grid):
        raise GeometryError("fields live on different grids")


def l2_inner(f: QField2D, g: QField2D) -> Quaternion:
    """Riemann-sum approximation of ``int f(x) conj(g(x)) dx``."""
    _check_same(f, g)
    s = qmul(f.data, qconj(g.data)).sum(axis=(0, 1)) * f.grid.cell
    return Quaternion.from_array(s)


def l2_norm(f: QField2D) -> float:
    return math.sqrt(float(qnorm2(f.data).sum() * f.grid.cell))
