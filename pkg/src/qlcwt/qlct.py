"""Two-sided quaternion linear canonical transform.

For ``b1 b2 != 0`` the transform is computed as
output-chirp o scaled two-sided QFT o input-chirp::

    L[f](w) = c1 e^{i d1 w1^2/2b1} QFT[e^{i a1 x1^2/2b1} f e^{j a2 x2^2/2b2}](w/b) e^{j d2 w2^2/2b2} c2

with ``c1 = e^{-i pi/4} / sqrt(2 pi b1)`` (principal square root taken in the
i-plane) and ``c2`` its j-plane counterpart.  The output grid is chosen so that
``w / b`` falls exactly on the conjugate grid of the input.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConditioningWarning, DegenerateBranch, DomainError, GeometryError, UnsupportedBranch
from .qft import exp_i, exp_j, two_sided_sum
from .quaternion import Grid2D, QSignal2D, QSpectrum2D, Quaternion, from_i, from_j, l2_inner, qmul, qnorm

_TWO_PI = 2.0 * np.pi
NEAR_DEGENERATE = 1e-9


@dataclass(frozen=True)
class LCTMatrix:
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if abs(det - 1.0) > 1e-12:
            raise DomainError(f"LCT matrix must be unimodular, got det={det!r}")

    @property
    def degenerate(self) -> bool:
        return self.b == 0.0

    def inverse(self) -> "LCTMatrix":
        return LCTMatrix(self.d, -self.b, -self.c, self.a)

    def chirp_rate(self) -> float:
        """Input chirp rate ``a / (2 b)``."""
        return self.a / (2.0 * self.b)

    def constant(self) -> complex:
        """Kernel constant ``e^{-i pi/4} / sqrt(2 pi b)`` as a complex number."""
        return np.exp(-1j * np.pi / 4) / np.sqrt(complex(_TWO_PI * self.b))

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d}

    @classmethod
    def from_dict(cls, d: dict) -> "LCTMatrix":
        return cls(float(d["a"]), float(d["b"]), float(d["c"]), float(d["d"]))


@dataclass(frozen=True)
class LCTPair:
    """Matrix ``A1`` acts on axis 1 (i side), ``A2`` on axis 2 (j side)."""

    A1: LCTMatrix
    A2: LCTMatrix

    @property
    def b(self) -> tuple[float, float]:
        return (self.A1.b, self.A2.b)

    def branch(self) -> str:
        d1, d2 = self.A1.degenerate, self.A2.degenerate
        if d1 and d2:
            return "degenerate"
        if d1 or d2:
            raise UnsupportedBranch("exactly one of b1, b2 is zero; no transform formula for the mixed case")
        for b in self.b:
            if abs(b) < NEAR_DEGENERATE:
                warnings.warn(f"|b|={abs(b):.3g} is near-degenerate", ConditioningWarning, stacklevel=3)
        return "regular"

    def require_regular(self):
        if self.branch() != "regular":
            raise UnsupportedBranch("operation needs b1 != 0 and b2 != 0")

    def to_dict(self) -> dict:
        return {"A1": self.A1.to_dict(), "A2": self.A2.to_dict()}

    @classmethod
    def from_dict(cls, d: dict) -> "LCTPair":
        return cls(LCTMatrix.from_dict(d["A1"]), LCTMatrix.from_dict(d["A2"]))


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------


def qwt_pair() -> LCTPair:
    m = LCTMatrix(0.0, 1.0, -1.0, 0.0)
    return LCTPair(m, m)


def fresnel_pair(b1: float, b2: float) -> LCTPair:
    if b1 == 0 or b2 == 0:
        raise DegenerateBranch("Fresnel preset needs b1, b2 != 0")
    return LCTPair(LCTMatrix(1.0, b1, 0.0, 1.0), LCTMatrix(1.0, b2, 0.0, 1.0))


def fractional_pair(alpha: float) -> LCTPair:
    s = math.sin(alpha)
    if abs(s) < 1e-12:
        raise DegenerateBranch("fractional preset needs alpha not a multiple of pi")
    c = math.cos(alpha)
    if abs(c) < 1e-15:
        c = 0.0
    m = LCTMatrix(c, s, -s, c)
    return LCTPair(m, m)


def preset_transform(kind: str, *params: float) -> LCTPair:
    """Build a preset pair: ``qwt`` (alias ``qft``), ``fresnel`` (b1, b2) or ``fractional`` (alpha)."""
    if kind in ("qwt", "qft"):
        return qwt_pair()
    if kind == "fresnel":
        return fresnel_pair(*params)
    if kind == "fractional":
        return fractional_pair(*params)
    raise DomainError(f"unknown preset {kind!r}")


def parse_preset(text: str) -> LCTPair:
    """Parse ``qwt``, ``fresnel:<b1>,<b2>`` or ``fractional:<alpha>``."""
    name, _, args = text.strip().partition(":")
    try:
        params = [float(v) for v in args.split(",")] if args else []
    except ValueError as exc:
        raise DomainError(f"bad preset parameters in {text!r}") from exc
    return preset_transform(name, *params)


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------


def _kernel_complex(x, w, A: LCTMatrix) -> np.ndarray:
    if A.b == 0:
        raise DegenerateBranch("kernel undefined for b = 0; use the degenerate branch")
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    phase = (A.a * x**2 - 2 * x * w + A.d * w**2 - np.pi * A.b / 2) / (2 * A.b)
    return np.exp(1j * phase) / np.sqrt(complex(_TWO_PI * A.b))


def kernel_axis1(x1, w1, A1: LCTMatrix):
    """i-side kernel ``K^i_{A1}(x1, w1)`` as a quaternion (array)."""
    out = from_i(_kernel_complex(x1, w1, A1))
    return Quaternion.from_array(out) if out.ndim == 1 else out


def kernel_axis2(x2, w2, A2: LCTMatrix):
    """j-side kernel: same formula with j in place of i."""
    out = from_j(_kernel_complex(x2, w2, A2))
    return Quaternion.from_array(out) if out.ndim == 1 else out


# ---------------------------------------------------------------------------
# grids
# ---------------------------------------------------------------------------


def _uniform(start: float, step: float, n: int) -> np.ndarray:
    return start + step * np.arange(n)


def output_grid(grid: Grid2D, P: LCTPair) -> Grid2D:
    """Spectral grid of ``qlct_forward`` for an input on ``grid``."""
    if P.branch() == "degenerate":
        d1, d2 = P.A1.d, P.A2.d
        if d1 <= 0 or d2 <= 0:
            raise UnsupportedBranch("degenerate branch is only sampled for d1, d2 > 0")
        return Grid2D(grid.n1, grid.n2, grid.d1 / d1, grid.d2 / d2, grid.min1 / d1, grid.min2 / d2)
    conj = grid.conjugate()
    b1, b2 = abs(P.A1.b), abs(P.A2.b)
    return Grid2D(grid.n1, grid.n2, conj.d1 * b1, conj.d2 * b2, conj.min1 * b1, conj.min2 * b2)


def _scaled_axes(wgrid: Grid2D, P: LCTPair):
    """Frequency axes ``w / b`` seen by the inner QFT (possibly descending)."""
    b1, b2 = P.A1.b, P.A2.b
    u1 = _uniform(wgrid.min1 / b1, wgrid.d1 / b1, wgrid.n1)
    u2 = _uniform(wgrid.min2 / b2, wgrid.d2 / b2, wgrid.n2)
    return u1, u2


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------


def _apply_chirps(data, left_phase, right_phase, left_const=1.0, right_const=1.0):
    left = from_i(left_const * np.exp(1j * left_phase))
    right = from_j(right_const * np.exp(1j * right_phase))
    return qmul(qmul(left[:, None, :], data), right[None, :, :])


def qlct_forward(f: QSignal2D, P: LCTPair) -> QSpectrum2D:
    """Two-sided QLCT of ``f`` for the matrix pair ``P``."""
    g = f.grid
    wgrid = output_grid(g, P)
    A1, A2 = P.A1, P.A2
    if P.branch() == "degenerate":
        w1, w2 = wgrid.axis1(), wgrid.axis2()
        # f(d w) is f itself on this grid
        out = _apply_chirps(f.data, A1.c * A1.d * w1**2 / 2, A2.c * A2.d * w2**2 / 2) * math.sqrt(A1.d * A2.d)
        return QSpectrum2D(wgrid, out, g)
    x1, x2 = g.axis1(), g.axis2()
    chirped = _apply_chirps(f.data, A1.chirp_rate() * x1**2, A2.chirp_rate() * x2**2)
    u1, u2 = _scaled_axes(wgrid, P)
    inner = two_sided_sum(chirped, x1, x2, u1, u2) * g.cell
    w1, w2 = wgrid.axis1(), wgrid.axis2()
    out = _apply_chirps(
        inner, A1.d * w1**2 / (2 * A1.b), A2.d * w2**2 / (2 * A2.b), A1.constant(), A2.constant()
    )
    return QSpectrum2D(wgrid, out, g)


def qlct_inverse(F: QSpectrum2D, P: LCTPair, grid: Grid2D | None = None) -> QSignal2D:
    """Inverse QLCT: ``int conj(K1) F(w) conj(K2) dw``."""
    grid = grid or F.source
    if grid is None:
        raise GeometryError("spectrum carries no source grid; pass one explicitly")
    if not output_grid(grid, P).matches(F.grid):
        raise GeometryError("spectrum grid does not match the QLCT grid of the target")
    A1, A2 = P.A1, P.A2
    w1, w2 = F.grid.axis1(), F.grid.axis2()
    if P.branch() == "degenerate":
        out = _apply_chirps(F.data, -A1.c * A1.d * w1**2 / 2, -A2.c * A2.d * w2**2 / 2) / math.sqrt(A1.d * A2.d)
        return QSignal2D(grid, out)
    g = _apply_chirps(
        F.data,
        -A1.d * w1**2 / (2 * A1.b),
        -A2.d * w2**2 / (2 * A2.b),
        np.conj(A1.constant()),
        np.conj(A2.constant()),
    )
    u1, u2 = _scaled_axes(F.grid, P)
    x1, x2 = grid.axis1(), grid.axis2()
    inner = two_sided_sum(g, u1, u2, x1, x2, +1, +1) * F.grid.cell
    out = _apply_chirps(inner, -A1.chirp_rate() * x1**2, -A2.chirp_rate() * x2**2)
    return QSignal2D(grid, out)


def qlct_direct(f: QSignal2D, P: LCTPair) -> QSpectrum2D:
    """Brute-force QLCT by explicit kernel products (test oracle, regular branch)."""
    P.require_regular()
    g = f.grid
    wgrid = output_grid(g, P)
    x1, x2 = g.axis1(), g.axis2()
    w1, w2 = wgrid.axis1(), wgrid.axis2()
    k1 = kernel_axis1(w1[:, None] * 0 + x1[None, :], w1[:, None] + 0 * x1[None, :], P.A1)  # (r1, p, 4)
    k2 = kernel_axis2(x2[:, None] + 0 * w2[None, :], w2[None, :] + 0 * x2[:, None], P.A2)  # (q, r2, 4)
    left = qmul(k1[:, None, :, None, :], f.data[None, None, :, :, :])
    full = qmul(left, np.transpose(k2, (1, 0, 2))[None, :, None, :, :])
    return QSpectrum2D(wgrid, full.sum(axis=(2, 3)) * g.cell, g)


def qlct_parseval_residual(f: QSignal2D, g: QSignal2D, P: LCTPair, part: str = "full") -> float:
    """Mismatch between ``<L f, L g>`` and ``<f, g>``.

    Relative in quaternion norm, or absolute when ``|<f, g>| < 1e-12``.
    ``part="scalar"`` compares only the real parts of the two pairings.
    """
    lhs = l2_inner(qlct_forward(f, P), qlct_forward(g, P)).to_array()
    rhs = l2_inner(f, g).to_array()
    if part == "scalar":
        lhs, rhs = lhs[:1], rhs[:1]
    elif part != "full":
        raise DomainError(f"unknown part {part!r}")
    diff = float(qnorm(lhs - rhs))
    denom = float(qnorm(rhs))
    return diff / denom if denom >= 1e-12 else diff


__all__ = [
    "LCTMatrix",
    "LCTPair",
    "qwt_pair",
    "fresnel_pair",
    "fractional_pair",
    "preset_transform",
    "parse_preset",
    "kernel_axis1",
    "kernel_axis2",
    "output_grid",
    "qlct_forward",
    "qlct_inverse",
    "qlct_direct",
    "qlct_parseval_residual",
    "exp_i",
    "exp_j",
]
