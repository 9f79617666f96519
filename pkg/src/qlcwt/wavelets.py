"""Similitude-group discretization, mother wavelets and daughter wavelets.

A daughter wavelet is

    Psi_{a,y,theta}(x) = a^-1 e^{-iA(x1^2 - y1^2)} psi(r_{-theta}(x - y)/a) e^{-jB(x2^2 - y2^2)}

with ``A = a1/(2 b1)`` and ``B = a2/(2 b2)``; the factor order is significant.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import ndimage

from .errors import DomainError, InterpolationWarning, NotAdmissible
from .qft import qft_at
from .qlct import LCTPair, output_grid, qlct_forward
from .quaternion import Grid2D, QSignal2D, QSpectrum2D, from_i, from_j, from_real, l2_norm, qmul, qnorm2

_TWO_PI = 2.0 * np.pi

QFunc = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class GroupPoint:
    a: float
    y: tuple[float, float] = (0.0, 0.0)
    theta: float = 0.0

    def __post_init__(self):
        if not self.a > 0:
            raise DomainError(f"scale must be positive, got {self.a!r}")
        object.__setattr__(self, "y", (float(self.y[0]), float(self.y[1])))


@dataclass(frozen=True)
class GroupGrid:
    """Scales ``a_min r^m``, angles ``2 pi l / n_angles`` and the signal grid for ``y``."""

    ygrid: Grid2D
    a_min: float = 2.0**-3
    a_max: float = 2.0**3
    n_scales: int = 25
    n_angles: int = 8

    def __post_init__(self):
        if not (0 < self.a_min < self.a_max):
            raise DomainError("need 0 < a_min < a_max")
        if self.n_scales < 2 or self.n_angles < 1:
            raise DomainError("need at least 2 scales and 1 angle")

    @property
    def ratio(self) -> float:
        return (self.a_max / self.a_min) ** (1.0 / (self.n_scales - 1))

    @property
    def scales(self) -> np.ndarray:
        return self.a_min * self.ratio ** np.arange(self.n_scales)

    @property
    def angles(self) -> np.ndarray:
        return _TWO_PI * np.arange(self.n_angles) / self.n_angles

    @property
    def dtheta(self) -> float:
        return _TWO_PI / self.n_angles

    def haar_weight(self, m: int, l: int = 0) -> float:
        """``da dtheta / a^3`` at scale index ``m`` (independent of ``l``)."""
        a = self.scales[m]
        return a * math.log(self.ratio) * self.dtheta / a**3

    def weights(self) -> np.ndarray:
        """Haar weights as an ``(n_scales, n_angles)`` array."""
        a = self.scales
        w = a * math.log(self.ratio) * self.dtheta / a**3
        return np.repeat(w[:, None], self.n_angles, axis=1)

    @property
    def shape(self) -> tuple[int, int, int, int]:
        return (self.n_scales, self.n_angles, self.ygrid.n1, self.ygrid.n2)

    def refined(self, scale_factor: int = 2, angle_factor: int = 2) -> "GroupGrid":
        """Same scale range with ``scale_factor`` times finer log steps and more angles."""
        return GroupGrid(
            self.ygrid,
            self.a_min,
            self.a_max,
            (self.n_scales - 1) * scale_factor + 1,
            self.n_angles * angle_factor,
        )

    def to_dict(self) -> dict:
        return {
            "a_min": self.a_min,
            "a_max": self.a_max,
            "n_scales": self.n_scales,
            "n_angles": self.n_angles,
            "ygrid": self.ygrid.to_dict(),
        }


# ---------------------------------------------------------------------------
# mother wavelets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MotherWavelet:
    """Sampled mother wavelet with optional closed forms.

    ``func(x1, x2)`` evaluates psi anywhere and ``spectrum(w1, w2)`` its
    two-sided QFT; both return quaternion arrays of shape ``x1.shape + (4,)``.
    """

    signal: QSignal2D
    analytic_form: dict | None = None
    func: QFunc | None = field(default=None, repr=False, compare=False)
    spectrum: QFunc | None = field(default=None, repr=False, compare=False)
    radial: bool = False

    def evaluate(self, x1, x2) -> np.ndarray:
        """psi at arbitrary points, exact when ``func`` is known, else bilinear."""
        if self.func is not None:
            return self.func(np.asarray(x1, float), np.asarray(x2, float))
        return _bilinear(self.signal, x1, x2)

    def spectrum_at(self, w1, w2) -> np.ndarray:
        if self.spectrum is not None:
            return self.spectrum(np.asarray(w1, float), np.asarray(w2, float))
        return qft_at(self.signal, w1, w2)

    def norm(self) -> float:
        return l2_norm(self.signal)

    def dilated(self, c: float) -> "MotherWavelet":
        """``D_c psi(x) = psi(x / c) / c``."""
        if not c > 0:
            raise DomainError("dilation factor must be positive")
        form = None if self.analytic_form is None else {**self.analytic_form, "dilation": c}
        func = spec = None
        if self.func is not None:
            base = self.func
            func = lambda x1, x2: base(x1 / c, x2 / c) / c  # noqa: E731
        if self.spectrum is not None:
            base_s = self.spectrum
            spec = lambda w1, w2: c * base_s(c * w1, c * w2)  # noqa: E731
        g = self.signal.grid
        if func is not None:
            sig = QSignal2D.from_function(g, func)
        else:
            sig = QSignal2D(g, _bilinear(self.signal, *(v / c for v in g.mesh())) / c)
        return MotherWavelet(sig, form, func, spec, self.radial)

    def scaled(self, s: float) -> "MotherWavelet":
        """The wavelet multiplied by the real constant ``s``."""
        func = spec = None
        if self.func is not None:
            base = self.func
            func = lambda x1, x2: s * base(x1, x2)  # noqa: E731
        if self.spectrum is not None:
            base_s = self.spectrum
            spec = lambda w1, w2: s * base_s(w1, w2)  # noqa: E731
        return MotherWavelet(self.signal.scale(s), self.analytic_form, func, spec, self.radial)

    def to_spec(self) -> dict:
        return dict(self.analytic_form) if self.analytic_form else {"type": "sampled"}


def _bilinear(sig: QSignal2D, x1, x2) -> np.ndarray:
    g = sig.grid
    x1 = np.asarray(x1, float)
    x2 = np.asarray(x2, float)
    coords = np.stack([(x1 - g.min1) / g.d1, (x2 - g.min2) / g.d2])
    return np.stack(
        [ndimage.map_coordinates(sig.data[..., c], coords, order=1, mode="constant", cval=0.0) for c in range(4)],
        axis=-1,
    )


def _dog_func(lam: float) -> QFunc:
    def psi(x1, x2):
        r2 = x1**2 + x2**2
        return from_real(np.exp(-r2 / (2 * lam**2)) / lam**2 - np.exp(-r2 / 2))

    return psi


def _dog_spectrum(lam: float) -> QFunc:
    def spec(w1, w2):
        r2 = w1**2 + w2**2
        return from_real(_TWO_PI * (np.exp(-(lam**2) * r2 / 2) - np.exp(-r2 / 2)))

    return spec


def make_dog_wavelet(lam: float, grid: Grid2D) -> MotherWavelet:
    """Difference-of-Gaussian wavelet ``lam^-2 e^{-r^2/2lam^2} - e^{-r^2/2}``."""
    if not 0 < lam < 1:
        raise DomainError(f"DOG parameter must lie in (0, 1), got {lam!r}")
    func = _dog_func(lam)
    return MotherWavelet(
        QSignal2D.from_function(grid, func),
        {"type": "dog", "lambda": float(lam)},
        func,
        _dog_spectrum(lam),
        radial=True,
    )


def dog_norm2(lam: float) -> float:
    """Exact ``||psi||^2`` of the DOG wavelet."""
    return math.pi * (1 / lam**2 - 4 / (1 + lam**2) + 1)


def dog_admissibility_exact(lam: float) -> float:
    """Exact ``int int |F psi(r a w)|^2 da dtheta / a`` over the whole half-line."""
    return 8 * math.pi**3 * 0.5 * math.log((1 + lam**2) ** 2 / (4 * lam**2))


def make_gaussian_wavelet(grid: Grid2D, sigma: float = 1.0) -> MotherWavelet:
    """Plain Gaussian (not admissible); used as a negative control."""

    def func(x1, x2):
        return from_real(np.exp(-(x1**2 + x2**2) / (2 * sigma**2)))

    def spec(w1, w2):
        return from_real(_TWO_PI * sigma**2 * np.exp(-(sigma**2) * (w1**2 + w2**2) / 2))

    return MotherWavelet(
        QSignal2D.from_function(grid, func), {"type": "gaussian", "sigma": sigma}, func, spec, radial=True
    )


def wavelet_from_signal(sig: QSignal2D) -> MotherWavelet:
    return MotherWavelet(sig, None)


# ---------------------------------------------------------------------------
# daughters
# ---------------------------------------------------------------------------


def rotate_minus(theta: float, x1, x2):
    """``r_{-theta} x = (x1 cos + x2 sin, -x1 sin + x2 cos)``."""
    c, s = math.cos(theta), math.sin(theta)
    return x1 * c + x2 * s, -x1 * s + x2 * c


def chirp_rates(P: LCTPair) -> tuple[float, float]:
    P.require_regular()
    return P.A1.chirp_rate(), P.A2.chirp_rate()


def _on_grid(grid: Grid2D, x1, x2) -> bool:
    p = (x1 - grid.min1) / grid.d1
    q = (x2 - grid.min2) / grid.d2
    return bool(np.allclose(p, np.round(p), atol=1e-9) and np.allclose(q, np.round(q), atol=1e-9))


def mother_at(psi: MotherWavelet, z1, z2) -> np.ndarray:
    """psi at the points ``(z1, z2)``; warns when bilinear fallback is off-grid."""
    if psi.func is None and not _on_grid(psi.signal.grid, z1, z2):
        warnings.warn(
            "no closed form for the mother wavelet; using bilinear interpolation",
            InterpolationWarning,
            stacklevel=3,
        )
    return psi.evaluate(z1, z2)


def daughter_wavelet(psi: MotherWavelet, g: GroupPoint, P: LCTPair, grid: Grid2D | None = None) -> QSignal2D:
    """Sample ``Psi_{a,y,theta}`` on ``grid`` (defaults to the mother's grid)."""
    A, B = chirp_rates(P)
    grid = grid or psi.signal.grid
    x1, x2 = grid.mesh()
    y1, y2 = g.y
    z1, z2 = rotate_minus(g.theta, (x1 - y1) / g.a, (x2 - y2) / g.a)
    core = mother_at(psi, z1, z2) / g.a
    left = from_i(np.exp(-1j * A * (x1**2 - y1**2)))
    right = from_j(np.exp(-1j * B * (x2**2 - y2**2)))
    return QSignal2D(grid, qmul(qmul(left, core), right))


def daughter_spectrum(psi: MotherWavelet, g: GroupPoint, P: LCTPair, grid: Grid2D | None = None) -> QSpectrum2D:
    """QLCT of the daughter from the mother's QFT.

    ``c1 a e^{i(d1 w1^2 + a1 y1^2 - 2 y1 w1)/2b1} F[psi](r_{-theta} a w/b) e^{j(...)} c2``
    where ``c_s`` are the kernel constants.  Exact for radial mothers or
    ``theta = 0``.
    """
    P.require_regular()
    grid = grid or psi.signal.grid
    wgrid = output_grid(grid, P)
    A1, A2 = P.A1, P.A2
    w1, w2 = wgrid.mesh()
    y1, y2 = g.y
    u1, u2 = rotate_minus(g.theta, g.a * w1 / A1.b, g.a * w2 / A2.b)
    core = psi.spectrum_at(u1, u2) * g.a
    left = from_i(A1.constant() * np.exp(1j * (A1.d * w1**2 + A1.a * y1**2 - 2 * y1 * w1) / (2 * A1.b)))
    right = from_j(A2.constant() * np.exp(1j * (A2.d * w2**2 + A2.a * y2**2 - 2 * y2 * w2) / (2 * A2.b)))
    return QSpectrum2D(wgrid, qmul(qmul(left, core), right), grid)


def daughter_spectrum_residual(psi: MotherWavelet, g: GroupPoint, P: LCTPair, grid: Grid2D | None = None) -> float:
    """Relative sup-norm gap between the closed form and a numerical QLCT of the daughter."""
    grid = grid or psi.signal.grid
    closed = daughter_spectrum(psi, g, P, grid).data
    numeric = qlct_forward(daughter_wavelet(psi, g, P, grid), P).data
    return float(np.sqrt(qnorm2(closed - numeric).max() / qnorm2(numeric).max()))


def scaling_relation_residual(psi: MotherWavelet, g: GroupPoint, P: LCTPair, grid: Grid2D | None = None) -> float:
    """Check ``(2 pi sqrt(b1 b2)/a) L[Psi](b w)`` against the chirp-wrapped ``F[psi](r a w)``.

    The left side is the numerical QLCT of the sampled daughter; its output
    grid is exactly ``b w`` with ``w`` on the conjugate grid.  Only defined
    for ``b1, b2 > 0``.
    """
    P.require_regular()
    A1, A2 = P.A1, P.A2
    if A1.b <= 0 or A2.b <= 0:
        raise DomainError("scaling relation needs positive b1, b2")
    grid = grid or psi.signal.grid
    lhs = qlct_forward(daughter_wavelet(psi, g, P, grid), P)
    lhs_data = lhs.data * (_TWO_PI * math.sqrt(A1.b * A2.b) / g.a)
    w1, w2 = grid.conjugate().mesh()
    y1, y2 = g.y
    b1, b2 = A1.b, A2.b
    u1, u2 = rotate_minus(g.theta, g.a * w1, g.a * w2)
    core = psi.spectrum_at(u1, u2)
    ph1 = (A1.d * (b1 * w1) ** 2 - math.pi * b1 / 2 + A1.a * y1**2 - 2 * y1 * b1 * w1) / (2 * b1)
    ph2 = (A2.d * (b2 * w2) ** 2 - math.pi * b2 / 2 + A2.a * y2**2 - 2 * y2 * b2 * w2) / (2 * b2)
    rhs = qmul(qmul(from_i(np.exp(1j * ph1)), core), from_j(np.exp(1j * ph2)))
    return float(np.sqrt(qnorm2(lhs_data - rhs).max() / qnorm2(rhs).max()))


# ---------------------------------------------------------------------------
# admissibility
# ---------------------------------------------------------------------------

ADMISSIBILITY_FLOOR = 1e-12


def default_probes(n: int = 8) -> np.ndarray:
    """``n`` probe frequencies at radii in [0.7, 1.6] and spread directions."""
    k = np.arange(n)
    radii = 0.7 + 0.9 * k / max(n - 1, 1)
    phi = (2 * np.pi * k * 0.381966) % (2 * np.pi) + 0.1
    return np.stack([radii * np.cos(phi), radii * np.sin(phi)], axis=-1)


@dataclass(frozen=True)
class AdmissibilityResult:
    mean: float
    values: np.ndarray
    probes: np.ndarray
    constancy: float

    def to_dict(self) -> dict:
        return {
            "C_mean": self.mean,
            "values": self.values.tolist(),
            "probes": self.probes.tolist(),
            "constancy": self.constancy,
        }


def admissibility_at(psi: MotherWavelet, w, ggrid: GroupGrid) -> float:
    """``sum_{m,l} |F[psi](r_{-theta_l} a_m w)|^2 ln r dtheta`` (the ``da/a`` quadrature)."""
    w1, w2 = float(w[0]), float(w[1])
    if w1 == 0 and w2 == 0:
        raise DomainError("probe frequency must be non-zero")
    a = ggrid.scales[:, None]
    th = ggrid.angles[None, :]
    c, s = np.cos(th), np.sin(th)
    u1 = a * (w1 * c + w2 * s)
    u2 = a * (-w1 * s + w2 * c)
    val = qnorm2(psi.spectrum_at(u1, u2)).sum() * math.log(ggrid.ratio) * ggrid.dtheta
    return float(val)


def admissibility_constant(psi: MotherWavelet, ggrid: GroupGrid, probes=None) -> AdmissibilityResult:
    """Probe-averaged admissibility constant and its constancy diagnostic.

    The diagnostic is ``max |C(w) - C_mean| / C_mean`` over the probe set.
    """
    probes = default_probes() if probes is None else np.atleast_2d(np.asarray(probes, float))
    vals = np.array([admissibility_at(psi, w, ggrid) for w in probes])
    mean = float(vals.mean())
    if not mean > ADMISSIBILITY_FLOOR:
        raise NotAdmissible(f"admissibility constant {mean:.3g} is not positive")
    return AdmissibilityResult(mean, vals, probes, float(np.max(np.abs(vals - mean)) / mean))


def admissibility_lct_form(psi: MotherWavelet, w, ggrid: GroupGrid, P: LCTPair) -> float:
    """``sum |L[Psi_{a,0,theta}](w)|^2 da dtheta / a^3`` from closed-form daughter spectra.

    Evaluated at a single frequency ``w`` without building a full grid.
    """
    P.require_regular()
    A1, A2 = P.A1, P.A2
    w1, w2 = float(w[0]), float(w[1])
    total = 0.0
    for m, a in enumerate(ggrid.scales):
        for th in ggrid.angles:
            u1, u2 = rotate_minus(th, a * w1 / A1.b, a * w2 / A2.b)
            core = psi.spectrum_at(np.array([u1]), np.array([u2]))[0] * a
            mag2 = qnorm2(core) / (_TWO_PI**2 * abs(A1.b * A2.b))
            total += mag2 * ggrid.haar_weight(m)
    return float(total)


def admissibility_ratio(psi: MotherWavelet, ggrid: GroupGrid, P: LCTPair, probes=None) -> dict:
    """Compare the two admissibility expressions at probe frequencies.

    The daughter-spectrum side is evaluated at ``b w`` so both sides see the
    same mother-spectrum arguments; the measured ratio is returned together
    with the value ``1 / (4 pi^2 |b1 b2|)`` predicted by the kernel constants.
    """
    probes = default_probes() if probes is None else np.atleast_2d(np.asarray(probes, float))
    b1, b2 = P.A1.b, P.A2.b
    lhs = np.array([admissibility_at(psi, w, ggrid) for w in probes])
    rhs = np.array([admissibility_lct_form(psi, (w[0] * b1, w[1] * b2), ggrid, P) for w in probes])
    ratio = rhs / lhs
    return {
        "qft_form": lhs.tolist(),
        "lct_form": rhs.tolist(),
        "ratio_mean": float(ratio.mean()),
        "ratio_spread": float(np.ptp(ratio) / ratio.mean()),
        "predicted_ratio": 1.0 / (_TWO_PI**2 * abs(b1 * b2)),
    }

