"""Numerical certification of uncertainty inequalities for the wavelet transform.

Every report evaluates the two sides of an inequality by quadrature on the
group grid (Haar weights from :class:`GroupGrid`, a cell factor for ``y``)
and on the signal's frequency grid.  ``holds`` compares them with a small
relative tolerance; variants that differ from the printed statements (proof
versions, alternative normalizations) are carried in ``metadata`` so that no
single reading is adopted silently.

Conventions
-----------
* ``F_q`` is the unnormalized two-sided QFT, so ``||F_q f||^2 = (2 pi)^2 ||f||^2``.
* Sets ``E`` live in the ``(y, x)`` product.  A mask may be given over ``y``
  only (``x`` unrestricted) or over the full ``(y1, y2, x1, x2)`` lattice.  The
  ``x`` factor is measured with unit total mass (a probability measure on
  the sampling window), which keeps ``mu(E)`` comparable to the ``y`` area.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.special import digamma

from .errors import DomainError, MomentWarning
from .qft import qft_forward
from .qlct import LCTPair, qlct_forward
from .quaternion import QSignal2D, l2_norm, qnorm, qnorm2
from .transform import QLCWTCoefficients, qlcwt_forward
from .wavelets import GroupGrid, MotherWavelet, admissibility_constant

__all__ = [
    "DIGAMMA_CONSTANT",
    "UncertaintyReport",
    "lemma41_report",
    "lemma41_residual",
    "heisenberg_report",
    "logarithmic_report",
    "local_concentration_report",
    "local_inequality_report",
    "log_b_variants",
]

#: ``Gamma'(1/2) / Gamma(1/2) - ln(pi) = -gamma - 2 ln 2 - ln pi``
DIGAMMA_CONSTANT = float(digamma(0.5) - math.log(math.pi))

REL_TOL = 1e-9
_FOUR_PI2 = 4.0 * math.pi**2


@dataclass
class UncertaintyReport:
    """Two sides of an inequality ``lhs >= rhs``; ``slack = lhs - rhs``."""

    name: str
    lhs: float
    rhs: float
    slack: float
    holds: bool
    inputs: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    @classmethod
    def build(cls, name, lhs, rhs, inputs=None, metadata=None, tol=REL_TOL):
        lhs, rhs = float(lhs), float(rhs)
        slack = lhs - rhs
        bound = tol * max(abs(lhs), abs(rhs), 1.0)
        return cls(name, lhs, rhs, slack, bool(slack >= -bound), inputs or {}, metadata or {})

    def to_dict(self) -> dict:
        return _jsonable(asdict(self))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return obj


# ---------------------------------------------------------------------------
# shared pieces
# ---------------------------------------------------------------------------


def _inputs(f, psi, ggrid, P, signal_id):
    return {
        "signal": signal_id,
        "wavelet": psi.to_spec() if hasattr(psi, "to_spec") else {},
        "lct": P.to_dict(),
        "grid": f.grid.to_dict(),
        "group_grid": ggrid.to_dict(),
    }


def _coefficients(f, psi, ggrid, P, W) -> QLCWTCoefficients:
    if W is not None:
        return W
    return qlcwt_forward(f, psi, ggrid, P, check=False)


def _constant(psi, ggrid, C) -> float:
    return admissibility_constant(psi, ggrid).mean if C is None else float(C)


def _group_sum(W: QLCWTCoefficients, weight_y: np.ndarray | None = None) -> float:
    """``sum_{m,l} haar(m,l) sum_y weight(y) |W|^2 dy``."""
    dens = qnorm2(W.coeffs)
    if weight_y is not None:
        dens = dens * weight_y
    per = dens.sum(axis=(2, 3)) * W.group_grid.ygrid.cell
    return float((W.group_grid.weights() * per).sum())


def _boundary_fraction(e: np.ndarray, width: int = 2) -> float:
    """Share of the energy map ``e`` carried by the outer ``width`` rows/columns."""
    total = e.sum()
    if total == 0:
        return 0.0
    inner = e[width:-width, width:-width].sum()
    return float((total - inner) / total)


def _check_moments(f: QSignal2D, W: QLCWTCoefficients, threshold: float = 1e-8, coeff_threshold: float = 1e-2) -> dict:
    """Warn when second moments are likely truncated by the sampling window.

    Coefficients at the largest scales are wide by construction, so their
    boundary share is held to a looser threshold than the signal's.
    """
    frac_f = _boundary_fraction(qnorm2(f.data))
    emap = np.tensordot(W.group_grid.weights(), qnorm2(W.coeffs), axes=([0, 1], [0, 1]))
    frac_w = _boundary_fraction(emap)
    if frac_f > threshold or frac_w > coeff_threshold:
        warnings.warn(
            f"energy near the grid boundary (signal {frac_f:.2e}, coefficients {frac_w:.2e}); "
            "moments may be truncated",
            MomentWarning,
            stacklevel=3,
        )
    return {"boundary_fraction_signal": frac_f, "boundary_fraction_coefficients": frac_w}


def _safe_log_radius(r: np.ndarray, d1: float, d2: float) -> np.ndarray:
    """``ln r`` with the sample at the origin moved to a quarter-cell offset."""
    r = np.array(r, dtype=float)
    r[r == 0] = math.hypot(d1 / 4, d2 / 4)
    return np.log(r)


def log_b_variants(P: LCTPair) -> dict:
    """Candidate values of the ``ln|b|`` term for a matrix pair."""
    b1, b2 = (abs(b) for b in P.b)
    if b1 == 0 or b2 == 0:
        return {"geometric": -math.inf, "euclidean": math.log(math.hypot(b1, b2)) if b1 + b2 else -math.inf, "axis1": -math.inf}
    return {
        "geometric": 0.5 * math.log(b1 * b2),
        "euclidean": 0.5 * math.log(b1 * b1 + b2 * b2),
        "axis1": math.log(b1),
    }


def _spectral_slices(W: QLCWTCoefficients):
    """QLCT of every coefficient slice in its ``y`` variable (generator)."""
    ygrid = W.group_grid.ygrid
    for m in range(W.coeffs.shape[0]):
        for l in range(W.coeffs.shape[1]):
            yield m, l, qlct_forward(QSignal2D(ygrid, W.coeffs[m, l]), W.lct)


# ---------------------------------------------------------------------------
# Lemma: weighted spectral energy of the coefficients
# ---------------------------------------------------------------------------


def lemma41_report(
    f: QSignal2D,
    psi: MotherWavelet,
    ggrid: GroupGrid,
    P: LCTPair,
    k: int = 1,
    W: QLCWTCoefficients | None = None,
    C: float | None = None,
) -> dict:
    """Both sides of the ``w_k``-weighted coefficient energy identity.

    ``lhs`` integrates ``|w_k L[W](w)|^2`` over the group, each slice being
    transformed in ``y``.  ``rhs`` is ``C ||w_k F_q f||^2`` as stated; since the
    QLCT frequency is ``b_k`` times the QFT frequency and ``F_q`` carries no
    ``(2 pi)^-2``, the balanced right side is ``rhs * b_k^2 / (2 pi)^2``.
    Both residuals are returned.
    """
    if k not in (1, 2):
        raise DomainError("axis index k must be 1 or 2")
    C = _constant(psi, ggrid, C)
    W = _coefficients(f, psi, ggrid, P, W)
    weights = ggrid.weights()
    lhs = 0.0
    for m, l, spec in _spectral_slices(W):
        wk = spec.grid.mesh()[k - 1]
        lhs += weights[m, l] * float((wk**2 * qnorm2(spec.data)).sum() * spec.grid.cell)
    F = qft_forward(f)
    wk = F.grid.mesh()[k - 1]
    rhs = C * float((wk**2 * qnorm2(F.data)).sum() * F.grid.cell)
    bk = P.b[k - 1]
    rhs_bal = rhs * bk * bk / _FOUR_PI2

    def rel(x, y):
        return abs(x - y) / abs(y) if abs(y) > 1e-300 else abs(x - y)

    return {
        "lhs": lhs,
        "rhs": rhs,
        "residual": rel(lhs, rhs),
        "rhs_balanced": rhs_bal,
        "residual_balanced": rel(lhs, rhs_bal),
        "C": C,
        "k": k,
    }


def lemma41_residual(f, psi, ggrid, P, k: int = 1, W=None, C=None, balanced: bool = False) -> float:
    rep = lemma41_report(f, psi, ggrid, P, k, W, C)
    return rep["residual_balanced" if balanced else "residual"]


# ---------------------------------------------------------------------------
# Heisenberg type
# ---------------------------------------------------------------------------


def heisenberg_report(
    f: QSignal2D,
    psi: MotherWavelet,
    ggrid: GroupGrid,
    P: LCTPair,
    k: int = 1,
    W: QLCWTCoefficients | None = None,
    C: float | None = None,
    signal_id: str = "",
) -> UncertaintyReport:
    """Spatial spread of the coefficients times the QFT frequency spread of ``f``.

    ``lhs = [sum_G y_k^2 |Wf|^2 deta] [int w_k^2 |F_q f|^2 dw]`` (second-moment
    weight) against ``rhs = (b_k^2 / 4) C ||f||^4``, the squared form reached
    before the final division.  The statement's ``sqrt(C)`` right side and its
    ``|y_k^2 Wf|^2`` weight are reported in ``metadata``.
    """
    if k not in (1, 2):
        raise DomainError("axis index k must be 1 or 2")
    C = _constant(psi, ggrid, C)
    W = _coefficients(f, psi, ggrid, P, W)
    meta = _check_moments(f, W)
    yk = W.group_grid.ygrid.mesh()[k - 1]
    spread_y = _group_sum(W, yk**2)
    spread_y4 = _group_sum(W, yk**4)
    F = qft_forward(f)
    wk = F.grid.mesh()[k - 1]
    spread_w = float((wk**2 * qnorm2(F.data)).sum() * F.grid.cell)
    nf2 = l2_norm(f) ** 2
    bk2 = P.b[k - 1] ** 2
    lhs = spread_y * spread_w
    rhs = 0.25 * bk2 * C * nf2**2
    rhs_printed = 0.25 * bk2 * math.sqrt(C) * nf2**2
    lhs_stmt = spread_y4 * spread_w
    meta.update(
        {
            "k": k,
            "C": C,
            "spatial_spread": spread_y,
            "frequency_spread": spread_w,
            "rhs_as_printed": rhs_printed,
            "holds_as_printed": bool(lhs - rhs_printed >= -REL_TOL * max(abs(lhs), 1.0)),
            "lhs_statement_weight": lhs_stmt,
            "relative_slack": (lhs - rhs) / rhs if rhs > 0 else None,
            "normative": "second-moment weight, squared right side with C",
        }
    )
    return UncertaintyReport.build("heisenberg", lhs, rhs, _inputs(f, psi, ggrid, P, signal_id), meta)


# ---------------------------------------------------------------------------
# logarithmic
# ---------------------------------------------------------------------------


def logarithmic_report(
    f: QSignal2D,
    psi: MotherWavelet,
    ggrid: GroupGrid,
    P: LCTPair,
    W: QLCWTCoefficients | None = None,
    C: float | None = None,
    log_b: str = "geometric",
    signal_id: str = "",
) -> UncertaintyReport:
    """Log-weighted coefficient and spectral energies against ``C (D + ln|b|) ||f||^2``.

    The main ``lhs``/``rhs`` follow the stated inequality with the unnormalized
    QFT.  ``metadata`` adds

    * ``balanced``: the spectral term divided by ``(2 pi)^2``;
    * ``as_proved``: the group-integrated slice inequality before the lemma is
      applied, with the QLCT of each slice;
    * the three ``ln|b|`` readings.
    """
    C = _constant(psi, ggrid, C)
    W = _coefficients(f, psi, ggrid, P, W)
    meta = _check_moments(f, W)
    yg = W.group_grid.ygrid
    y1, y2 = yg.mesh()
    logy = _safe_log_radius(np.hypot(y1, y2), yg.d1, yg.d2)
    term_y = _group_sum(W, logy)
    F = qft_forward(f)
    w1, w2 = F.grid.mesh()
    logw = _safe_log_radius(np.hypot(w1, w2), F.grid.d1, F.grid.d2)
    term_w = C * float((logw * qnorm2(F.data)).sum() * F.grid.cell)
    nf2 = l2_norm(f) ** 2
    variants = log_b_variants(P)
    if log_b not in variants:
        raise DomainError(f"unknown ln|b| reading {log_b!r}; choose from {sorted(variants)}")
    lb = variants[log_b]
    lhs = term_y + term_w
    rhs = C * (DIGAMMA_CONSTANT + lb) * nf2

    weights = ggrid.weights()
    spec_log = 0.0
    for m, l, spec in _spectral_slices(W):
        s1, s2 = spec.grid.mesh()
        lw = _safe_log_radius(np.hypot(s1, s2), spec.grid.d1, spec.grid.d2)
        spec_log += weights[m, l] * float((lw * qnorm2(spec.data)).sum() * spec.grid.cell)
    energy = _group_sum(W)
    lhs_bal = term_y + term_w / _FOUR_PI2
    lhs_pr = term_y + spec_log
    rhs_pr = (DIGAMMA_CONSTANT + lb) * energy
    meta.update(
        {
            "C": C,
            "D": DIGAMMA_CONSTANT,
            "log_b": lb,
            "log_b_reading": log_b,
            "log_b_variants": variants,
            "term_y": term_y,
            "term_w": term_w,
            "balanced": {"lhs": lhs_bal, "rhs": rhs, "holds": bool(lhs_bal >= rhs - REL_TOL * abs(rhs))},
            "as_proved": {"lhs": lhs_pr, "rhs": rhs_pr, "holds": bool(lhs_pr >= rhs_pr - REL_TOL * abs(rhs_pr))},
        }
    )
    return UncertaintyReport.build("logarithmic", lhs, rhs, _inputs(f, psi, ggrid, P, signal_id), meta)


# ---------------------------------------------------------------------------
# local forms
# ---------------------------------------------------------------------------


def _x_fraction(E: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    """Per-``y`` share of the ``x`` window inside ``E`` (unit-mass ``x`` measure)."""
    E = np.asarray(E, dtype=bool)
    if E.shape == shape:
        return E.astype(float)
    if E.shape == shape + shape:
        return E.mean(axis=(2, 3))
    raise DomainError(f"mask shape {E.shape} is neither {shape} nor {shape + shape}")


def _normalized(f, psi, W):
    norm = l2_norm(f) * psi.norm()
    if norm == 0:
        raise DomainError("signal or wavelet has zero norm")
    return W.coeffs / norm, norm


def local_concentration_report(
    f: QSignal2D,
    psi: MotherWavelet,
    ggrid: GroupGrid,
    P: LCTPair,
    E: np.ndarray,
    m: int,
    l: int = 0,
    W: QLCWTCoefficients | None = None,
    signal_id: str = "",
) -> UncertaintyReport:
    """Concentration of one normalized coefficient slice on ``E``.

    With ``||f|| = ||psi|| = 1`` (enforced by rescaling) and
    ``1 - eps = int int_E |W(a, y, theta)|^2 dy dx`` the stated conclusion is
    ``a (1 - eps) <= mu(E)``; the report's ``lhs`` is ``mu(E)`` and ``rhs`` is
    ``a (1 - eps)``.  ``holds`` also requires the sup-norm bound
    ``sup |W| <= 1 / a`` as stated.  The bound that follows directly from
    Cauchy-Schwarz, ``sup |W| <= ||f|| ||psi||``, and the corrected concentration
    chain ``1 - eps <= mu(E) sup|W|^2`` are reported in ``metadata``.
    """
    W = _coefficients(f, psi, ggrid, P, W)
    yg = W.group_grid.ygrid
    frac = _x_fraction(E, yg.shape)
    if not frac.any():
        raise DomainError("E is empty")
    coeffs, _ = _normalized(f, psi, W)
    sl = coeffs[m, l]
    a = float(W.group_grid.scales[m])
    mu = float(frac.sum() * yg.cell)
    conc = float((qnorm2(sl) * frac).sum() * yg.cell)
    eps = 1.0 - conc
    sup = float(qnorm(sl).max())
    sup_ok_printed = sup <= (1.0 / a) * (1 + REL_TOL)
    sup_ok_direct = sup <= 1.0 + REL_TOL
    base = UncertaintyReport.build("local_concentration", mu, a * (1.0 - eps), _inputs(f, psi, ggrid, P, signal_id))
    base.holds = bool(base.holds and sup_ok_printed)
    base.metadata = {
        "a": a,
        "theta": float(W.group_grid.angles[l]),
        "epsilon": eps,
        "mu_E": mu,
        "concentration": conc,
        "sup_norm": sup,
        "sup_bound_as_printed": 1.0 / a,
        "sup_bound_holds_as_printed": bool(sup_ok_printed),
        "sup_bound_direct": 1.0,
        "sup_bound_holds_direct": bool(sup_ok_direct),
        "concentration_holds_as_printed": bool(a * (1.0 - eps) <= mu * (1 + REL_TOL)),
        "concentration_holds_corrected": bool(conc <= mu * sup * sup * (1 + REL_TOL)),
        "disagreement": bool(sup_ok_printed != sup_ok_direct),
    }
    return base


def _radial_mean(rho: np.ndarray, xs2: np.ndarray, alpha: float, chunk: int = 512) -> np.ndarray:
    """``mean_x (rho + |x|^2)^alpha`` for every entry of ``rho``."""
    if alpha == 1.0:
        return rho + xs2.mean()
    uniq_x, cnt = np.unique(xs2, return_counts=True)
    wts = cnt / cnt.sum()
    uniq_r, inv = np.unique(rho, return_inverse=True)
    out = np.empty(uniq_r.size)
    for s in range(0, uniq_r.size, chunk):
        r = uniq_r[s : s + chunk]
        out[s : s + chunk] = ((r[:, None] + uniq_x[None, :]) ** alpha) @ wts
    return out[inv].reshape(rho.shape)


def ball_measure(ygrid, radius: float) -> float:
    """``mu(B_radius)`` in the ``(y, x)`` product with unit-mass ``x`` measure."""
    y1, y2 = ygrid.mesh()
    x2 = np.sort((y1**2 + y2**2).ravel())
    rem = radius**2 - (y1**2 + y2**2)
    share = np.searchsorted(x2, rem, side="left") / x2.size
    share[rem <= 0] = 0.0
    return float(share.sum() * ygrid.cell)


def choose_lambda0(ygrid, cap: float = 1.0, limit: float = 0.5) -> float:
    """Largest grid-representable radius ``<= cap`` with ``mu(B) <= limit``."""
    step = min(ygrid.d1, ygrid.d2)
    k = int(math.floor(cap / step + 1e-12))
    while k > 0:
        lam = k * step
        if ball_measure(ygrid, lam) <= limit:
            return lam
        k -= 1
    raise DomainError("no admissible radius on this grid")


def local_inequality_report(
    f: QSignal2D,
    psi: MotherWavelet,
    ggrid: GroupGrid,
    P: LCTPair,
    E: np.ndarray,
    alpha: float = 1.0,
    W: QLCWTCoefficients | None = None,
    lambda0: float | None = None,
    signal_id: str = "",
) -> UncertaintyReport:
    """Coefficient energy outside ``E`` and the moment-weighted bound.

    The coefficient norms integrate over the whole group grid, so the E-free
    total equals ``C ||f||^2 ||psi||^2`` after normalization.  The report's main
    sides are those of the first inequality, written as
    ``(1 - mu(E))^(-1/2) ||W||_{E^c} >= ||f|| ||psi|| = 1``; the moment bound
    with ``C(alpha) = lambda0^-alpha (1 - mu(B_lambda0))^-1/2`` sits in
    ``metadata`` and enters ``holds``.
    """
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    W = _coefficients(f, psi, ggrid, P, W)
    yg = W.group_grid.ygrid
    frac = _x_fraction(E, yg.shape)
    mu = float(frac.sum() * yg.cell)
    if mu >= 1.0:
        raise DomainError(f"mu(E) = {mu:.4g} must be below 1")
    coeffs, _ = _normalized(f, psi, W)
    haar = W.group_grid.weights()
    dens = qnorm2(coeffs)

    def group(weight):
        return float((haar * (dens * weight).sum(axis=(2, 3))).sum() * yg.cell)

    total = group(1.0)
    outside = group(1.0 - frac)
    lhs46 = math.sqrt(outside / (1.0 - mu))

    lam0 = choose_lambda0(yg) if lambda0 is None else float(lambda0)
    mu_b = ball_measure(yg, lam0)
    if mu_b >= 1.0:
        raise DomainError("lambda0 ball has measure >= 1")
    c_alpha = 1.0 / (lam0**alpha * math.sqrt(1.0 - mu_b))
    y1, y2 = yg.mesh()
    rho = y1**2 + y2**2
    moment = group(_radial_mean(rho, rho.ravel(), alpha))
    lhs47 = c_alpha * math.sqrt(moment)

    rep = UncertaintyReport.build("local_inequality", lhs46, 1.0, _inputs(f, psi, ggrid, P, signal_id))
    holds47 = lhs47 >= 1.0 - REL_TOL
    rep.holds = bool(rep.holds and holds47)
    rep.metadata = {
        "mu_E": mu,
        "energy_total_normalized": total,
        "energy_outside": outside,
        "alpha": alpha,
        "lambda0": lam0,
        "mu_ball": mu_b,
        "C_alpha": c_alpha,
        "moment": moment,
        "moment_bound": {"lhs": lhs47, "rhs": 1.0, "holds": bool(holds47)},
        "x_measure": "unit mass on the sampling window",
    }
    return rep
