import json
import math

import numpy as np
import pytest

from qlcwt.errors import DomainError, MomentWarning
from qlcwt.qlct import fresnel_pair, qwt_pair
from qlcwt.quaternion import Grid2D, QSignal2D
from qlcwt.signals import chirped_gaussian, gaussian
from qlcwt.transform import qlcwt_forward
from qlcwt.uncertainty import (
    DIGAMMA_CONSTANT,
    ball_measure,
    choose_lambda0,
    heisenberg_report,
    lemma41_report,
    lemma41_residual,
    local_concentration_report,
    local_inequality_report,
    log_b_variants,
    logarithmic_report,
)
from qlcwt.wavelets import GroupGrid, admissibility_constant, make_dog_wavelet


@pytest.fixture(scope="module")
def env():
    g = Grid2D.centered(64, 16.0)
    psi = make_dog_wavelet(0.5, g)
    gg = GroupGrid(g, 0.5, 8.0, 17, 8)
    C = admissibility_constant(psi, gg).mean
    return g, psi, gg, C


@pytest.fixture(scope="module")
def gauss_w(env):
    g, psi, gg, C = env
    f = gaussian(g)
    return f, qlcwt_forward(f, psi, gg, qwt_pair(), check=False)


def test_digamma_constant():
    ref = -0.5772156649015329 - 2 * math.log(2) - math.log(math.pi)
    assert DIGAMMA_CONSTANT == pytest.approx(ref, abs=1e-12)
    assert round(DIGAMMA_CONSTANT, 6) == -3.108240


def test_log_b_readings():
    v = log_b_variants(fresnel_pair(2.0, 0.5))
    assert v["geometric"] == pytest.approx(0.0, abs=1e-15)
    assert v["euclidean"] == pytest.approx(0.5 * math.log(4.25))
    assert v["axis1"] == pytest.approx(math.log(2.0))
    q = log_b_variants(qwt_pair())
    assert q["geometric"] == 0.0 and q["axis1"] == 0.0


def test_heisenberg_gaussian_holds(env, gauss_w):
    g, psi, gg, C = env
    f, W = gauss_w
    rep = heisenberg_report(f, psi, gg, qwt_pair(), 1, W=W, C=C)
    assert rep.holds and rep.slack > 0
    assert rep.metadata["holds_as_printed"]
    json.dumps(rep.to_dict())


@pytest.mark.xfail(strict=True, reason="the product is far from the bound for the Gaussian; see the decision ledger")
def test_heisenberg_gaussian_near_minimal(env, gauss_w):
    g, psi, gg, C = env
    f, W = gauss_w
    rep = heisenberg_report(f, psi, gg, qwt_pair(), 1, W=W, C=C)
    assert rep.metadata["relative_slack"] < 0.5


def test_heisenberg_slack_grows_with_chirp(env):
    g, psi, gg, C = env
    slacks = [heisenberg_report(chirped_gaussian(g, 1.0, c), psi, gg, qwt_pair(), 1, C=C).slack for c in (0, 1, 2)]
    assert slacks[0] < slacks[1] < slacks[2]


def test_heisenberg_zero_signal(env):
    g, psi, gg, C = env
    rep = heisenberg_report(QSignal2D.zeros(g), psi, gg, qwt_pair(), 1, C=C)
    assert rep.lhs == 0 and rep.rhs == 0 and rep.holds


def test_heisenberg_axis_guard(env, gauss_w):
    g, psi, gg, C = env
    with pytest.raises(DomainError):
        heisenberg_report(gauss_w[0], psi, gg, qwt_pair(), 3, W=gauss_w[1], C=C)


@pytest.mark.parametrize("sigma", [0.5, 1.0, 2.0])
@pytest.mark.filterwarnings("ignore::qlcwt.errors.MomentWarning")
def test_log_balanced_and_proved_forms_hold(env, sigma):
    g, psi, gg, C = env
    rep = logarithmic_report(gaussian(g, sigma), psi, gg, qwt_pair(), C=C)
    assert rep.metadata["balanced"]["holds"]
    assert rep.metadata["as_proved"]["holds"]


def test_log_printed_holds_for_narrow_gaussian(env):
    g, psi, gg, C = env
    assert logarithmic_report(gaussian(g, 0.5), psi, gg, qwt_pair(), C=C).holds


@pytest.mark.xfail(strict=True, reason="printed log inequality misses a 1/(4 pi^2) balance; see the decision ledger")
def test_log_printed_unit_gaussian(env, gauss_w):
    g, psi, gg, C = env
    f, W = gauss_w
    assert logarithmic_report(f, psi, gg, qwt_pair(), W=W, C=C).holds


def test_lemma_balanced_identity(env, gauss_w):
    g, psi, gg, C = env
    f, W = gauss_w
    rep = lemma41_report(f, psi, gg, qwt_pair(), 1, W=W, C=C)
    assert rep["residual_balanced"] < 0.05
    # the printed constant misses exactly a factor 4 pi^2
    assert rep["residual"] == pytest.approx(1 - 1 / (4 * math.pi**2), abs=0.01)


def test_lemma_zero_signal(env):
    g, psi, gg, C = env
    assert lemma41_residual(QSignal2D.zeros(g), psi, gg, qwt_pair(), 1, C=C) == 0.0


@pytest.mark.xfail(strict=True, reason="fixed scale range: refinement converges to a truncation bias; see the decision ledger")
def test_lemma_residual_decreases_under_refinement(env):
    g, psi, gg, C = env
    f = gaussian(g)
    coarse = GroupGrid(g, 0.5, 8.0, 9, 4)
    r0 = lemma41_residual(f, psi, coarse, qwt_pair(), 1, balanced=True)
    r1 = lemma41_residual(f, psi, gg, qwt_pair(), 1, balanced=True)
    assert r1 < r0


def test_local_concentration_small_scales(env, gauss_w):
    g, psi, gg, C = env
    f, W = gauss_w
    x1, x2 = g.mesh()
    disc = (x1**2 + x2**2) < 0.3
    for m in (0, 4):  # a = 0.5, 1
        rep = local_concentration_report(f, psi, gg, qwt_pair(), disc, m, W=W)
        assert rep.holds
        assert rep.metadata["concentration_holds_corrected"]


@pytest.mark.xfail(strict=True, reason="the 1/a sup bound fails for a > 1; see the decision ledger")
def test_local_concentration_a2(env, gauss_w):
    g, psi, gg, C = env
    f, W = gauss_w
    x1, x2 = g.mesh()
    rep = local_concentration_report(f, psi, gg, qwt_pair(), (x1**2 + x2**2) < 0.3, 8, W=W)
    assert rep.holds


def test_local_sup_norm_direct_bound(env, gauss_w):
    g, psi, gg, C = env
    f, W = gauss_w
    everything = np.ones(g.shape, bool)
    for m in range(gg.n_scales):
        rep = local_concentration_report(f, psi, gg, qwt_pair(), everything, m, W=W)
        assert rep.metadata["sup_bound_holds_direct"]
        assert rep.metadata["concentration_holds_corrected"]


def test_local_concentration_far_set(env, gauss_w):
    g, psi, gg, C = env
    f, W = gauss_w
    x1, _ = g.mesh()
    far = x1 > 7.0
    rep = local_concentration_report(f, psi, gg, qwt_pair(), far, 4, W=W)
    assert rep.metadata["epsilon"] > 0.999 and rep.holds


def test_empty_mask_rejected(env, gauss_w):
    g, psi, gg, C = env
    with pytest.raises(DomainError):
        local_concentration_report(gauss_w[0], psi, gg, qwt_pair(), np.zeros(g.shape, bool), 0, W=gauss_w[1])
    with pytest.raises(DomainError):
        local_concentration_report(gauss_w[0], psi, gg, qwt_pair(), np.ones((3, 3), bool), 0, W=gauss_w[1])


def test_local_inequality_half_measure(env, gauss_w):
    g, psi, gg, C = env
    f, W = gauss_w
    E = np.zeros(g.shape, bool)
    E[30:32, 30:34] = True  # 8 cells of area 1/16
    rep = local_inequality_report(f, psi, gg, qwt_pair(), E, 1.0, W=W)
    assert rep.metadata["mu_E"] == pytest.approx(0.5)
    assert rep.holds


def test_local_inequality_energy_constant(env, gauss_w):
    g, psi, gg, C = env
    f, W = gauss_w
    E = np.zeros(g.shape, bool)
    E[0, 0] = True
    rep = local_inequality_report(f, psi, gg, qwt_pair(), E, 1.0, W=W, lambda0=0.5)
    # normalized total energy is C / ||psi||^2 up to the energy-ratio quadrature bias
    assert rep.metadata["energy_total_normalized"] == pytest.approx(C / psi.norm() ** 2, rel=0.1)
    assert rep.metadata["C_alpha"] == pytest.approx(1 / (0.5 * math.sqrt(1 - ball_measure(g, 0.5))))


def test_local_inequality_guards(env, gauss_w):
    g, psi, gg, C = env
    E = np.zeros(g.shape, bool)
    E[0, 0] = True
    with pytest.raises(DomainError):
        local_inequality_report(gauss_w[0], psi, gg, qwt_pair(), E, 0.0, W=gauss_w[1])
    with pytest.raises(DomainError):
        local_inequality_report(gauss_w[0], psi, gg, qwt_pair(), np.ones(g.shape, bool), 1.0, W=gauss_w[1])


def test_lambda0_choice(env):
    g = env[0]
    lam = choose_lambda0(g)
    assert ball_measure(g, lam) <= 0.5
    assert lam <= 1.0 and lam / g.d1 == pytest.approx(round(lam / g.d1))


def test_moment_warning_on_truncated_signal():
    g = Grid2D.centered(32, 4.0)
    psi = make_dog_wavelet(0.5, g)
    gg = GroupGrid(g, 0.5, 2.0, 3, 2)
    with pytest.warns(MomentWarning):
        heisenberg_report(gaussian(g, 1.5), psi, gg, qwt_pair(), 1)
