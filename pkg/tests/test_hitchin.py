import math

import numpy as np
import pytest
from scipy import integrate

from cohom1 import hitchin
from cohom1.hitchin import KS


def test_domains():
    assert hitchin.metric(3).r_lo == pytest.approx((math.sqrt(5) - 1) / 2)
    assert hitchin.metric(4).r_hi == math.inf
    assert hitchin.metric(6).r_lo == pytest.approx(math.sqrt(2) - 1)
    with pytest.raises(hitchin.HitchinError):
        hitchin.metric(5)


def test_k4_at_one():
    assert hitchin.eval_hitchin(4, 1.0) == pytest.approx((0, 1 / 9, 1 / 9, 1 / 27), abs=1e-15)
    assert hitchin.printed_forms(4, 1.0) == pytest.approx((0, 1 / 9, 1 / 9, 1 / 27), abs=1e-15)


def test_far_end_collapse_of_t2():
    assert hitchin.eval_hitchin(3, 1.0)[1] == pytest.approx(0.0, abs=1e-15)
    assert hitchin.eval_hitchin(6, 1.0)[1] == pytest.approx(0.0, abs=1e-15)
    assert hitchin.printed_forms(6, 1.0)[1] == pytest.approx(0.0, abs=1e-15)


def test_domain_error():
    with pytest.raises(hitchin.HitchinDomainError):
        hitchin.eval_hitchin(3, 0.5)
    with pytest.raises(hitchin.HitchinDomainError):
        hitchin.eval_hitchin(4, 0.9)


@pytest.mark.parametrize("k", KS)
def test_printed_and_stable_forms_agree_inside(k):
    m = hitchin.metric(k)
    if k == 4:
        r = np.linspace(1.05, 40.0, 200)
    else:
        r = np.linspace(m.r_lo, m.r_hi, 202)[1:-1]
    a = np.array(hitchin.printed_forms(k, r))
    b = np.array(hitchin.eval_hitchin(k, r))
    assert np.max(np.abs(a - b) / np.maximum(1, np.abs(b))) < 1e-10


@pytest.mark.parametrize("k", KS)
def test_positivity_on_open_domain(k):
    u = np.linspace(0, 1, 301)[1:-1]
    T1, T2, T3, s = hitchin.metric_u(k, u)
    assert np.all(T1 > 0) and np.all(T2 > 0) and np.all(T3 > 0) and np.all(s > 0)


@pytest.mark.parametrize("k", KS)
def test_arclength_table(k):
    tab = hitchin.arclength_param(k)
    assert tab.t[0] == 0.0
    assert np.all(np.diff(tab.t) > 0)
    fine = hitchin.arclength_param(k, 1024)
    assert abs(fine.L_total - tab.L_total) < 1e-8
    # independent route: adaptive quadrature of the printed dr-coefficient in r
    if k != 4:
        m = hitchin.metric(k)
        val, err = integrate.quad(lambda r: math.sqrt(hitchin.printed_forms(k, r)[3]), m.r_lo, m.r_hi,
                                  limit=200, epsabs=1e-12)
        assert abs(val - tab.L_total) < 1e-7


def test_k4_length_by_substitution():
    # r = 1/w^2 maps [1, inf) to (0, 1]; integrate sqrt(f) |dr/dw| in w
    def integrand(w):
        r = 1 / (w * w)
        return math.sqrt(hitchin.printed_forms(4, r)[3]) * 2 / w ** 3

    val, _ = integrate.quad(integrand, 0.0, 1.0, limit=200, epsabs=1e-12)
    assert abs(val - hitchin.arclength_param(4).L_total) < 1e-8


@pytest.mark.parametrize("k", KS)
def test_u_of_t_inverts(k):
    tab = hitchin.arclength_param(k)
    u = np.linspace(0, 1, 57)
    assert np.max(np.abs(tab.u_of_t(tab.t_of_u(u)) - u)) < 1e-12


@pytest.mark.parametrize("k", KS)
def test_endpoint_limits(k):
    lim = hitchin.endpoint_limits(k)
    assert abs(lim.smooth[0]) < 1e-12
    assert lim.smooth[1] == pytest.approx(lim.smooth[2], abs=1e-12)
    assert lim.collapsing_far == (2,)
    assert lim.far[0] == pytest.approx(lim.far[2], abs=1e-12)


def test_richardson_on_known_limit():
    val, spread = hitchin.richardson_limit(lambda x: math.sin(x) / x, 0.0, 1.0, 0.1, levels=6, power=2)
    assert val == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("k", KS)
def test_curvature_signs(k):
    rep = hitchin.curvature_report(k, n=801)
    assert np.all(rep.sec[0] > 0)
    assert rep.negative[1] and rep.negative[2]
    # negative runs of sec2, sec3 start at the smooth end
    assert rep.negative[1][0][0] < 0.01 * rep.L


@pytest.mark.parametrize("k", KS)
def test_chain_rule_against_finite_differences(k):
    for i in (1, 2, 3):
        t, fd = hitchin.curvature_fd(k, i)
        ex = hitchin.hitchin_curvature(k, i, t)
        assert np.max(np.abs(fd - ex) / np.maximum(1, np.abs(ex))) < 1e-4


def test_curvature_rejects_endpoints():
    L = hitchin.arclength_param(3).L_total
    with pytest.raises(hitchin.CollapsePointError):
        hitchin.hitchin_curvature(3, 1, 0.0)
    with pytest.raises(hitchin.CollapsePointError):
        hitchin.hitchin_curvature(3, 1, L)


@pytest.mark.parametrize("k", KS)
def test_positive_fraction(k):
    assert hitchin.positive_fraction(k) >= 0.45


@pytest.mark.parametrize("k", KS)
def test_sphere_profile(k):
    sp = hitchin.sphere_profile(k)
    assert float(sp.h(0.0)[0]) == pytest.approx(0.0, abs=1e-15)
    assert float(sp.h(sp.t_end)[0]) == pytest.approx(0.0, abs=1e-15)
    assert sp.seam_value_defect < 1e-10 and sp.seam_slope_defect < 1e-8
    s0, s1 = hitchin.pole_slopes(k)
    assert s0 == pytest.approx(1.0, abs=1e-3)
    assert s1 == pytest.approx(-1.0 / k, abs=1e-3)


def test_round_sphere_embedding():
    emb = hitchin.embed_revolution(np.sin, np.cos, math.pi, n=401)
    assert np.max(np.abs(emb.z - (1 - np.cos(emb.t)))) < 1e-12
    assert np.max(np.abs(emb.rho - np.sin(emb.t))) < 1e-15


def test_embedding_obstruction():
    with pytest.raises(hitchin.EmbeddingObstruction) as ei:
        hitchin.embed_revolution(lambda t: 2 * np.sin(t), lambda t: 2 * np.cos(t), math.pi)
    lo, hi = ei.value.interval
    assert lo < hi


@pytest.mark.parametrize("k", KS)
def test_hitchin_profile_embeds_and_gauss_bonnet(k):
    sp = hitchin.sphere_profile(k)
    emb = hitchin.embed_revolution(sp.h, sp.dh, sp.t_end)
    assert np.all(np.diff(emb.z) > 0)
    kdA, bdry = hitchin.total_curvature(k)
    target = 2 * math.pi * (1 + 1 / k)
    assert abs(kdA - target) / target < 1e-2
    assert abs(bdry - target) / target < 1e-2
