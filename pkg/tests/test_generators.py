import math

import mpmath as mp
import numpy as np
import pytest

from sbm_tcl import (
    DomainError, DqdSinc, Drude, SystemParams, Tcl2Cache, ValidationError,
    drude_tcl4_closed_form, tcl0, tcl2_asymptotic, tcl2_at_time, tcl4_f30, tcl4_f33,
)

from mixed_order import extra_term


def test_tcl0_entries():
    m = tcl0(SystemParams(1.0, 0.3, 0.4, 1.0))
    assert m.entry(1, 2) == -1.0 and m.entry(2, 1) == 1.0
    assert np.count_nonzero(m.entries) == 2
    for x in (-0.7, 0.0, 0.9):
        assert np.all(m.entries @ np.array([1.0, 0.0, 0.0, x]) == 0.0)


def test_params_validation():
    with pytest.raises(ValidationError):
        SystemParams(0.0, 1.0, 0.0, 1.0)
    with pytest.raises(ValidationError):
        SystemParams(1.0, 0.0, 0.0, 1.0)
    with pytest.raises(ValidationError):
        SystemParams(1.0, 1.0, 0.0, -1.0)
    p = SystemParams.from_dqd(1.0, 0.5, 1.0)
    assert p.omega == pytest.approx(math.sqrt(2))
    assert p.a1 == pytest.approx(1 / math.sqrt(2)) and p.a3 == pytest.approx(1 / math.sqrt(2))


def test_f10_closed_value(drude):
    m = tcl2_asymptotic(SystemParams(1.0, 0.5, 0.5, 1.0), drude)
    mp.mp.dps = 30
    oracle = -2 * mp.pi * mp.mpf(1) / 4 * mp.mpf(25) / 26
    assert m.entry(1, 0) == pytest.approx(float(oracle), rel=1e-14)
    assert m.entry(1, 0) == pytest.approx(-1.51038, abs=1e-5)


def _pv_oracle(h, om):
    # PV int_0^inf h/(Om^2 - w^2) = int_0^inf (h(w) - h(Om))/(Om^2 - w^2), since PV int_0^inf 1/(Om^2-w^2) = 0
    mp.mp.dps = 25
    g = lambda w: (h(w) - h(om)) / (om**2 - w**2)  # noqa: E731
    return float(mp.quad(g, [0, om, 2 * om, 10 * om, mp.inf]))


def test_pv_entries_against_mpmath(drude):
    om, beta, a1, a3 = 1.0, 1.3, 0.6, 0.8
    p = SystemParams(om, a1, a3, beta)
    m = tcl2_asymptotic(p, drude)
    f = lambda w: 25 * w / (25 + w * w) / mp.tanh(beta * w / 2) if w != 0 else 2 / beta  # noqa: E731
    jw = lambda w: 25 / (25 + w * w)  # noqa: E731
    pv_f = _pv_oracle(f, om)
    assert m.entry(2, 1) == pytest.approx(4 * a1**2 * om * pv_f, rel=1e-9)
    assert m.entry(2, 3) == pytest.approx(-4 * a1 * a3 * om * pv_f, rel=1e-9)
    assert m.entry(2, 0) == pytest.approx(-4 * a1 * a3 * om**2 * _pv_oracle(jw, om), rel=1e-9)


def test_a1_zero_pattern(drude):
    m = tcl2_asymptotic(SystemParams(1.0, 0.0, 1.0, 1.0), drude)
    for idx in ((1, 0), (1, 3), (2, 0), (2, 1), (2, 3)):
        assert m.entry(*idx) == 0.0
    assert np.all(m.entries[3] == 0.0)
    assert m.entry(1, 1) != 0.0


def test_a3_zero_branch(drude):
    m = tcl2_asymptotic(SystemParams(1.0, 1.0, 0.0, 1.0), drude)
    assert np.all(m.entries[1] == 0.0)
    assert m.entry(3, 0) == pytest.approx(-2 * math.pi * float(drude.j(1.0)))
    assert m.entry(3, 3) == pytest.approx(-2 * math.pi * float(drude.f(1.0, 1.0)))
    assert m.entry(3, 1) == 0.0
    assert m.entry(2, 1) != 0.0


@pytest.mark.parametrize("a1,a3", [(0.5, 0.5), (0.3, -0.9), (1.2, 0.1)])
def test_row_structure(drude, dqd, a1, a3):
    for sd in (drude, dqd):
        p = SystemParams(1.1, a1, a3, 0.8)
        m = tcl2_asymptotic(p, sd)
        assert np.all(m.entries[0] == 0.0)
        assert m.entry(1, 2) == 0.0
        assert m.entry(3, 1) == pytest.approx(a1 / a3 * m.entry(1, 1), rel=1e-15)
        assert np.allclose(a3 * m.entries[3], a1 * m.entries[1], rtol=1e-10, atol=0)


def test_time_dependent_basics(drude):
    p = SystemParams(1.0, 0.5, 0.5, 1.0)
    assert np.all(tcl2_at_time(p, drude, 0.0).entries == 0.0)
    cache = Tcl2Cache.build(p, drude, 20.0)
    for t in (0.0, 0.013, 0.7, 3.3, 19.0):
        m = cache.at(t)
        assert m.entry(1, 2) == 0.0 and np.all(m.entries[0] == 0.0)
        assert np.allclose(p.a3 * m.entries[3], p.a1 * m.entries[1], rtol=1e-10, atol=1e-300)
    with pytest.raises(DomainError):
        cache.at(25.0)
    with pytest.raises(DomainError):
        tcl2_at_time(p, drude, -1.0)


def test_cache_matches_direct_quadrature(drude):
    p = SystemParams(1.0, 0.6, 0.8, 0.7)
    cache = Tcl2Cache.build(p, drude, 10.0)
    for t in (0.05, 0.8, 4.0):
        direct = tcl2_at_time(p, drude, t).entries
        assert np.allclose(cache.matrix(t), direct, rtol=1e-8, atol=1e-9)


def test_detuned_dot_cache_near_asymptotic(dqd, detuned):
    t = 50.0 / detuned.omega
    cache = Tcl2Cache.build(detuned, dqd, t)
    assert cache.method == "fft"
    diff = np.abs(cache.matrix(t) - tcl2_asymptotic(detuned, dqd).entries)
    assert diff.max() <= 1e-4


def test_monotone_approach_to_asymptotic():
    sd = Drude(1.0, 2.0)
    p = SystemParams(1.0, 0.5, 0.5, 1.0)
    period = 2 * math.pi / p.omega
    cache = Tcl2Cache.build(p, sd, 12 * period)
    target = tcl2_asymptotic(p, sd).entries
    dev = [np.abs(cache.matrix(k * period) - target).max() for k in range(2, 13)]
    assert all(b <= a for a, b in zip(dev, dev[1:]))


def test_tcl4_zero_for_a1_zero(drude):
    p = SystemParams(1.0, 0.0, 1.0, 1.0)
    assert tcl4_f30(p, drude) == 0.0 and tcl4_f33(p, drude) == 0.0


@pytest.mark.parametrize("beta,lam", [(1.0, 5.0), (2.0, 2.0), (0.5, 10.0)])
def test_tcl4_against_drude_closed_form(beta, lam):
    sd = Drude(1.0, lam)
    p = SystemParams(1.0, 1.0, 0.0, beta)
    f30, f33 = drude_tcl4_closed_form(1.0, lam, 1.0, beta)
    assert tcl4_f30(p, sd) == pytest.approx(f30, rel=1e-6)
    assert tcl4_f33(p, sd) == pytest.approx(f33, rel=1e-6)


def test_closed_form_gamma_squared_scaling():
    a = drude_tcl4_closed_form(1.0, 5.0, 1.0, 1.0)
    b = drude_tcl4_closed_form(0.1, 5.0, 1.0, 1.0)
    assert b[0] == pytest.approx(0.01 * a[0], rel=1e-13)
    assert b[1] == pytest.approx(0.01 * a[1], rel=1e-13)


def test_closed_form_mpmath():
    # same closed forms, independently in mpmath
    mp.mp.dps = 30
    g, L, om, b = map(mp.mpf, (1, 5, 1, 1))
    pi, I = mp.pi, mp.mpc(0, 1)
    x = b * om / (2 * pi)
    zp, zm = 1 + I * x, 1 - I * x
    f30 = 2 * g**2 * L**3 * om / (b * (L**2 + om**2) ** 3) * (
        4 * pi * b * L * (L**2 - 2 * om**2) * mp.digamma(b * L / (2 * pi) + 1) + 8 * pi**2 * om**2
        - b * L * (2 * pi * (L**2 - I * L * om - 2 * om**2) * mp.digamma(zm)
                   + 2 * pi * (L**2 + I * L * om - 2 * om**2) * mp.digamma(zp)
                   - I * b * om * (L**2 + om**2) * (mp.polygamma(1, zm) - mp.polygamma(1, zp))))
    assert abs(mp.im(f30)) < 1e-20
    assert drude_tcl4_closed_form(1, 5, 1, 1)[0] == pytest.approx(float(mp.re(f30)), rel=1e-12)


def test_tcl4_real_for_mixed_coupling(dqd, detuned):
    # the checked real part comes back; both entries are finite and nonzero
    assert math.isfinite(tcl4_f30(detuned, dqd)) and tcl4_f30(detuned, dqd) != 0.0
    assert math.isfinite(tcl4_f33(detuned, dqd)) and tcl4_f33(detuned, dqd) != 0.0


def test_mixed_order_extra_term_grows_linearly(dqd):
    om = math.sqrt(2.0)
    f_om = float(dqd.f(om, 1.0))
    period = math.pi / om
    for t in (200.0, 2000.0):
        slope = (extra_term(dqd, 1.0, om, t + period) - extra_term(dqd, 1.0, om, t)).real / period
        assert slope == pytest.approx(math.pi**2 * f_om**2 / 4, rel=1e-2)
