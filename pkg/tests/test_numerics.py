import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sbm_tcl.errors import ConvergenceError, DomainError, NumericalError
from sbm_tcl.numerics import (
    PoleSpec, QuadConfig, digamma, integrate, integrate_patched, pv_integral_above,
    sum_matsubara, trigamma,
)


def test_integrate_exponential():
    val, err = integrate(lambda w: math.exp(-w), 0.0, math.inf)
    assert val == pytest.approx(1.0, rel=1e-12)
    assert err <= max(1e-12, 1e-9)


def test_integrate_drude_weighted():
    fn = lambda w: 25 * w / (25 + w * w) * math.exp(-w)  # noqa: E731
    mp.mp.dps = 25
    oracle = mp.quad(lambda w: 25 * w / (25 + w * w) * mp.exp(-w), [0, 5, mp.inf])
    assert integrate(fn, 0.0, math.inf).value == pytest.approx(float(oracle), rel=1e-8)


def test_integrate_odd_and_complex():
    assert integrate(lambda w: w, -1.0, 1.0).value == pytest.approx(0.0, abs=1e-15)
    val = integrate(lambda w: np.exp(1j * w), 0.0, math.pi).value
    assert val == pytest.approx(2j, abs=1e-12)


def test_integrate_failure_carries_estimate():
    with pytest.raises(ConvergenceError) as exc:
        integrate(lambda w: 1.0 / w, 0.0, 1.0, QuadConfig(max_subdivisions=5))
    assert exc.value.estimate is not None


def test_pv_symmetric_simple_pole():
    res = pv_integral_above(lambda w: 1.0 / w, -1.0, 1.0, [PoleSpec(0.0)])
    assert abs(res.value - (-1j * math.pi)) <= 1e-9
    assert res.poles[0].kind == "simple"
    assert res.poles[0].residue == pytest.approx(1.0, rel=1e-9)


def test_pv_half_line():
    res = pv_integral_above(lambda w: 1.0 / (w * w - 1.0), 0.0, math.inf, [PoleSpec(1.0)])
    assert abs(res.value - (-0.5j * math.pi)) <= 1e-9


def test_pv_double_pole_finite_part():
    # FP int_{-1}^{1} dw / w^2 = -2; the contour picks up no residue
    res = pv_integral_above(lambda w: 1.0 / w**2, -1.0, 1.0, [PoleSpec(0.0)])
    assert res.value == pytest.approx(-2.0, abs=1e-9)
    assert res.poles[0].kind == "double"


def test_pv_removable_matches_patched():
    om = 1.3
    g = lambda w: (math.sin(w - om) / (w - om) if w != om else 1.0) * math.exp(-w * w)  # noqa: E731
    fn = lambda w: math.sin(w - om) * math.exp(-w * w) / (w - om)  # noqa: E731
    a = pv_integral_above(fn, -10, 10, [PoleSpec(om, "removable")]).value
    b = integrate_patched(fn, -10, 10, [om], 1e-3 * om).value
    c = integrate(g, -10, 10, points=[om]).value
    assert a.imag == 0.0
    assert a.real == pytest.approx(c, rel=1e-10)
    assert b == pytest.approx(c, rel=1e-10)


def test_pv_rejects_boundary_and_misdeclared_poles():
    with pytest.raises(DomainError):
        pv_integral_above(lambda w: 1 / w, 0.0, 1.0, [PoleSpec(0.0)])
    with pytest.raises(NumericalError):
        pv_integral_above(lambda w: 1 / w, -1.0, 1.0, [PoleSpec(0.0, "removable")])


def test_pv_real_part_of_even_integrand():
    # even about 0: real part equals the regular integral of the smooth remainder
    fn = lambda w: (np.cos(w) - 1.0) / w**2 + 1.0 / (1.0 + w * w)  # noqa: E731
    res = pv_integral_above(fn, -30.0, 30.0, [PoleSpec(0.0)])
    smooth = integrate(lambda w: (-0.5 if w == 0 else (math.cos(w) - 1) / w**2) + 1 / (1 + w * w),
                       -30.0, 30.0, points=[0.0]).value
    assert res.value.real == pytest.approx(smooth, rel=1e-9)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.2, 3.0), st.floats(-2.0, 2.0), st.floats(-2.0, 2.0))
def test_pv_linearity(p, ca, cb):
    f = lambda w: np.exp(-w * w) / (w - p)  # noqa: E731
    g = lambda w: np.cos(w) / ((w - p) * (w + 5))  # noqa: E731
    poles = [PoleSpec(p)]
    lhs = pv_integral_above(lambda w: ca * f(w) + cb * g(w), -4.0, 4.0, poles)
    rf = pv_integral_above(f, -4.0, 4.0, poles)
    rg = pv_integral_above(g, -4.0, 4.0, poles)
    assert abs(lhs.value - (ca * rf.value + cb * rg.value)) <= 1e-9 + lhs.error + rf.error + rg.error


def test_digamma_trigamma_reference():
    assert abs(digamma(1.0) - (-0.5772156649015329)) <= 1e-12
    assert abs(trigamma(1.0) - math.pi**2 / 6) <= 1e-12


@pytest.mark.parametrize("z", [0.3 + 0j, 2.5 - 1.2j, -3.7 + 0.4j, 1 + 6j, 12.0 + 0j, -0.5 + 0j, 1e-3 + 1e-3j])
def test_digamma_trigamma_mpmath(z):
    mp.mp.dps = 30
    assert abs(digamma(z) - complex(mp.digamma(z))) <= 1e-12 * max(1, abs(complex(mp.digamma(z))))
    t = complex(mp.polygamma(1, z))
    assert abs(trigamma(z) - t) <= 1e-12 * max(1, abs(t))


@settings(max_examples=60, deadline=None)
@given(st.complex_numbers(min_magnitude=0.05, max_magnitude=30, allow_nan=False, allow_infinity=False))
def test_digamma_recurrence(z):
    if abs(z.imag) < 1e-3 and z.real < 0.5 and abs(z.real - round(z.real)) < 1e-3:
        return
    assert abs(digamma(z + 1) - digamma(z) - 1 / z) <= 1e-11 * (1 + abs(digamma(z)) + abs(1 / z))


def test_digamma_poles():
    for z in (0, -1, -7):
        with pytest.raises(DomainError):
            digamma(z)
        with pytest.raises(DomainError):
            trigamma(z)


def test_sum_matsubara_basel():
    s = sum_matsubara(lambda n: 1.0 / n.astype(float) ** 2, lower=1)
    assert s == pytest.approx(math.pi**2 / 6, abs=1e-10)


def test_sum_matsubara_zero_and_two_sided():
    assert sum_matsubara(lambda n: np.zeros(len(n))) == 0.0
    # sum_n 1/(n^2 + 1) over all integers = pi coth(pi)
    s = sum_matsubara(lambda n: 1.0 / (n.astype(float) ** 2 + 1.0))
    assert s == pytest.approx(math.pi / math.tanh(math.pi), rel=1e-11)


def test_sum_matsubara_divergent_tail():
    with pytest.raises(ConvergenceError):
        sum_matsubara(lambda n: np.ones(len(n)), lower=1)


def test_pole_integral_repeatable():
    fn = lambda w: np.exp(-w * w) / (w - 0.5) ** 2  # noqa: E731
    runs = {pv_integral_above(fn, -8.0, 8.0, [PoleSpec(0.5)]).value for _ in range(5)}
    assert len(runs) == 1
