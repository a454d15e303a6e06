import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sbm_tcl import CustomDensity, DomainError, DqdSinc, Drude, ValidationError
from sbm_tcl.spectral import central_difference, eval_f, eval_f_prime, eval_j, from_config

LOG_GRID = np.geomspace(1e-3, 1e3, 121)


def test_drude_value_and_oddness(drude):
    assert eval_j(drude, 5.0) == pytest.approx(2.5, rel=1e-15)
    assert eval_j(drude, -2.0) == -eval_j(drude, 2.0)


def test_dqd_zero(dqd):
    assert eval_j(dqd, 0.0) == 0.0
    assert eval_f(dqd, 0.0, 1.0) == 0.0


@pytest.mark.parametrize("sd", [Drude(1, 5), Drude(0.3, 0.7), DqdSinc(1, 1, 8), DqdSinc(2, 0.5, 3)])
def test_odd_j_even_f_on_log_grid(sd):
    for w in LOG_GRID:
        j = sd.j(w)
        assert abs(sd.j(-w) + j) <= 1e-12 * (1 + abs(j))
        f = sd.f(w, 0.7)
        assert abs(sd.f(-w, 0.7) - f) <= 1e-10 * (1 + abs(f))


def test_continuity_at_zero(drude, dqd):
    for sd in (drude, dqd):
        vals = [abs(sd.j(2.0**-k)) for k in range(1, 60)]
        assert all(b <= a for a, b in zip(vals, vals[1:]))
        assert vals[-1] < 1e-15


def test_f_zero_limit_matches_series(drude):
    # (2/beta) * gamma L^2/(L^2 + w^2) * (beta w/2) coth(beta w/2) at w = 1e-6, in mpmath
    mp.mp.dps = 30
    w = mp.mpf("1e-6")
    oracle = w * 25 / (25 + w * w) / mp.tanh(w / 2)
    assert eval_f(drude, 0.0, 1.0) == pytest.approx(2.0, rel=1e-15)
    assert eval_f(drude, 1e-6, 1.0) == pytest.approx(float(oracle), rel=1e-12)


def test_f_matches_mpmath(dqd):
    mp.mp.dps = 30
    for w in (0.01, 0.7, math.sqrt(2), 5.0, 20.0):
        x = mp.mpf(w)
        j = x * (1 - mp.sin(x) / x) * mp.exp(-x**2 / 128)
        assert dqd.f(w, 1.3) == pytest.approx(float(j / mp.tanh(mp.mpf("1.3") * x / 2)), rel=1e-12)


@pytest.mark.parametrize("sd", [Drude(1, 5), DqdSinc(1, 1, 8)])
@pytest.mark.parametrize("w", [0.3, 1.0, math.sqrt(2), 4.0])
def test_f_prime_against_finite_difference(sd, w):
    fd = central_difference(lambda x: sd.f(x, 1.0), w)
    assert eval_f_prime(sd, w, 1.0) == pytest.approx(float(fd), rel=1e-6)


def test_j_prime_analytic_vs_numeric(dqd):
    w = math.sqrt(2)
    assert dqd.j_prime(w) == pytest.approx(float(central_difference(dqd.j, w)), rel=1e-6)


def test_constant_density_derivative():
    c = CustomDensity(lambda w: 1.0, slope_at_zero=0.0, j_prime=lambda w: 0.0)
    beta, w = 2.0, 0.8
    expected = -1.0 * (beta / 2) / math.sinh(beta * w / 2) ** 2
    assert eval_f_prime(c, w, beta) == pytest.approx(expected, rel=1e-12)


def test_custom_density_reflects_and_differentiates():
    calls = []

    def j(w):
        calls.append(w)
        return w * math.exp(-w)

    c = CustomDensity(j, slope_at_zero=1.0)
    assert c.j(-1.5) == pytest.approx(-1.5 * math.exp(-1.5))
    assert min(calls) >= 0.0
    assert c.j_prime(1.0) == pytest.approx(0.0, abs=1e-8)
    assert c.f_zero(2.0) == pytest.approx(1.0)


def test_errors():
    with pytest.raises(DomainError):
        eval_j(Drude(1, 5), float("nan"))
    with pytest.raises(DomainError):
        eval_f_prime(Drude(1, 5), 0.0, 1.0)
    with pytest.raises(ValidationError):
        Drude(-1, 5)
    with pytest.raises(ValidationError):
        eval_f(Drude(1, 5), 1.0, 0.0)
    with pytest.raises(ValidationError) as exc:
        from_config("lorentz", gamma=1)
    assert exc.value.field == "bath.model"
    with pytest.raises(ValidationError) as exc:
        from_config("drude", gamma=1)
    assert exc.value.field == "bath.lambda_cut"


@settings(max_examples=60, deadline=None)
@given(st.floats(1e-3, 50), st.floats(0.1, 10), st.floats(0.05, 20))
def test_f_even_property(w, lam, beta):
    sd = Drude(1.0, lam)
    assert sd.f(-w, beta) == pytest.approx(sd.f(w, beta), rel=1e-12)
    assert sd.f(w, beta) > 0
