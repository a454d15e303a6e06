"""Bath two-point correlation functions

    eta(t) = -int_0^inf J(w) sin(w t) dw,    nu(t) = int_0^inf f(w) cos(w t) dw.

Drude densities use the exponential / Matsubara closed forms; anything else is
integrated numerically (pointwise Fourier quadrature, or an FFT on a uniform
grid when many samples are needed).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate as _spi

from .errors import ConvergenceError, DomainError
from .numerics import DEFAULT, QuadConfig, integrate, sum_matsubara
from .spectral import Drude, SpectralDensity, _check_beta


class ResonanceWarning(UserWarning):
    """beta * Lambda hit a Matsubara frequency; a perturbed beta was used."""


@dataclass(frozen=True)
class CorrelationSample:
    t: float
    eta: float
    nu: float
    method: str  # "quadrature" | "closed_form"
    resonant: bool = False


RESONANCE_REL = 1e-9


def drude_resonance(beta: float, lambda_cut: float) -> int:
    """Index k >= 1 with beta * Lambda = 2 pi k (to ~1e-9 relative), else 0."""
    k = round(beta * lambda_cut / (2.0 * math.pi))
    if k >= 1 and abs(beta * lambda_cut - 2.0 * math.pi * k) <= 1e-9 * beta * lambda_cut:
        return k
    return 0


def resolve_beta(sd: SpectralDensity, beta: float):
    """Return (beta_used, resonant). Shifts beta off a Drude resonance."""
    beta = _check_beta(beta)
    if isinstance(sd, Drude) and drude_resonance(beta, sd.lambda_cut):
        warnings.warn(
            f"beta*Lambda = 2*pi*k at beta={beta}; using beta*(1+{RESONANCE_REL:g})",
            ResonanceWarning, stacklevel=3)
        return beta * (1.0 + RESONANCE_REL), True
    return beta, False


# -- pointwise ---------------------------------------------------------------


def _fourier(fn, t: float, weight: str, cfg: QuadConfig, cutoff: float) -> float:
    """int_0^inf fn(w) {sin|cos}(w t) dw.

    Up to a whole number of periods past the cutoff: a plain adaptive rule
    when that is only a few cycles, QUADPACK's QAWO otherwise. QAWF takes the
    tail. Neither oscillatory rule copes when one cycle (length 2 pi/t)
    swallows the whole density.
    """
    m = max(1, math.ceil(cfg.tail_cutoff_factor * cutoff * t / (2.0 * math.pi)))
    edge = 2.0 * math.pi * m / t  # sin(t*edge) = 0, cos(t*edge) = 1
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        if m <= 50:
            # few cycles: plain adaptive rule, with breakpoints where the density lives
            trig = np.sin if weight == "sin" else np.cos
            pts = [x for x in (cutoff, 5 * cutoff, 20 * cutoff) if x < edge] or None
            h = integrate(lambda w: fn(w) * trig(t * w), 0.0, edge, cfg, points=pts)
            head = (float(np.real(h.value)), h.error)
        else:
            head = _spi.quad(fn, 0.0, edge, weight=weight, wvar=t, epsabs=cfg.abs_tol,
                             epsrel=cfg.rel_tol, limit=cfg.max_subdivisions, full_output=1)
        eps = max(cfg.abs_tol, cfg.rel_tol * abs(head[0]))
        tail = _spi.quad(lambda x: fn(edge + x), 0.0, np.inf, weight=weight, wvar=t,
                         epsabs=eps, limlst=200, limit=cfg.max_subdivisions, full_output=1)
    value = head[0] + tail[0]
    err = head[1] + tail[1]
    if not math.isfinite(value) or err > 100 * max(eps, cfg.rel_tol * abs(value)):
        raise ConvergenceError(f"Fourier integral at t={t} did not converge",
                               estimate=value, error=err)
    return value


def eta(sd: SpectralDensity, t, cfg: QuadConfig = DEFAULT):
    """eta(t) for t >= 0 (scalar or array)."""
    ts = np.asarray(t, dtype=float)
    if np.any(ts < 0) or not np.all(np.isfinite(ts)):
        raise DomainError("eta(t) is defined here for finite t >= 0")
    if isinstance(sd, Drude):
        out = -0.5 * math.pi * sd.gamma * sd.lambda_cut**2 * np.exp(-ts * sd.lambda_cut)
        return out[()]
    out = np.empty(ts.shape)
    for idx, tv in np.ndenumerate(ts):
        out[idx] = 0.0 if tv == 0.0 else -_fourier(sd.j, tv, "sin", cfg, sd.scale)
    return out[()]


def _drude_nu(sd: Drude, t: float, beta: float, tol: float) -> float:
    """Matsubara series for nu(t), t > 0.

    The e^{-nu_n t} terms only start to decay for n > beta / (2 pi t), so
    their 1/nu_n part is summed in closed form, -log(1 - e^{-2 pi t / beta}),
    and the 1/n^3 remainder goes to the accelerated sum.
    """
    lam = sd.lambda_cut
    pref = math.pi * sd.gamma * lam**2 / beta
    lam2 = lam * lam

    def static(n):
        nu_n = 2.0 * math.pi * np.abs(n) / beta
        return 1.0 / (lam2 - nu_n**2)

    def rest(n):
        nu_n = 2.0 * math.pi * n / beta
        return lam2 * np.exp(-nu_n * t) / (nu_n * (lam2 - nu_n**2))

    s_static = float(np.real(sum_matsubara(static, tail_order=2, tol=tol)))
    s_rest = float(np.real(sum_matsubara(rest, tail_order=3, tol=tol, lower=1)))
    log_part = -math.log(-math.expm1(-2.0 * math.pi * t / beta))
    expo = -beta / (2.0 * math.pi) * log_part + s_rest  # sum_{n>=1} nu_n e^{-nu_n t}/(L^2-nu_n^2)
    return pref * (lam * math.exp(-lam * t) * s_static - 2.0 * expo)


def nu(sd: SpectralDensity, t, beta: float, cfg: QuadConfig = DEFAULT):
    """nu(t) = nu(-t) (scalar or array)."""
    ts = np.abs(np.asarray(t, dtype=float))
    if not np.all(np.isfinite(ts)):
        raise DomainError("nu(t) needs finite t")
    out = np.empty(ts.shape)
    if isinstance(sd, Drude):
        if np.any(ts == 0.0):
            raise DomainError("nu(0) diverges logarithmically for the Drude density")
        beta_used, _ = resolve_beta(sd, beta)
        for idx, tv in np.ndenumerate(ts):
            out[idx] = _drude_nu(sd, tv, beta_used, min(cfg.rel_tol, 1e-12))
        return out[()]
    beta = _check_beta(beta)
    f = lambda w: sd.f(w, beta)  # noqa: E731
    for idx, tv in np.ndenumerate(ts):
        if tv == 0.0:
            out[idx] = integrate(f, 0.0, np.inf, cfg).value
        else:
            out[idx] = _fourier(f, tv, "cos", cfg, sd.scale)
    return out[()]


def sample(sd: SpectralDensity, t: float, beta: float, cfg: QuadConfig = DEFAULT
           ) -> CorrelationSample:
    resonant = isinstance(sd, Drude) and bool(drude_resonance(beta, sd.lambda_cut))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ResonanceWarning)
        return CorrelationSample(
            float(t), float(eta(sd, t, cfg)), float(nu(sd, t, beta, cfg)),
            "closed_form" if isinstance(sd, Drude) else "quadrature", resonant)


# -- uniform grids -------------------------------------------------------------


def fft_grid(sd: SpectralDensity, beta: float, h: float, n: int):
    """eta and nu at s_k = k h, k < n, for densities with a Gaussian envelope.

    Both integrands are even in w once extended to the whole line, so the
    trapezoid rule on a uniform w grid is spectrally accurate; the w-sum is an
    FFT. The FFT period in s is made much longer than the sampled range so
    aliased images are negligible.
    """
    beta = _check_beta(beta)
    period = max(4.0 * n * h, 64.0 * beta + 2000.0 / sd.scale)
    size = 1 << int(math.ceil(math.log2(period / h)))
    dw = 2.0 * math.pi / (size * h)
    w = np.arange(size) * dw
    jw = np.asarray(sd.j(w))
    fw = np.asarray(sd.f(w, beta))
    ej = np.fft.ifft(jw) * size
    ef = np.fft.ifft(fw) * size
    eta_s = -dw * ej.imag[:n]
    nu_s = dw * (ef.real[:n] - 0.5 * fw[0])
    return np.arange(n) * h, eta_s, nu_s


def drude_matsubara_coefficients(sd: Drude, beta: float, n_max: int):
    """nu(s) = c_lam exp(-Lambda s) + sum_{n>=1} d_n exp(-nu_n s).

    Returns (c_lam, nu_n, d_n) with nu_n = 2 pi n / beta for n = 1..n_max.
    """
    lam = sd.lambda_cut
    c_lam = 0.5 * math.pi * sd.gamma * lam**2 / math.tan(0.5 * beta * lam)
    nn = np.arange(1, n_max + 1)
    nu_n = 2.0 * math.pi * nn / beta
    d_n = -2.0 * math.pi * sd.gamma * lam**2 * nu_n / (beta * (lam**2 - nu_n**2))
    return c_lam, nu_n, d_n
