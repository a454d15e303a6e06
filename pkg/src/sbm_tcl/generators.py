"""TCL generator matrices for the spin-boson Bloch vector.

Conventions: H_S = Omega sigma_3 / 2, system coupling operator
A = a3 sigma_3 - a1 sigma_1, Bloch vector v = (v0, v1, v2, v3) and
dv/dt = (F0 + lambda^2 F2(t) + lambda^4 F4(t) + ...) v.

Only what the steady state needs is implemented: F0, F2(t) and its t -> inf
limit, and the two asymptotic fourth-order entries F30, F33.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.interpolate import CubicSpline

from . import bathcorr
from .errors import DomainError, NumericalError, SbmError, ValidationError
from .numerics import DEFAULT, PoleSpec, QuadConfig, digamma, integrate, pv_integral_above, \
    sum_matsubara, trigamma
from .spectral import Drude, SpectralDensity, _check_beta, _positive


@dataclass(frozen=True)
class SystemParams:
    omega: float
    a1: float
    a3: float
    beta: float
    coupling_sq: float = 1.0

    def __post_init__(self):
        _positive("omega", self.omega)
        _check_beta(self.beta)
        for name in ("a1", "a3", "coupling_sq"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError("must be finite", name)
        if self.a1 == 0.0 and self.a3 == 0.0:
            raise ValidationError("(a1, a3) must not both vanish", "a1")
        if self.coupling_sq < 0.0:
            raise ValidationError("must be >= 0", "coupling_sq")

    @classmethod
    def from_dqd(cls, epsilon: float, t_c: float, beta: float, coupling_sq: float = 1.0):
        """Double quantum dot with detuning epsilon and tunnelling t_c."""
        omega = math.hypot(epsilon, 2.0 * t_c)
        if omega == 0.0:
            raise ValidationError("epsilon and t_c cannot both be zero", "system.epsilon")
        return cls(omega, epsilon / omega, 2.0 * t_c / omega, beta, coupling_sq)

    def with_coupling(self, coupling_sq: float) -> "SystemParams":
        return SystemParams(self.omega, self.a1, self.a3, self.beta, coupling_sq)


@dataclass
class GeneratorMatrix:
    order: int
    entries: np.ndarray
    time: Optional[float] = None  # None means the t -> inf limit

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=float).reshape(4, 4)

    def __getitem__(self, idx):
        return self.entries[idx]

    def entry(self, m: int, n: int) -> float:
        return float(self.entries[m, n])

    @property
    def asymptotic(self) -> bool:
        return self.time is None

    def as_dict(self) -> dict:
        return {"order": self.order, "time": self.time, "entries": self.entries.tolist()}


def tcl0(p: SystemParams) -> GeneratorMatrix:
    m = np.zeros((4, 4))
    m[1, 2] = -p.omega
    m[2, 1] = p.omega
    return GeneratorMatrix(0, m)


def _assemble_f2(p: SystemParams, c0, c1, c3, f20, f21, f22, f23, t=None) -> GeneratorMatrix:
    """Rows 1 and 3 share the vector (c0, c1, 0, c3): row1 = a3 * c, row3 = a1 * c."""
    m = np.zeros((4, 4))
    c = np.array([c0, c1, 0.0, c3])
    m[1] = p.a3 * c
    m[3] = p.a1 * c
    m[2] = [f20, f21, f22, f23]
    return GeneratorMatrix(2, m, t)


# -- asymptotic TCL2 -----------------------------------------------------------


def _pv_over_gap(h, omega: float, cfg: QuadConfig, name: str) -> float:
    """PV int_0^inf h(w) / (Omega^2 - w^2) dw."""
    res = -float(h(omega)) / (2.0 * omega)
    fn = lambda w: h(w) / (omega * omega - w * w)  # noqa: E731
    try:
        out = pv_integral_above(fn, 0.0, math.inf, [PoleSpec(omega, "simple", residue=res)], cfg)
    except SbmError as exc:
        exc.args = (f"{name}: {exc.args[0]}",) + exc.args[1:]
        raise
    return float(np.real(out.principal_value))


def tcl2_asymptotic(p: SystemParams, sd: SpectralDensity, cfg: QuadConfig = DEFAULT
                    ) -> GeneratorMatrix:
    om, a1, a3, b = p.omega, p.a1, p.a3, p.beta
    j_om = float(sd.j(om))
    f_om = float(sd.f(om, b))
    f_0 = sd.f_zero(b)
    tw = 2.0 * math.pi
    c0 = -tw * a1 * j_om
    c1 = -tw * a3 * f_0
    c3 = -tw * a1 * f_om
    f22 = -tw * a1 * a1 * f_om - tw * a3 * a3 * f_0
    f20 = f21 = f23 = 0.0
    if a1 != 0.0:
        pv_f = _pv_over_gap(lambda w: sd.f(w, b), om, cfg, "F21")
        f21 = 4.0 * a1 * a1 * om * pv_f
        if a3 != 0.0:
            f23 = -4.0 * a1 * a3 * om * pv_f
            f20 = -4.0 * a1 * a3 * om * om * _pv_over_gap(sd.j_over_omega, om, cfg, "F20")
    return _assemble_f2(p, c0, c1, c3, f20, f21, f22, f23)


# -- finite-time TCL2 ------------------------------------------------------------

_KERNELS = ("e_sin", "e_cos", "e", "n", "n_cos", "n_sin")


def _from_integrals(p: SystemParams, I: dict, t) -> GeneratorMatrix:
    a1, a3 = p.a1, p.a3
    return _assemble_f2(
        p,
        4.0 * a1 * I["e_sin"],
        -4.0 * a3 * I["n"],
        -4.0 * a1 * I["n_cos"],
        -4.0 * a1 * a3 * (I["e_cos"] - I["e"]),
        4.0 * a1 * a1 * I["n_sin"],
        -4.0 * (a1 * a1 * I["n_cos"] + a3 * a3 * I["n"]),
        -4.0 * a1 * a3 * I["n_sin"],
        t,
    )


def tcl2_at_time(p: SystemParams, sd: SpectralDensity, t: float, cache=None,
                 cfg: QuadConfig = DEFAULT) -> GeneratorMatrix:
    """F2(t). With a :class:`Tcl2Cache` the value is interpolated; otherwise
    the six time integrals are done directly by adaptive quadrature."""
    t = float(t)
    if not math.isfinite(t) or t < 0.0:
        raise DomainError("t must be finite and >= 0")
    if cache is not None:
        return cache.at(t)
    if t == 0.0:
        return GeneratorMatrix(2, np.zeros((4, 4)), 0.0)
    om, b = p.omega, p.beta
    beta_used, _ = bathcorr.resolve_beta(sd, b)
    eta = lambda s: bathcorr.eta(sd, s, cfg)  # noqa: E731
    nu = lambda s: bathcorr.nu(sd, s, beta_used, cfg)  # noqa: E731
    kern = {
        "e_sin": lambda s: eta(s) * math.sin(om * s),
        "e_cos": lambda s: eta(s) * math.cos(om * s),
        "e": eta,
        "n": nu,
        "n_cos": lambda s: nu(s) * math.cos(om * s),
        "n_sin": lambda s: nu(s) * math.sin(om * s),
    }
    tau = 1.0 / min(sd.scale, 2.0 * math.pi / b)
    pts = [x for x in (tau, 5 * tau, 20 * tau, 60 * tau) if x < t]
    I = {}
    for k, fn in kern.items():
        I[k] = _piecewise(fn, [0.0] + pts + [t], cfg)
    return _from_integrals(p, I, t)


def _piecewise(fn, edges, cfg):
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        total += integrate(fn, lo, hi, cfg).value.real
    return total


@dataclass
class Tcl2Cache:
    """F2(t) tabulated on a uniform grid and interpolated with cubic splines."""

    params: SystemParams
    times: np.ndarray
    values: np.ndarray  # (n, 4, 4)
    method: str
    resonant: bool = False
    _spline: CubicSpline = field(init=False, repr=False)

    def __post_init__(self):
        self._spline = CubicSpline(self.times, self.values, axis=0)

    @property
    def horizon(self) -> float:
        return float(self.times[-1])

    @property
    def step(self) -> float:
        return float(self.times[1] - self.times[0])

    def at(self, t: float) -> GeneratorMatrix:
        return GeneratorMatrix(2, self.matrix(t), float(t))

    def matrix(self, t: float) -> np.ndarray:
        if t < 0.0 or t > self.horizon * (1.0 + 1e-12):
            raise DomainError(f"t={t} outside the cached range [0, {self.horizon}]")
        return self._spline(t)

    @classmethod
    def build(cls, p: SystemParams, sd: SpectralDensity, horizon: float,
              step: Optional[float] = None, cfg: QuadConfig = DEFAULT) -> "Tcl2Cache":
        horizon = _positive("horizon", horizon)
        h_max = min(0.05 / p.omega, 0.05 / sd.scale)
        h = h_max if step is None else min(float(step), h_max)
        n = int(math.ceil(horizon / h)) + 1
        times = np.arange(n) * h
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", bathcorr.ResonanceWarning)
            beta_used, resonant = bathcorr.resolve_beta(sd, p.beta)
        if isinstance(sd, Drude):
            I = _drude_integrals(sd, p.omega, beta_used, times)
            method = "closed_form"
        elif sd.envelope == "gaussian":
            I = _grid_integrals(sd, p.omega, beta_used, h, n)
            method = "fft"
        else:
            raise ValidationError(
                "time-dependent generator needs a Drude or Gaussian-envelope density",
                "bath.model")
        vals = np.stack([_from_integrals(p, {k: I[k][i] for k in _KERNELS}, None).entries
                         for i in range(n)])
        return cls(p, times, vals, method, resonant)


def _grid_integrals(sd, om, beta, h, n):
    s, eta_s, nu_s = bathcorr.fft_grid(sd, beta, h, n)
    c, sn = np.cos(om * s), np.sin(om * s)
    kern = {"e_sin": eta_s * sn, "e_cos": eta_s * c, "e": eta_s,
            "n": nu_s, "n_cos": nu_s * c, "n_sin": nu_s * sn}
    return {k: cumulative_simpson(v, dx=h, initial=0.0) for k, v in kern.items()}


def _drude_integrals(sd: Drude, om: float, beta: float, t: np.ndarray):
    """Exact time integrals of the Drude correlation functions.

    eta(s) = -(pi g L^2 / 2) e^{-L s};  nu(s) = c_L e^{-L s} + sum_n d_n e^{-nu_n s}.
    """
    lam, g = sd.lambda_cut, sd.gamma
    z_lam = lam - 1j * om

    def osc(z):  # int_0^t e^{-z s} ds with e^{i Om s} folded into z
        return -np.expm1(-z * t) / z

    e_amp = -0.5 * math.pi * g * lam**2
    e_osc = e_amp * osc(z_lam)
    c_lam, _, _ = bathcorr.drude_matsubara_coefficients(sd, beta, 1)

    def d(nn):
        nu_n = 2.0 * math.pi * nn / beta
        return -2.0 * math.pi * g * lam**2 * nu_n / (beta * (lam**2 - nu_n**2)), nu_n

    def s_plain(nn):
        dn, nu_n = d(nn)
        return dn / nu_n

    def s_osc(nn):
        dn, nu_n = d(nn)
        return dn / (nu_n - 1j * om)

    s0 = float(np.real(sum_matsubara(s_plain, tol=1e-14, lower=1)))
    s1 = complex(sum_matsubara(s_osc, tol=1e-14, lower=1))

    # subtract the transient parts; terms with nu_n t > 40 are below 1e-17
    plain = np.zeros_like(t)
    oscl = np.zeros(t.shape, dtype=complex)
    h = t[1] - t[0] if len(t) > 1 else 1.0
    n_max = int(math.ceil(40.0 * beta / (2.0 * math.pi * h))) + 1
    for nn in range(1, n_max + 1):
        dn, nu_n = d(nn)
        k = int(np.searchsorted(t, 40.0 / nu_n, side="right"))
        if k == 0:
            break
        tk = t[:k]
        plain[:k] += dn * np.exp(-nu_n * tk) / nu_n
        oscl[:k] += dn * np.exp(-(nu_n - 1j * om) * tk) / (nu_n - 1j * om)
    n_int = c_lam * (-np.expm1(-lam * t)) / lam + s0 - plain
    n_osc = c_lam * osc(z_lam) + s1 - oscl
    n_int[t == 0.0] = 0.0
    n_osc[t == 0.0] = 0.0
    return {
        "e_sin": e_osc.imag, "e_cos": e_osc.real, "e": e_amp * (-np.expm1(-lam * t)) / lam,
        "n": n_int, "n_cos": n_osc.real, "n_sin": n_osc.imag,
    }


# -- asymptotic TCL4 -------------------------------------------------------------


class _Tcl4Terms:
    """Frequency integrands of the two fourth-order entries that enter v3.

    Both are even in w with (at most) double poles at 0 and +-Omega; the
    integral runs along the real line passing above them.
    """

    def __init__(self, p: SystemParams, sd: SpectralDensity):
        self.p, self.sd = p, sd
        b, om = p.beta, p.omega
        self.f_om = float(sd.f(om, b))
        self.f_0 = sd.f_zero(b)
        self.fp_om = float(sd.f_prime(om, b))
        self.j_om = float(sd.j(om))
        self.jp_om = float(sd.j_prime(om))

    def _common(self, w):
        w = np.asarray(w, dtype=float)
        b, om = self.p.beta, self.p.omega
        return w, om, self.sd.f(w, b), b

    def f33(self, w):
        w, om, fw, b = self._common(w)
        a1, a3 = self.p.a1, self.p.a3
        sd = self.sd
        gap = w * w - om * om
        out = 4.0 * math.pi * a1**4 * om * fw * (gap * self.fp_om + 2.0 * om * self.f_om) / gap**2
        if a3 != 0.0:
            num = fw * (4.0 * self.f_om * gap**2
                        - 2.0 * w * om * (w + om) ** 2 * sd.f(w - om, b)
                        + w * (w - om) * (2.0 * om * (w - om) * sd.f(w + om, b)
                                          - 4.0 * self.f_0 * w * (w + om))) \
                - 2.0 * om * sd.j(w) * gap * ((w + om) * sd.j(w - om) + (om - w) * sd.j(w + om))
            out = out + 2.0 * math.pi * a1**2 * a3**2 * num / (w * gap) ** 2
        return 0.5 * out

    def f30(self, w):
        w, om, fw, b = self._common(w)
        a1, a3 = self.p.a1, self.p.a3
        sd = self.sd
        gap = w * w - om * om
        jw = sd.j(w)
        out = 4.0 * math.pi * a1**4 / gap**2 * (
            fw * (om * gap * self.jp_om + self.j_om * (w * w + 3.0 * om * om))
            - 2.0 * w * om * self.f_om * jw)
        if a3 != 0.0:
            num = 2.0 * self.f_0 * w * om * jw * (om * om - w * w) + fw * (
                (w - om) ** 2 * (2.0 * self.j_om * (w + om) ** 2 - om * om * sd.j(w + om))
                + om * om * (w + om) ** 2 * sd.j(w - om))
            out = out + 4.0 * math.pi * a1**2 * a3**2 * num / (w * gap) ** 2
        return 0.5 * out


def _tcl4(p, sd, which, cfg):
    if p.a1 == 0.0:
        return 0.0
    terms = _Tcl4Terms(p, sd)
    fn = getattr(terms, which)
    om = p.omega
    poles = [PoleSpec(-om), PoleSpec(0.0), PoleSpec(om)]
    res = pv_integral_above(fn, -math.inf, math.inf, poles, cfg)
    try:
        return res.real_checked(1e-8)
    except NumericalError as exc:
        exc.args = (f"F{which[1:]}(4): {exc.args[0]}",) + exc.args[1:]
        raise


def tcl4_f33(p: SystemParams, sd: SpectralDensity, cfg: QuadConfig = DEFAULT) -> float:
    return _tcl4(p, sd, "f33", cfg)


def tcl4_f30(p: SystemParams, sd: SpectralDensity, cfg: QuadConfig = DEFAULT) -> float:
    return _tcl4(p, sd, "f30", cfg)


def drude_tcl4_closed_form(gamma: float, lambda_cut: float, omega: float, beta: float):
    """(F30, F33) at a1 = 1, a3 = 0 for the Drude density, in digamma/trigamma form."""
    g = _positive("gamma", gamma)
    L = _positive("lambda_cut", lambda_cut)
    om = _positive("omega", omega)
    b = _check_beta(beta)
    pi = math.pi
    x = b * om / (2.0 * pi)
    zp, zm = 1.0 + 1j * x, 1.0 - 1j * x
    f30 = 2 * g**2 * L**3 * om / (b * (L**2 + om**2) ** 3) * (
        4 * pi * b * L * (L**2 - 2 * om**2) * digamma(b * L / (2 * pi) + 1) + 8 * pi**2 * om**2
        - b * L * (2 * pi * (L**2 - 1j * L * om - 2 * om**2) * digamma(zm)
                   + 2 * pi * (L**2 + 1j * L * om - 2 * om**2) * digamma(zp)
                   - 1j * b * om * (L**2 + om**2) * (trigamma(zm) - trigamma(zp))))
    um, up = -1j * x, 1j * x
    psm, psp, trm, trp = digamma(um), digamma(up), trigamma(um), trigamma(up)
    csch2 = 1.0 / math.sinh(0.5 * b * om) ** 2
    q = L**2 - 3 * om**2
    f33 = g**2 * L**3 * om / (pi * b**2 * (L**2 + om**2) ** 3) * (
        -2j * pi * b**2 * L * q * psm**2 + 2j * pi * b**2 * L * q * psp**2 + 32 * pi**3 * om
        + 2 * b * psm * (2j * pi**2 * (L + 1j * om) * (L + 3j * om)
                         - b**2 * L * om * (L**2 + om**2) * trm)
        - 2j * pi * b**2 * (L - 1j * om) * (L + 1j * om) * ((L + 1j * om) * trm - (L - 1j * om) * trp)
        + 2 * b * psp * (-L * b**2 * om * (L**2 + om**2) * trp
                         - 2j * pi**2 * (L - 1j * om) * (L - 3j * om))
        - 2 * pi**2 * b**2 * L * digamma(b * L / (2 * pi)) * csch2
        * (b * om * (L**2 + om**2) - q * math.sinh(b * om)))
    out = []
    for name, v in (("F30", f30), ("F33", f33)):
        v = complex(v)
        if abs(v.imag) > 1e-9 * max(abs(v.real), 1e-300):
            raise NumericalError(f"{name} closed form is not real: {v}", {"value": v})
        out.append(v.real)
    return tuple(out)
