"""Steady state of the spin-boson model to second order in the coupling.

Each correction is computed twice: from the TCL generators (the fixed point
of the perturbative master equation) and from closed integrals of the
mean-force Gibbs state. The two routes share nothing beyond the spectral
density, so their agreement is a genuine check.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .errors import NumericalError, ValidationError
from .generators import SystemParams, tcl0, tcl2_asymptotic, tcl4_f30, tcl4_f33
from .numerics import DEFAULT, QuadConfig, integrate_patched
from .spectral import SpectralDensity, _check_beta, _positive, _x_coth


@dataclass(frozen=True)
class BlochVector:
    v0: float = 1.0
    v1: float = 0.0
    v2: float = 0.0
    v3: float = 0.0

    @classmethod
    def from_array(cls, arr) -> "BlochVector":
        a = np.asarray(arr, dtype=float).ravel()
        if a.size != 4:
            raise ValidationError(f"needs 4 components (v0, v1, v2, v3), got {a.size}", "v_init")
        return cls(*map(float, a))

    def as_array(self) -> np.ndarray:
        return np.array([self.v0, self.v1, self.v2, self.v3])

    def norm(self) -> float:
        return math.sqrt(self.v1**2 + self.v2**2 + self.v3**2)

    def is_physical(self, tol: float = 1e-12) -> bool:
        return abs(self.v0 - 1.0) <= tol and self.norm() ** 2 <= 1.0 + tol

    def validate(self, name: str = "v_init") -> "BlochVector":
        vals = self.as_array()
        if not np.all(np.isfinite(vals)):
            raise ValidationError("components must be finite", name)
        if not self.is_physical():
            raise ValidationError(
                f"not a physical state (v0 must be 1, |v| <= 1; got {tuple(vals)})", name)
        return self

    def __add__(self, other):
        return BlochVector.from_array(self.as_array() + np.asarray(other.as_array()))

    def scaled_increment(self, inc: "BlochVector", factor: float) -> "BlochVector":
        """self + factor * (v1, v2, v3) of ``inc``; v0 stays put."""
        a = self.as_array()
        a[1:] += factor * inc.as_array()[1:]
        return BlochVector.from_array(a)


def gibbs_state(beta: float, omega: float) -> BlochVector:
    beta = _check_beta(beta)
    omega = _positive("omega", omega)
    return BlochVector(1.0, 0.0, 0.0, -math.tanh(0.5 * beta * omega))


def v2_correction() -> float:
    # <sigma_2> vanishes in the steady state to all orders
    return 0.0


# -- TCL route ---------------------------------------------------------------


def coherence_correction_tcl(p: SystemParams, sd: SpectralDensity, cfg: QuadConfig = DEFAULT,
                             f2=None) -> float:
    if p.a1 == 0.0 or p.a3 == 0.0:
        return 0.0
    f2 = tcl2_asymptotic(p, sd, cfg) if f2 is None else f2
    v30 = gibbs_state(p.beta, p.omega).v3
    return -(f2.entry(2, 0) + v30 * f2.entry(2, 3)) / p.omega


def population_correction_tcl(p: SystemParams, sd: SpectralDensity, cfg: QuadConfig = DEFAULT,
                              f2=None, f30=None, f33=None, v1=None) -> float:
    if p.a1 == 0.0:
        return 0.0
    f2 = tcl2_asymptotic(p, sd, cfg) if f2 is None else f2
    f33_2 = f2.entry(3, 3)
    if abs(f33_2) < 1e-12 * sd.scale:
        raise NumericalError("second-order F33 vanishes; the population fixed point is singular",
                             {"F33(2)": f33_2})
    f30 = tcl4_f30(p, sd, cfg) if f30 is None else f30
    f33 = tcl4_f33(p, sd, cfg) if f33 is None else f33
    v1 = coherence_correction_tcl(p, sd, cfg, f2) if v1 is None else v1
    v30 = gibbs_state(p.beta, p.omega).v3
    return -(f30 + v30 * f33 + v1 * f2.entry(3, 1)) / f33_2


# -- mean-force Gibbs route ------------------------------------------------------


def _patch_width(p):
    return 1e-3 * p.omega


def coherence_correction_mfgs(p: SystemParams, sd: SpectralDensity,
                              cfg: QuadConfig = DEFAULT) -> float:
    if p.a1 == 0.0 or p.a3 == 0.0:
        return 0.0
    om, b = p.omega, p.beta
    th = math.tanh(0.5 * b * om)

    def g(w):
        # J(w) (w coth(b w/2) tanh(b Om/2) - Om) / (w^3 - w Om^2)
        return sd.j_over_omega(w) * (_x_coth(w, b) * th - om) / (w * w - om * om)

    val = integrate_patched(g, 0.0, math.inf, [om], _patch_width(p), cfg).value
    return 4.0 * p.a1 * p.a3 * float(np.real(val))


def population_correction_mfgs(p: SystemParams, sd: SpectralDensity,
                               cfg: QuadConfig = DEFAULT) -> float:
    if p.a1 == 0.0:
        return 0.0
    om, b = p.omega, p.beta
    th = math.tanh(0.5 * b * om)
    coth_om = 1.0 / th
    # b Om csch(b Om), written to stay finite for large b Om
    x = b * om
    bcsch = 2.0 * x * math.exp(-x) / -math.expm1(-2.0 * x)

    def g(w):
        gap = w * w - om * om
        return (2.0 * w * om * coth_om * sd.j(w)
                - sd.f(w, b) * (bcsch * gap + w * w + om * om)) / gap**2

    val = integrate_patched(g, 0.0, math.inf, [om], _patch_width(p), cfg).value
    return -2.0 * p.a1**2 * th * float(np.real(val))


# -- report ---------------------------------------------------------------------


@dataclass
class SteadyStateReport:
    params: dict
    bath: dict
    gibbs: BlochVector
    tcl_correction: BlochVector  # v0 slot unused (0)
    mfgs_correction: BlochVector
    assembled: BlochVector
    assembled_mfgs: BlochVector
    route_discrepancy: dict
    tcl2_only_ss: BlochVector
    raw: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = asdict(self)
        return out


def tcl2_fixed_point(p: SystemParams, sd: SpectralDensity, cfg: QuadConfig = DEFAULT,
                     f2=None) -> BlochVector:
    """Null vector of F0 + lambda^2 F2 (t -> inf), normalised to v0 = 1."""
    f2 = tcl2_asymptotic(p, sd, cfg) if f2 is None else f2
    m = tcl0(p).entries + p.coupling_sq * f2.entries
    sub = m[1:, 1:]
    if abs(np.linalg.det(sub)) < 1e-14 * max(1.0, np.abs(sub).max()) ** 3:
        raise NumericalError("TCL2 generator is singular; no unique fixed point",
                             {"matrix": m.tolist()})
    x = np.linalg.solve(sub, -m[1:, 0])
    return BlochVector(1.0, *map(float, x))


def assemble_report(p: SystemParams, sd: SpectralDensity, cfg: QuadConfig = DEFAULT
                    ) -> SteadyStateReport:
    gibbs = gibbs_state(p.beta, p.omega)
    f2 = tcl2_asymptotic(p, sd, cfg)
    f30 = tcl4_f30(p, sd, cfg)
    f33 = tcl4_f33(p, sd, cfg)
    v1_t = coherence_correction_tcl(p, sd, cfg, f2)
    v3_t = population_correction_tcl(p, sd, cfg, f2, f30, f33, v1_t)
    v1_m = coherence_correction_mfgs(p, sd, cfg)
    v3_m = population_correction_mfgs(p, sd, cfg)
    tcl = BlochVector(0.0, v1_t, v2_correction(), v3_t)
    mfgs = BlochVector(0.0, v1_m, v2_correction(), v3_m)
    if p.coupling_sq == 0.0:
        fixed = gibbs
    else:
        fixed = tcl2_fixed_point(p, sd, cfg, f2)
    return SteadyStateReport(
        params=asdict(p),
        bath=sd.describe(),
        gibbs=gibbs,
        tcl_correction=tcl,
        mfgs_correction=mfgs,
        assembled=gibbs.scaled_increment(tcl, p.coupling_sq),
        assembled_mfgs=gibbs.scaled_increment(mfgs, p.coupling_sq),
        route_discrepancy={"v1": abs(v1_t - v1_m), "v2": 0.0, "v3": abs(v3_t - v3_m)},
        tcl2_only_ss=fixed,
        raw={"F0": tcl0(p).entries.tolist(), "F2": f2.entries.tolist(),
             "F30_4": f30, "F33_4": f33},
    )


def route_gap(report: SteadyStateReport) -> Optional[float]:
    """tcl2_only_ss.v3 - assembled.v3: the population error of TCL2 alone."""
    return report.tcl2_only_ss.v3 - report.assembled.v3
