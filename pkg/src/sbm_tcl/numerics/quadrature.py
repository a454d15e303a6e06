"""Adaptive quadrature, principal-value / finite-part integrals along a contour
indented above real poles, and integration across removable 0/0 points.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate as _spi
from scipy.interpolate import BarycentricInterpolator

from ..errors import ConvergenceError, DomainError, NumericalError, ValidationError

POLE_KINDS = ("auto", "removable", "simple", "double")


@dataclass(frozen=True)
class QuadConfig:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_subdivisions: int = 400
    tail_cutoff_factor: float = 20.0

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValidationError("tolerances must be positive", "numerics")
        if self.max_subdivisions < 1:
            raise ValidationError("max_subdivisions must be >= 1", "numerics")

    def scaled(self, factor: float) -> "QuadConfig":
        return QuadConfig(self.rel_tol * factor, self.abs_tol * factor,
                          self.max_subdivisions, self.tail_cutoff_factor)


DEFAULT = QuadConfig()


@dataclass
class QuadResult:
    value: complex
    error: float

    def __iter__(self):
        yield self.value
        yield self.error


@dataclass(frozen=True)
class PoleSpec:
    """A real point where the integrand may be singular.

    ``kind='auto'`` classifies the point from its Laurent coefficients.
    ``residue`` / ``leading`` (coefficient of 1/(w-p)^2) may be supplied
    analytically; otherwise they are fitted locally.
    """

    location: float
    kind: str = "auto"
    residue: Optional[complex] = None
    leading: Optional[complex] = None

    def __post_init__(self):
        if self.kind not in POLE_KINDS:
            raise ValidationError(f"unknown pole kind {self.kind!r}", "pole.kind")
        if not math.isfinite(self.location):
            raise DomainError("pole location must be finite")
        if self.kind == "removable" and self.residue not in (None, 0):
            raise ValidationError("removable point with nonzero residue", "pole.residue")


@dataclass
class PoleReport:
    location: float
    kind: str
    residue: complex
    leading: complex
    window: float


@dataclass
class ContourResult:
    """Integral along the real line indented above every declared pole."""

    value: complex
    error: float
    principal_value: complex
    poles: list = field(default_factory=list)

    def __iter__(self):
        yield self.value
        yield self.error

    def real_checked(self, rel: float = 1e-8) -> float:
        v = complex(self.value)
        if abs(v.imag) > rel * (1.0 + abs(v.real)):
            raise NumericalError(
                f"contour integral has imaginary part {v.imag:.3e} (real {v.real:.6e})",
                {"principal_value": self.principal_value,
                 "residues": {p.location: p.residue for p in self.poles},
                 "leading": {p.location: p.leading for p in self.poles}},
            )
        return v.real


def _is_complex(fn: Callable, a: float, b: float) -> bool:
    if math.isinf(a) and math.isinf(b):
        probe = 0.37
    elif math.isinf(a):
        probe = b - 1.0
    elif math.isinf(b):
        probe = a + 1.0
    else:
        probe = a + 0.3819660112501051 * (b - a)
    return np.iscomplexobj(np.asarray(fn(probe)))


def _quad_real(fn, a, b, cfg, points):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        kw = dict(epsabs=cfg.abs_tol, epsrel=cfg.rel_tol, limit=cfg.max_subdivisions,
                  full_output=1)
        if points is not None and not (math.isinf(a) or math.isinf(b)):
            pts = [p for p in points if a < p < b]
            if pts:
                kw["points"] = pts
        out = _spi.quad(fn, a, b, **kw)
    value, err, info = out[0], out[1], out[2]
    ier = out[3] if len(out) > 3 and isinstance(out[3], str) else None
    ok = len(out) == 3
    return value, err, ok, ier, info


def integrate(fn: Callable, a: float, b: float, cfg: QuadConfig = DEFAULT,
              points: Optional[Sequence[float]] = None) -> QuadResult:
    """Adaptive Gauss-Kronrod quadrature of a real or complex integrand.

    Infinite limits are mapped onto a finite interval. Raises
    :class:`ConvergenceError` (with the best estimate attached) when the
    reported error exceeds ``max(abs_tol, rel_tol * |result|)``.
    """
    a, b = float(a), float(b)
    if math.isnan(a) or math.isnan(b):
        raise DomainError("integration limits must not be NaN")
    if a == b:
        return QuadResult(0.0, 0.0)
    if a > b:
        r = integrate(fn, b, a, cfg, points)
        return QuadResult(-r.value, r.error)
    if (math.isinf(a) and math.isinf(b)) and points:
        # split at a breakpoint so each half gets its own transform
        c = float(points[0])
        left = integrate(fn, a, c, cfg)
        right = integrate(fn, c, b, cfg, points[1:])
        return QuadResult(left.value + right.value, left.error + right.error)

    parts = []
    if _is_complex(fn, a, b):
        parts.append(_quad_real(lambda x: float(np.real(fn(x))), a, b, cfg, points))
        parts.append(_quad_real(lambda x: float(np.imag(fn(x))), a, b, cfg, points))
        value = complex(parts[0][0], parts[1][0])
    else:
        parts.append(_quad_real(lambda x: float(fn(x)), a, b, cfg, points))
        value = parts[0][0]
    err = float(sum(p[1] for p in parts))
    bound = max(cfg.abs_tol, cfg.rel_tol * abs(value))
    if not math.isfinite(abs(value)) or (err > bound and not all(p[2] for p in parts)):
        msgs = "; ".join(str(p[3]) for p in parts if p[3])
        raise ConvergenceError(
            f"quadrature on [{a}, {b}] did not converge (error {err:.2e} > {bound:.2e}). {msgs}".strip(),
            estimate=value, error=err)
    return QuadResult(value, err)


# -- poles ---------------------------------------------------------------

_GL_ORDERS = (24, 32)


def _eval_many(fn, xs):
    try:
        out = np.asarray(fn(xs))
        if out.shape == xs.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.asarray([fn(x) for x in xs])


def _interp_at_zero(s, y) -> complex:
    # the weights come from a randomly permuted node order; pin it so repeated
    # runs agree to the last bit
    try:
        ip = BarycentricInterpolator(s, y, rng=0)
    except TypeError:  # scipy < 1.15
        ip = BarycentricInterpolator(s, y, random_state=0)
    return complex(ip(0.0))


def _laurent(fn, p, delta, n):
    """Sample a symmetric window around p on an n-point Gauss-Legendre rule.

    The nodes avoid s = 0. The even functions s^2 (g(p+s)+g(p-s))/2 and
    s (g(p+s)-g(p-s))/2 are interpolated at 0 to get the coefficients of
    1/(w-p)^2 and 1/(w-p).
    """
    x, w = np.polynomial.legendre.leggauss(n)
    s = x * delta
    wt = w * delta
    gp = _eval_many(fn, p + s)
    gm = _eval_many(fn, p - s)
    even = s * s * (gp + gm) / 2.0
    odd = s * (gp - gm) / 2.0
    a = _interp_at_zero(s, even)
    r = _interp_at_zero(s, odd)
    return even, odd, s, wt, a, r


def _classify(a, r, scale, declared):
    if declared != "auto":
        return declared
    tiny = 1e-10 * max(scale, 1e-300)
    if abs(a) > tiny:
        return "double"
    if abs(r) > tiny:
        return "simple"
    return "removable"


def pv_integral_above(fn: Callable, a: float, b: float, poles: Sequence[PoleSpec],
                      cfg: QuadConfig = DEFAULT, max_window: Optional[float] = None,
                      ) -> ContourResult:
    """Integrate ``fn`` over [a, b] along a contour passing above each real pole.

    The result is FP(fn) - i*pi*sum(residues): the principal value (Hadamard
    finite part for second-order poles) minus the half-circle contributions.
    Around each pole the principal value is taken on a symmetric window where
    the singular part cancels between mirrored nodes; the rest of the line goes
    to :func:`integrate`.
    """
    a, b = float(a), float(b)
    if not a < b:
        raise DomainError("pv_integral_above needs a < b")
    specs = sorted(poles, key=lambda p: p.location)
    locs = [float(p.location) for p in specs]
    for loc in locs:
        if loc <= a or loc >= b:
            raise DomainError(f"pole at {loc} is not interior to [{a}, {b}]")
    if len(set(locs)) != len(locs):
        raise DomainError("duplicate pole locations")

    reports = []
    pv = 0.0 + 0.0j
    err_total = 0.0
    residue_sum = 0.0 + 0.0j
    for i, (p, spec) in enumerate(zip(locs, specs)):
        room = [p - a, b - p]
        if i > 0:
            room.append(p - locs[i - 1])
        if i + 1 < len(locs):
            room.append(locs[i + 1] - p)
        delta = 0.5 * min(room)
        if max_window is not None:
            delta = min(delta, max_window)
        win, err_w, report = _pole_window(fn, p, delta, spec, cfg)
        pv += win
        err_total += err_w
        residue_sum += report.residue
        reports.append(report)

    bounds = [a]
    for rep in reports:
        bounds += [rep.location - rep.window, rep.location + rep.window]
    bounds.append(b)
    for lo, hi in zip(bounds[0::2], bounds[1::2]):
        if hi > lo:
            piece = integrate(fn, lo, hi, cfg)
            pv += piece.value
            err_total += piece.error
    value = pv - 1j * math.pi * residue_sum
    return ContourResult(value, err_total, pv, reports)


def _pole_window(fn, p, delta, spec, cfg, max_halvings=8):
    """Finite-part integral over [p - delta, p + delta], shrinking delta until
    two Gauss-Legendre orders agree."""
    for _ in range(max_halvings + 1):
        estimates = []
        for n in _GL_ORDERS:
            even, odd, s, wt, a_fit, r_fit = _laurent(fn, p, delta, n)
            a_use = spec.leading if spec.leading is not None else a_fit
            if spec.kind in ("removable", "simple") and spec.leading is None:
                a_use = 0.0
            win = complex(np.sum(wt * (even - a_use) / (s * s)) - 2.0 * a_use / delta)
            estimates.append((win, a_use, a_fit, r_fit, float(np.max(np.abs(even)))))
        (w1, _, af1, rf1, _), (w2, a2, af2, rf2, scale) = estimates
        tol = max(cfg.abs_tol, cfg.rel_tol * max(abs(w2), abs(a2) / delta))
        res_tol = max(1e-10 * scale, 1e-7 * abs(rf2), 1e-300)
        if abs(w2 - w1) <= tol and abs(rf2 - rf1) <= res_tol:
            break
        delta *= 0.5
    else:
        raise NumericalError(
            f"local Laurent fit at {p} did not stabilize",
            {"window_estimates": (w1, w2), "residue_estimates": (rf1, rf2)})

    limit = 1e-8 * max(scale, 1e-300)
    if spec.kind in ("removable", "simple") and spec.leading is None and abs(af2) > limit:
        raise NumericalError(
            f"point {p} declared {spec.kind} but has a 1/(w-p)^2 term {af2:.3e}",
            {"leading": af2, "residue": rf2})
    if spec.kind == "removable" and abs(rf2) > limit:
        raise NumericalError(f"point {p} declared removable but has residue {rf2:.3e}",
                             {"residue": rf2})
    residue = 0.0 if spec.kind == "removable" else (
        spec.residue if spec.residue is not None else rf2)
    kind = _classify(af2, rf2, scale, spec.kind)
    return w2, abs(w2 - w1), PoleReport(p, kind, complex(residue), complex(a2), delta)


# -- removable points ------------------------------------------------------


def integrate_patched(fn: Callable, a: float, b: float, removable: Sequence[float],
                      width: float, cfg: QuadConfig = DEFAULT) -> QuadResult:
    """Integrate across removable 0/0 points.

    Inside |w - p| < width the integrand is replaced by the cubic through
    fn(p +- width), fn(p +- 2 width), which is fourth-order accurate and never
    samples the cancelling region.
    """
    pts = sorted(float(p) for p in removable if a < p < b)
    bounds = [a]
    total = 0.0
    err = 0.0
    for p in pts:
        nodes = np.array([-2.0, -1.0, 1.0, 2.0]) * width
        vals = np.array([fn(p + x) for x in nodes])
        coef = np.polyfit(nodes, vals, 3)
        anti = np.polyint(coef)
        total += np.polyval(anti, width) - np.polyval(anti, -width)
        bounds += [p - width, p + width]
    bounds.append(b)
    for lo, hi in zip(bounds[0::2], bounds[1::2]):
        piece = integrate(fn, lo, hi, cfg)
        total += piece.value
        err += piece.error
    return QuadResult(total, err)
