"""Spectral densities J(w), the thermal function f(w) = J(w) coth(beta w / 2) and
their derivatives.

Every density is odd in w. Models only implement the w >= 0 branch; the base
class reflects it, so oddness holds by construction.
"""
from __future__ import annotations

import abc
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, ValidationError

ENVELOPES = ("gaussian", "rational")


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise ValidationError(f"must be a finite positive number, got {value!r}", name)
    return value


def _check_beta(beta: float) -> float:
    return _positive("beta", beta)


def _x_coth(x, beta):
    """x * coth(beta x / 2), even in x, with the limit 2/beta at x = 0."""
    x = np.asarray(x, dtype=float)
    y = 0.5 * beta * x
    small = np.abs(y) < 1e-4
    ys = np.where(small, 1.0, y)
    out = np.where(small, (2.0 / beta) * (1.0 + y * y / 3.0 - y**4 / 45.0), x / np.tanh(ys))
    return out


def _one_minus_sinc(x):
    """1 - sin(x)/x without cancellation near 0."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-2
    xs = np.where(small, 1.0, x)
    x2 = x * x
    series = x2 / 6.0 - x2**2 / 120.0 + x2**3 / 5040.0 - x2**4 / 362880.0
    return np.where(small, series, 1.0 - np.sin(xs) / xs)


class SpectralDensity(abc.ABC):
    """Odd spectral density.

    Subclasses provide the w >= 0 branch through ``_j``, ``_j_prime`` and
    ``_j_over_omega``; callers use :meth:`j`, :meth:`j_prime`, :meth:`f`, ...
    which accept scalars or arrays of any sign.
    """

    tag: str = "abstract"
    #: tail behaviour of J(w) at large w, used to choose quadrature strategies
    envelope: str = "rational"

    @property
    @abc.abstractmethod
    def scale(self) -> float:
        """Characteristic cutoff frequency (sets grids and truncation)."""

    @abc.abstractmethod
    def params(self) -> dict:
        """Model parameters as named reals."""

    @abc.abstractmethod
    def _j(self, w: np.ndarray) -> np.ndarray: ...

    @abc.abstractmethod
    def _j_prime(self, w: np.ndarray) -> np.ndarray: ...

    @abc.abstractmethod
    def _j_over_omega(self, w: np.ndarray) -> np.ndarray: ...

    # public evaluators -------------------------------------------------

    def j(self, w):
        w = _finite(w)
        return (np.sign(w) * self._j(np.abs(w)))[()]

    def j_prime(self, w):
        w = _finite(w)
        return self._j_prime(np.abs(w))[()]

    def j_over_omega(self, w):
        """J(w)/w, even, with its analytic limit at w = 0."""
        w = _finite(w)
        return self._j_over_omega(np.abs(w))[()]

    def f(self, w, beta: float):
        beta = _check_beta(beta)
        w = _finite(w)
        return (self._j_over_omega(np.abs(w)) * _x_coth(w, beta))[()]

    def f_prime(self, w, beta: float):
        beta = _check_beta(beta)
        w = _finite(w)
        if np.any(w == 0.0):
            raise DomainError("f'(w) is only evaluated away from w = 0")
        y = 0.5 * beta * w
        # f is even, so f' is odd; J' is even and J is odd.
        return (self.j_prime(w) / np.tanh(y) - self.j(w) * 0.5 * beta / np.sinh(y) ** 2)[()]

    def f_zero(self, beta: float) -> float:
        """f(0) = (2/beta) lim_{w->0} J(w)/w."""
        beta = _check_beta(beta)
        return 2.0 / beta * float(self._j_over_omega(np.zeros(1))[0])

    def describe(self) -> dict:
        return {"model": self.tag, **self.params()}

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v!r}" for k, v in self.params().items())
        return f"{type(self).__name__}({args})"


def _finite(w) -> np.ndarray:
    arr = np.asarray(w, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"frequency must be finite, got {w!r}")
    return arr


@dataclass(frozen=True)
class DrudeParams:
    gamma: float
    lambda_cut: float

    def __post_init__(self):
        _positive("gamma", self.gamma)
        _positive("lambda_cut", self.lambda_cut)


@dataclass(frozen=True)
class DqdSincParams:
    gamma: float
    omega_c: float
    omega_max: float

    def __post_init__(self):
        _positive("gamma", self.gamma)
        _positive("omega_c", self.omega_c)
        _positive("omega_max", self.omega_max)


class Drude(SpectralDensity):
    """Ohmic density with Drude cutoff, gamma * L^2 w / (L^2 + w^2)."""

    tag = "drude"
    envelope = "rational"

    def __init__(self, gamma: float, lambda_cut: float):
        self.p = DrudeParams(float(gamma), float(lambda_cut))

    @property
    def gamma(self) -> float:
        return self.p.gamma

    @property
    def lambda_cut(self) -> float:
        return self.p.lambda_cut

    @property
    def scale(self) -> float:
        return self.p.lambda_cut

    def params(self) -> dict:
        return {"gamma": self.p.gamma, "lambda_cut": self.p.lambda_cut}

    def _j(self, w):
        lam2 = self.p.lambda_cut**2
        return self.p.gamma * lam2 * w / (lam2 + w * w)

    def _j_prime(self, w):
        lam2 = self.p.lambda_cut**2
        return self.p.gamma * lam2 * (lam2 - w * w) / (lam2 + w * w) ** 2

    def _j_over_omega(self, w):
        lam2 = self.p.lambda_cut**2
        return self.p.gamma * lam2 / (lam2 + w * w)


class DqdSinc(SpectralDensity):
    """Bulk acoustic phonon density of a double quantum dot,
    gamma w [1 - sinc(w / omega_c)] exp(-w^2 / (2 omega_max^2)).
    """

    tag = "dqd_sinc"
    envelope = "gaussian"

    def __init__(self, gamma: float, omega_c: float, omega_max: float):
        self.p = DqdSincParams(float(gamma), float(omega_c), float(omega_max))

    @property
    def scale(self) -> float:
        return self.p.omega_max

    def params(self) -> dict:
        return {"gamma": self.p.gamma, "omega_c": self.p.omega_c, "omega_max": self.p.omega_max}

    def _gauss(self, w):
        return np.exp(-0.5 * (w / self.p.omega_max) ** 2)

    def _j_over_omega(self, w):
        return self.p.gamma * _one_minus_sinc(w / self.p.omega_c) * self._gauss(w)

    def _j(self, w):
        return w * self._j_over_omega(w)

    def _j_prime(self, w):
        x = w / self.p.omega_c
        one_minus_cos = 2.0 * np.sin(0.5 * x) ** 2
        return self.p.gamma * self._gauss(w) * (
            one_minus_cos - (w / self.p.omega_max) ** 2 * _one_minus_sinc(x)
        )


class CustomDensity(SpectralDensity):
    """User-supplied density from callables.

    ``j`` is only ever called with w >= 0; negative frequencies are reflected.
    ``slope_at_zero`` is lim_{w->0} J(w)/w. Without ``j_prime`` the derivative
    is taken by Richardson-refined central differences.
    """

    tag = "custom"

    def __init__(
        self,
        j: Callable,
        slope_at_zero: float,
        j_prime: Optional[Callable] = None,
        scale: float = 1.0,
        envelope: str = "rational",
        name: str = "custom",
    ):
        if envelope not in ENVELOPES:
            raise ValidationError(f"unknown envelope {envelope!r}", "envelope")
        self._fj = j
        self._fjp = j_prime
        self._slope = float(slope_at_zero)
        self._scale = _positive("scale", scale)
        self.envelope = envelope
        self.name = name

    @property
    def scale(self) -> float:
        return self._scale

    def params(self) -> dict:
        return {"name": self.name, "slope_at_zero": self._slope, "scale": self._scale}

    def _call(self, fn, w):
        return np.asarray(np.vectorize(fn, otypes=[float])(w), dtype=float)

    def _j(self, w):
        return self._call(self._fj, w)

    def _j_over_omega(self, w):
        nz = w != 0.0
        out = np.full(np.shape(w), self._slope, dtype=float)
        if np.any(nz):
            out[nz] = self._j(w[nz]) / w[nz]
        return out

    def _j_prime(self, w):
        if self._fjp is not None:
            return self._call(self._fjp, w)
        return central_difference(self.j, w)


def central_difference(fn: Callable, w, rel_step: float = 1e-6) -> np.ndarray:
    """Central difference of ``fn`` with one Richardson refinement.

    Step h = max(1e-6, 1e-6 |w|); D(h) and D(h/2) combine to O(h^4).
    """
    w = np.asarray(w, dtype=float)
    h = np.maximum(1e-6, rel_step * np.abs(w))

    def d(step):
        return (np.asarray(fn(w + step)) - np.asarray(fn(w - step))) / (2.0 * step)

    return (4.0 * d(h / 2.0) - d(h)) / 3.0


# module-level operations ------------------------------------------------


def eval_j(sd: SpectralDensity, omega):
    return sd.j(omega)


def eval_f(sd: SpectralDensity, omega, beta: float):
    return sd.f(omega, beta)


def eval_f_prime(sd: SpectralDensity, omega, beta: float):
    return sd.f_prime(omega, beta)


def from_config(model: str, **params) -> SpectralDensity:
    """Build a built-in density from its tag and parameters."""
    model = model.strip().lower()
    try:
        if model == "drude":
            return Drude(params["gamma"], params["lambda_cut"])
        if model in ("dqd_sinc", "dqd", "sinc"):
            return DqdSinc(params["gamma"], params["omega_c"], params["omega_max"])
    except KeyError as exc:
        raise ValidationError("missing parameter", f"bath.{exc.args[0]}") from None
    raise ValidationError(f"unknown spectral density model {model!r}", "bath.model")
