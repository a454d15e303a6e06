"""Complex digamma and trigamma by upward recurrence plus asymptotic series."""
from __future__ import annotations

import cmath
import math

import numpy as np

from ..errors import DomainError

# B_2k for k = 1..9
_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6,
              -3617 / 510, 43867 / 798)
_SHIFT_TO = 10.0


def _check(z: complex) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"non-finite argument {z!r}")
    if z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real):
        raise DomainError(f"pole of the polygamma function at z = {z.real:g}")
    return z


def _digamma1(z: complex) -> complex:
    z = _check(z)
    acc = 0.0j
    while z.real < _SHIFT_TO:
        acc -= 1.0 / z
        z += 1.0
    inv2 = 1.0 / (z * z)
    series = 0.0j
    power = inv2
    for k, b in enumerate(_BERNOULLI, start=1):
        series += b / (2 * k) * power
        power *= inv2
    return acc + cmath.log(z) - 0.5 / z - series


def _trigamma1(z: complex) -> complex:
    z = _check(z)
    acc = 0.0j
    while z.real < _SHIFT_TO:
        acc += 1.0 / (z * z)
        z += 1.0
    inv = 1.0 / z
    inv2 = inv * inv
    series = 0.0j
    power = inv2 * inv
    for b in _BERNOULLI:
        series += b * power
        power *= inv2
    return acc + inv + 0.5 * inv2 + series


def digamma(z):
    """psi(z) for complex z; arrays are handled elementwise."""
    if np.ndim(z):
        return np.vectorize(_digamma1, otypes=[complex])(z)
    return _digamma1(z)


def trigamma(z):
    """psi'(z) for complex z; arrays are handled elementwise."""
    if np.ndim(z):
        return np.vectorize(_trigamma1, otypes=[complex])(z)
    return _trigamma1(z)
