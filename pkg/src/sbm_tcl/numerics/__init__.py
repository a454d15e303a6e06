from .matsubara import sum_matsubara
from .quadrature import (
    DEFAULT,
    ContourResult,
    PoleSpec,
    QuadConfig,
    QuadResult,
    integrate,
    integrate_patched,
    pv_integral_above,
)
from .special import digamma, trigamma

__all__ = [
    "DEFAULT", "ContourResult", "PoleSpec", "QuadConfig", "QuadResult", "digamma",
    "integrate", "integrate_patched", "pv_integral_above", "sum_matsubara", "trigamma",
]
