"""Convergence-controlled summation of lattice sums with algebraic tails."""
from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from ..errors import ConvergenceError

_START = 16
_MAX_COLUMNS = 6
_MAX_LEVELS = 17  # N up to 16 * 2**16 ~ 1e6 terms


def sum_matsubara(term: Callable, tail_order: int = 2, tol: float = 1e-12,
                  lower: Optional[int] = None, max_levels: int = _MAX_LEVELS):
    """Sum ``term(n)`` over all integers (symmetric partial sums) or over
    n >= ``lower``.

    ``term`` is called with integer arrays. Terms are assumed to fall off like
    n**-tail_order, so partial sums S_N carry an error expansion in integer
    powers of 1/N starting at 1/N**(tail_order - 1). Partial sums at
    N = 16, 32, 64, ... are Richardson-extrapolated; the sum stops when
    successive diagonal entries agree within ``tol``. Complex terms are fine.
    """
    if tail_order < 2:
        raise ValueError("tail_order must be >= 2 for a convergent sum")
    two_sided = lower is None
    first = 0 if two_sided else int(lower)

    def block(lo, hi):
        n = np.arange(lo, hi + 1)
        vals = np.asarray(term(n))
        total = vals.sum()
        if two_sided:
            nz = n[n != 0]
            total = total + np.asarray(term(-nz)).sum()
        return total, vals

    partial, vals = block(first, first + _START)
    sizes = [_START]
    table = [[partial]]
    last_terms = [np.max(np.abs(vals[-4:]))]
    best, diff = partial, np.inf
    for level in range(1, max_levels):
        n_prev = first + sizes[-1]
        n_new = first + 2 * sizes[-1]
        inc, vals = block(n_prev + 1, n_new)
        partial = partial + inc
        sizes.append(2 * sizes[-1])
        last_terms.append(np.max(np.abs(vals[-4:])))
        row = [partial]
        for j in range(1, min(level, _MAX_COLUMNS) + 1):
            factor = 2.0 ** (tail_order - 1 + j - 1)
            row.append((factor * row[j - 1] - table[-1][j - 1]) / (factor - 1.0))
        table.append(row)
        # high columns amplify rounding, so take the column that moved least
        prev = table[-2]
        cands = [(abs(row[j] - prev[j]), row[j]) for j in range(min(len(row), len(prev)))]
        diff, best = min(cands, key=lambda c: c[0])
        scale = max(abs(best), 1.0)
        if diff < tol * scale or diff == 0.0:
            return best
        if level >= 3 and last_terms[-1] >= last_terms[-3] and last_terms[-1] > 0:
            raise ConvergenceError("terms are not decreasing in magnitude",
                                   estimate=best, error=diff)
    raise ConvergenceError(f"sum not converged after {sizes[-1]} terms",
                           estimate=best, error=diff)
