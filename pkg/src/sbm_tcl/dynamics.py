"""TCL2 time evolution of the Bloch vector, dv/dt = (F0 + lambda^2 F2(t)) v.

F2(t) comes from a precomputed :class:`~sbm_tcl.generators.Tcl2Cache`; there
is no fourth-order time-dependent generator.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional, Union

import numpy as np
from scipy.integrate import solve_ivp

from .errors import ConvergenceError, DomainError, ValidationError
from .generators import SystemParams, Tcl2Cache, tcl0
from .numerics import DEFAULT, QuadConfig
from .spectral import SpectralDensity, _positive
from .steadystate import BlochVector

RTOL = 1e-8
ATOL = 1e-11


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (n, 4)
    params: dict
    diagnostics: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.times)

    def component(self, k: int) -> np.ndarray:
        return self.states[:, k]

    @property
    def v1(self):
        return self.states[:, 1]

    @property
    def v2(self):
        return self.states[:, 2]

    @property
    def v3(self):
        return self.states[:, 3]

    def state(self, i: int) -> BlochVector:
        return BlochVector.from_array(self.states[i])

    @property
    def final(self) -> BlochVector:
        return self.state(-1)


@dataclass(frozen=True)
class NotConverged:
    drift: tuple
    window: float

    def __bool__(self):
        return False


def evolve(p: SystemParams, sd: SpectralDensity, v_init: Union[BlochVector, tuple],
           t_max: float, dt_out: float, rtol: float = RTOL, cache: Optional[Tcl2Cache] = None,
           cfg: QuadConfig = DEFAULT) -> Trajectory:
    if not isinstance(v_init, BlochVector):
        v_init = BlochVector.from_array(v_init)
    v_init.validate()
    t_max = _positive("t_max", t_max)
    dt_out = _positive("dt_out", dt_out)
    if dt_out > t_max:
        raise ValidationError("dt_out exceeds t_max", "dynamics.dt_out")
    n_out = int(math.floor(t_max / dt_out + 1e-9)) + 1
    t_eval = np.arange(n_out) * dt_out
    f0 = tcl0(p).entries
    lam2 = p.coupling_sq

    if lam2 == 0.0:
        rhs = lambda t, v: f0 @ v  # noqa: E731
        method = "free"
    else:
        if cache is None:
            cache = Tcl2Cache.build(p, sd, t_max, cfg=cfg)
        elif cache.horizon < t_eval[-1] * (1.0 - 1e-12):
            raise DomainError(f"generator cache ends at {cache.horizon}, before t_max={t_max}")
        spline = cache._spline

        def rhs(t, v):
            return (f0 + lam2 * spline(min(t, cache.horizon))) @ v
        method = cache.method

    sol = solve_ivp(rhs, (0.0, float(t_eval[-1])), v_init.as_array(), method="DOP853",
                    t_eval=t_eval, rtol=rtol, atol=ATOL * rtol / RTOL)
    if not sol.success:
        raise ConvergenceError(f"integrator failed: {sol.message}")
    states = sol.y.T.copy()
    window = max(0.1 * t_max, dt_out)
    diag = {
        "integrator": "DOP853",
        "rtol": rtol,
        "generator": method,
        "cache_step": None if cache is None else cache.step,
        "n_rhs": int(sol.nfev),
        "v0_max_dev": float(np.max(np.abs(states[:, 0] - 1.0))),
        "window": window,
        "drift": _drift(t_eval, states, window),
    }
    return Trajectory(t_eval, states, asdict(p), diag)


def _drift(times, states, window):
    tail = times >= times[-1] - window
    seg = states[tail, 1:]
    return [float(x) for x in (seg.max(axis=0) - seg.min(axis=0))]


def detect_steady_state(traj: Trajectory, window: float, tol: float
                        ) -> Union[BlochVector, NotConverged]:
    """Mean of the last ``window`` of the trajectory if every component moves
    by less than ``tol`` over it."""
    window = _positive("window", window)
    if traj.times[-1] - traj.times[0] < window:
        raise ValidationError("trajectory shorter than the window", "window")
    drift = _drift(traj.times, traj.states, window)
    if max(drift) >= tol:
        return NotConverged(tuple(drift), window)
    tail = traj.times >= traj.times[-1] - window
    return BlochVector.from_array(traj.states[tail].mean(axis=0))
