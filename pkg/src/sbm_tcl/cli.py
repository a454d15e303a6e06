"""Command line front end.

    sbm-tcl steady   --config run.ini [--out report.json] [--rel-tol 1e-10]
    sbm-tcl dynamics --config run.ini [--out traj.csv]
    sbm-tcl sweep    --config run.ini [--out sweep.csv]

Exit codes: 0 ok, 2 invalid input, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import os
import platform
import sys
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, replace
from pathlib import Path
from typing import Optional

import numpy as np
import scipy

from . import __version__
from .bathcorr import ResonanceWarning, drude_resonance
from .config import RunConfig
from .dynamics import evolve
from .errors import NumericalError, SbmError, ValidationError
from .steadystate import assemble_report

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 2, 3

SWEEP_COLUMNS = ("v1_tcl", "v1_mfgs", "v1_diff", "v3_tcl", "v3_mfgs", "v3_diff", "v2")


def _fmt(x) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "nan"
    return f"{x:.12g}"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


def _provenance(cfg: RunConfig, started: float) -> dict:
    q = cfg.quad_config()
    return {
        "version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "rel_tol": q.rel_tol,
        "abs_tol": q.abs_tol,
        "wall_time_s": round(time.perf_counter() - started, 6),
    }


def _flags(cfg: RunConfig) -> list:
    b = cfg.bath
    if b["model"] == "drude" and drude_resonance(b["beta"], b["lambda_cut"]):
        return ["beta_lambda_resonance"]
    return []


def _emit(text: str, out: Optional[str]):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- commands -----------------------------------------------------------------


def cmd_steady(cfg: RunConfig, out: Optional[str]) -> int:
    started = time.perf_counter()
    report = assemble_report(cfg.system_params(), cfg.spectral_density(), cfg.quad_config())
    doc = {
        "report": _jsonable(report.as_dict()),
        "flags": _flags(cfg),
        "config": cfg.as_dict(),
        "provenance": _provenance(cfg, started),
    }
    _emit(json.dumps(doc, indent=2) + "\n", out)
    return EXIT_OK


def cmd_dynamics(cfg: RunConfig, out: Optional[str]) -> int:
    if not cfg.dynamics:
        raise ValidationError("missing section", "dynamics")
    started = time.perf_counter()
    d = cfg.dynamics
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ResonanceWarning)
        traj = evolve(cfg.system_params(), cfg.spectral_density(), tuple(d["v_init"]),
                      d["t_max"], d["dt_out"], cfg=cfg.quad_config())
    buf = io.StringIO()
    buf.write("t,v1,v2,v3\n")
    for t, row in zip(traj.times, traj.states):
        buf.write(",".join(_fmt(float(x)) for x in (t, row[1], row[2], row[3])) + "\n")
    _emit(buf.getvalue(), out)
    if out:
        meta = {"diagnostics": _jsonable(traj.diagnostics), "flags": _flags(cfg),
                "config": cfg.as_dict(), "provenance": _provenance(cfg, started)}
        Path(out).with_suffix(".json").write_text(json.dumps(meta, indent=2) + "\n")
    return EXIT_OK


def _sweep_point(args):
    cfg_dict, path, value = args
    cfg = RunConfig.from_sections(cfg_dict)
    try:
        point = cfg.with_override(path, value)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ResonanceWarning)
            rep = assemble_report(point.system_params(), point.spectral_density(),
                                  point.quad_config())
        t, m = rep.tcl_correction, rep.mfgs_correction
        vals = (t.v1, m.v1, rep.route_discrepancy["v1"], t.v3, m.v3,
                rep.route_discrepancy["v3"], t.v2)
        if not all(math.isfinite(v) for v in vals):
            raise NumericalError("non-finite result")
        return vals, ";".join(_flags(point)), ""
    except SbmError as exc:
        flags = ""
        try:
            flags = ";".join(_flags(cfg.with_override(path, value)))
        except SbmError:
            pass
        return (math.nan,) * len(SWEEP_COLUMNS), flags, f"{type(exc).__name__}: {exc}"


def cmd_sweep(cfg: RunConfig, out: Optional[str], workers: Optional[int] = None) -> int:
    sw = cfg.sweep
    if not sw or not sw.get("values"):
        raise ValidationError("empty sweep grid", "sweep.values")
    path = sw["parameter"]
    cfg.with_override(path, sw["values"][0])  # unknown parameter -> validation error now
    base = replace(cfg, sweep={}, output={}).as_dict()
    jobs = [(base, path, v) for v in sw["values"]]
    n = workers if workers is not None else min(len(jobs), os.cpu_count() or 1)
    if n > 1:
        with ProcessPoolExecutor(max_workers=n) as pool:
            results = list(pool.map(_sweep_point, jobs))
    else:
        results = [_sweep_point(j) for j in jobs]
    buf = io.StringIO()
    buf.write(",".join((path,) + SWEEP_COLUMNS + ("flags", "error")) + "\n")
    ok = 0
    for v, (vals, flags, err) in zip(sw["values"], results):
        ok += not err
        err = err.replace(",", ";").replace("\n", " ")
        buf.write(",".join([_fmt(v)] + [_fmt(x) for x in vals] + [flags, err]) + "\n")
    _emit(buf.getvalue(), out)
    return EXIT_OK if ok else EXIT_NUMERICAL


COMMANDS = {"steady": cmd_steady, "dynamics": cmd_dynamics, "sweep": cmd_sweep}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sbm-tcl", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True, help="INI config or JSON report")
        sp.add_argument("--out", help="output file (default: [output] path, else stdout)")
        sp.add_argument("--rel-tol", type=float, help="override numerics.rel_tol")
        if name == "sweep":
            sp.add_argument("--workers", type=int, help="parallel processes")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig.load(args.config)
        if args.rel_tol is not None:
            cfg = replace(cfg, numerics={**cfg.numerics, "rel_tol": args.rel_tol})
            cfg.quad_config()
        out = args.out or cfg.output.get("path")
        if args.command == "sweep":
            return cmd_sweep(cfg, out, args.workers)
        return COMMANDS[args.command](cfg, out)
    except ValidationError as exc:
        print(f"sbm-tcl: invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SbmError as exc:
        print(f"sbm-tcl: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
