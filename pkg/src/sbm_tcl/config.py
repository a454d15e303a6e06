"""Run configuration: flat INI sections, or the ``config`` block of a JSON report.

Example::

    [system]
    epsilon = 1.0
    t_c = 0.5

    [bath]
    model = dqd_sinc
    gamma = 1.0
    omega_c = 1.0
    omega_max = 8.0
    beta = 1.0

    [coupling]
    coupling_sq = 0.0144

    [dynamics]
    t_max = 800
    dt_out = 0.5
    v_init = 1, 0, 0, 0
"""
from __future__ import annotations

import configparser
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from .errors import ValidationError
from .generators import SystemParams
from .numerics import QuadConfig
from .spectral import SpectralDensity, from_config
from .steadystate import BlochVector

BATH_KEYS = {
    "drude": ("gamma", "lambda_cut"),
    "dqd_sinc": ("gamma", "omega_c", "omega_max"),
}
_ALIASES = {"dqd": "dqd_sinc", "sinc": "dqd_sinc"}


def _num(section: dict, key: str, path: str, default=None) -> float:
    raw = section.get(key, default)
    if raw is None:
        raise ValidationError("missing", f"{path}.{key}")
    try:
        val = float(raw)
    except (TypeError, ValueError):
        raise ValidationError(f"not a number: {raw!r}", f"{path}.{key}") from None
    if not math.isfinite(val):
        raise ValidationError(f"not finite: {raw!r}", f"{path}.{key}")
    return val


def _vec(raw, path: str) -> tuple:
    if isinstance(raw, str):
        parts = [x for x in raw.replace(",", " ").split()]
    else:
        parts = list(raw)
    try:
        vals = tuple(float(x) for x in parts)
    except (TypeError, ValueError):
        raise ValidationError(f"not a list of numbers: {raw!r}", path) from None
    if len(vals) != 4:
        raise ValidationError(f"needs 4 components (v0, v1, v2, v3), got {len(vals)}", path)
    return vals


@dataclass
class RunConfig:
    system: dict
    bath: dict
    coupling_sq: float
    dynamics: dict = field(default_factory=dict)
    numerics: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)
    sweep: dict = field(default_factory=dict)

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_sections(cls, sections: dict) -> "RunConfig":
        sections = {k.lower(): dict(v) for k, v in sections.items()}
        sysb = sections.get("system")
        if not sysb:
            raise ValidationError("missing section", "system")
        generic = {"omega", "a1", "a3"} & set(sysb)
        dqd = {"epsilon", "t_c"} & set(sysb)
        if generic and dqd:
            raise ValidationError("give either omega/a1/a3 or epsilon/t_c, not both", "system")
        if dqd:
            system = {"epsilon": _num(sysb, "epsilon", "system"),
                      "t_c": _num(sysb, "t_c", "system")}
        else:
            system = {k: _num(sysb, k, "system") for k in ("omega", "a1", "a3")}

        bathb = sections.get("bath")
        if not bathb:
            raise ValidationError("missing section", "bath")
        model = str(bathb.get("model", "")).strip().lower()
        model = _ALIASES.get(model, model)
        if model not in BATH_KEYS:
            raise ValidationError(f"unknown model {bathb.get('model')!r}", "bath.model")
        bath = {"model": model, "beta": _num(bathb, "beta", "bath")}
        for k in BATH_KEYS[model]:
            bath[k] = _num(bathb, k, "bath")

        coupling_sq = _num(sections.get("coupling", {}), "coupling_sq", "coupling", 1.0)

        dyn = {}
        dynb = sections.get("dynamics", {})
        if dynb:
            dyn["t_max"] = _num(dynb, "t_max", "dynamics")
            dyn["dt_out"] = _num(dynb, "dt_out", "dynamics")
            dyn["v_init"] = list(_vec(dynb.get("v_init", "1 0 0 0"), "dynamics.v_init"))

        numb = sections.get("numerics", {})
        numerics = {k: _num(numb, k, "numerics") for k in ("rel_tol", "abs_tol") if k in numb}

        out = {k: str(v) for k, v in sections.get("output", {}).items()}

        sweep = {}
        swb = sections.get("sweep", {})
        if swb:
            if "parameter" not in swb:
                raise ValidationError("missing", "sweep.parameter")
            vals = swb.get("values", "")
            if isinstance(vals, str):
                vals = [v for v in vals.replace(",", " ").split()]
            try:
                sweep = {"parameter": str(swb["parameter"]).strip(),
                         "values": [float(v) for v in vals]}
            except ValueError:
                raise ValidationError(f"not a list of numbers: {vals!r}", "sweep.values") from None

        cfg = cls(system, bath, coupling_sq, dyn, numerics, out, sweep)
        cfg.system_params()  # validate physics early
        cfg.spectral_density()
        cfg.quad_config()
        if dyn:
            BlochVector.from_array(dyn["v_init"]).validate("dynamics.v_init")
        return cfg

    @classmethod
    def load(cls, path) -> "RunConfig":
        path = Path(path)
        if not path.exists():
            raise ValidationError(f"no such file: {path}", "config")
        text = path.read_text()
        if path.suffix.lower() == ".json":
            try:
                data = json.loads(text)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"invalid JSON: {exc}", "config") from None
            return cls.from_sections(data.get("config", data))
        parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
        try:
            parser.read_string(text)
        except configparser.Error as exc:
            raise ValidationError(f"cannot parse: {exc}", "config") from None
        return cls.from_sections({s: dict(parser[s]) for s in parser.sections()})

    # -- derived objects ---------------------------------------------------------

    def system_params(self) -> SystemParams:
        beta = self.bath["beta"]
        try:
            if "epsilon" in self.system:
                return SystemParams.from_dqd(self.system["epsilon"], self.system["t_c"], beta,
                                             self.coupling_sq)
            return SystemParams(self.system["omega"], self.system["a1"], self.system["a3"],
                                beta, self.coupling_sq)
        except ValidationError as exc:
            raise _prefixed(exc, {"beta": "bath", "coupling_sq": "coupling"}) from None

    def spectral_density(self) -> SpectralDensity:
        params = {k: v for k, v in self.bath.items() if k not in ("model", "beta")}
        try:
            return from_config(self.bath["model"], **params)
        except ValidationError as exc:
            raise _prefixed(exc, {}, "bath") from None

    def quad_config(self) -> QuadConfig:
        try:
            return QuadConfig(**self.numerics)
        except (ValueError, TypeError) as exc:
            raise ValidationError(str(exc), "numerics") from None

    def with_override(self, path: str, value: float) -> "RunConfig":
        """Copy with one dotted parameter replaced (e.g. ``bath.beta``)."""
        section, _, key = path.partition(".")
        blocks = {"system": self.system, "bath": self.bath, "numerics": self.numerics}
        if section == "coupling" and key == "coupling_sq":
            new = replace(self, coupling_sq=float(value))
        elif section in blocks and key in blocks[section]:
            new = replace(self, **{section: {**blocks[section], key: float(value)}})
        else:
            raise ValidationError(f"unknown parameter {path!r}", "sweep.parameter")
        new.system_params()
        new.spectral_density()
        return new

    def as_dict(self) -> dict:
        out = {"system": dict(self.system), "bath": dict(self.bath),
               "coupling": {"coupling_sq": self.coupling_sq}}
        for name in ("dynamics", "numerics", "output", "sweep"):
            block = getattr(self, name)
            if block:
                out[name] = dict(block)
        return out


def _prefixed(exc: ValidationError, mapping: dict, default: Optional[str] = None):
    fld = exc.field or ""
    if "." in fld:
        return exc
    section = mapping.get(fld, default or "system")
    msg = str(exc).split(": ", 1)[-1]
    return ValidationError(msg, f"{section}.{fld}" if fld else section)

