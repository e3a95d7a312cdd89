"""JSON run configuration.

Numeric fields accept JSON numbers or strings holding exact rationals
(``"1/7"``) or decimals (``"0.5"``); strings are parsed as
:class:`fractions.Fraction` so that geometry merging stays exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real

from .errors import ParseError, ValidationError
from .geometry import CantorParams, validate_params
from .sweep import DEFAULT_FLOOR_DB, DEFAULT_HEIGHT, DEFAULT_PHI_MIN, DEFAULT_WIDTH, DEFAULT_WINDOW, default_phi_max

FORMATS = ("csv", "pgm", "json")


@dataclass(frozen=True)
class OutputSpec:
    format: str
    path: str


@dataclass(frozen=True)
class RunConfig:
    N: int
    gamma: Real
    S: int
    phi_v: Real
    eps: Real | None = None
    eps_sweep: bool = True
    phi_min: Real = DEFAULT_PHI_MIN
    phi_max: Real | None = None
    width: int = DEFAULT_WIDTH
    height: int = DEFAULT_HEIGHT
    floor_db: Real = DEFAULT_FLOOR_DB
    window: Real = DEFAULT_WINDOW
    eps_samples: int | None = None
    outputs: tuple[OutputSpec, ...] = field(default_factory=tuple)

    def geometry(self) -> CantorParams:
        """Validated params; a swept eps is pinned to 0 as the template value."""
        eps = 0 if self.eps is None else self.eps
        return validate_params(self.N, self.gamma, eps, self.S)

    @property
    def phi_range(self) -> tuple[float, float]:
        hi = default_phi_max(float(self.phi_v)) if self.phi_max is None else self.phi_max
        return float(self.phi_min), float(hi)


_KEYS = {
    "N", "gamma", "eps", "eps_sweep", "S", "phi_v", "phi_min", "phi_max",
    "width", "height", "floor_db", "window", "eps_samples", "outputs",
}


def parse_number(value, key: str = "value") -> Real:
    if isinstance(value, bool):
        raise ParseError("expected a number, got a boolean", f"key {key!r}")
    if isinstance(value, (int, float)):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"cannot read {value!r} as a number", f"key {key!r}") from None
    raise ParseError(f"expected a number, got {type(value).__name__}", f"key {key!r}")


def _integer(value, key):
    x = parse_number(value, key)
    if isinstance(x, float) and x.is_integer():
        x = int(x)
    if isinstance(x, Fraction) and x.denominator == 1:
        x = int(x)
    if not isinstance(x, int):
        raise ParseError(f"expected an integer, got {value!r}", f"key {key!r}")
    return x


def _outputs(value) -> tuple[OutputSpec, ...]:
    if not isinstance(value, list):
        raise ParseError("expected a list of {format, path} objects", "key 'outputs'")
    out = []
    for n, item in enumerate(value):
        ctx = f"key 'outputs'[{n}]"
        if not isinstance(item, dict) or set(item) != {"format", "path"}:
            raise ParseError("each output needs exactly 'format' and 'path'", ctx)
        fmt = str(item["format"]).lower()
        if fmt not in FORMATS:
            raise ParseError(f"unknown format {item['format']!r}; expected one of {FORMATS}", ctx)
        if not isinstance(item["path"], str) or not item["path"]:
            raise ParseError("path must be a non-empty string", ctx)
        out.append(OutputSpec(fmt, item["path"]))
    return tuple(out)


def config_from_dict(doc: dict) -> RunConfig:
    if not isinstance(doc, dict):
        raise ParseError("configuration must be a JSON object")
    unknown = sorted(set(doc) - _KEYS)
    if unknown:
        raise ParseError(f"unknown keys {unknown}", f"key {unknown[0]!r}")
    for key in ("N", "gamma", "S", "phi_v"):
        if key not in doc:
            raise ParseError("missing required key", f"key {key!r}")
    kw: dict = {
        "N": _integer(doc["N"], "N"),
        "gamma": parse_number(doc["gamma"], "gamma"),
        "S": _integer(doc["S"], "S"),
        "phi_v": parse_number(doc["phi_v"], "phi_v"),
    }
    if doc.get("eps") is not None:
        kw["eps"] = parse_number(doc["eps"], "eps")
    sweep = doc.get("eps_sweep", "eps" not in kw)
    if not isinstance(sweep, bool):
        raise ParseError("expected true or false", "key 'eps_sweep'")
    kw["eps_sweep"] = sweep
    for key in ("phi_min", "phi_max", "floor_db", "window"):
        if doc.get(key) is not None:
            kw[key] = parse_number(doc[key], key)
    for key in ("width", "height", "eps_samples"):
        if doc.get(key) is not None:
            kw[key] = _integer(doc[key], key)
    if "outputs" in doc:
        kw["outputs"] = _outputs(doc["outputs"])
    cfg = RunConfig(**kw)
    validate_config(cfg)
    return cfg


def validate_config(cfg: RunConfig) -> RunConfig:
    cfg.geometry()
    lo, hi = cfg.phi_range
    if not 0 < lo < hi:
        raise ValidationError(f"phi range must satisfy 0 < phi_min < phi_max, got ({lo}, {hi})")
    if cfg.phi_v < 0:
        raise ValidationError(f"phi_v must be >= 0, got {float(cfg.phi_v)}")
    if cfg.width < 2 or cfg.height < 2:
        raise ValidationError(f"grid must be at least 2x2, got {cfg.width}x{cfg.height}")
    if not cfg.floor_db < 0:
        raise ValidationError("floor_db must be negative")
    if not cfg.window > 0:
        raise ValidationError("window must be positive")
    if cfg.eps_samples is not None and cfg.eps_samples < 1:
        raise ValidationError("eps_samples must be >= 1")
    return cfg


def parse_config(text: str) -> RunConfig:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", f"line {exc.lineno}, column {exc.colno}") from None
    return config_from_dict(doc)


def _dump_number(x):
    if isinstance(x, Fraction):
        return str(x)
    return x


def serialize(cfg: RunConfig) -> str:
    doc = {
        "N": cfg.N,
        "gamma": _dump_number(cfg.gamma),
        "eps": _dump_number(cfg.eps),
        "eps_sweep": cfg.eps_sweep,
        "S": cfg.S,
        "phi_v": _dump_number(cfg.phi_v),
        "phi_min": _dump_number(cfg.phi_min),
        "phi_max": _dump_number(cfg.phi_max),
        "width": cfg.width,
        "height": cfg.height,
        "floor_db": _dump_number(cfg.floor_db),
        "window": _dump_number(cfg.window),
        "eps_samples": cfg.eps_samples,
        "outputs": [{"format": o.format, "path": o.path} for o in cfg.outputs],
    }
    return json.dumps(doc, indent=2) + "\n"
