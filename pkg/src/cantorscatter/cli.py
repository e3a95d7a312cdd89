"""Command-line entry point: ``cantorscatter <subcommand> [flags]``.

Exit status is 0 on success, 1 on invalid input, 2 on I/O failure.
Nothing here draws random numbers, so repeated runs are byte-identical.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import os
import sys
from pathlib import Path

from . import formats
from .config import OutputSpec, RunConfig, parse_config, parse_number, validate_config
from .errors import CantorError, ValidationError
from .geometry import build_stage, epsilon_bounds, similarity_dimension
from .nulls import curve_predictions, eps_grid, null_curves
from .sweep import twist, verify_nulls
from .tmm import EnergyPoint, scatter


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        _complain(message)
        raise SystemExit(1)


def _complain(message: str) -> None:
    prefix = "error:"
    if sys.stderr.isatty() and "NO_COLOR" not in os.environ:
        prefix = "\033[31merror:\033[0m"
    print(f"{prefix} {message}", file=sys.stderr)


def _number(text):
    try:
        return parse_number(text)
    except CantorError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_geometry(p):
    g = p.add_argument_group("geometry")
    g.add_argument("--config", type=Path, help="JSON run configuration; flags override it")
    g.add_argument("--N", type=int, dest="N")
    g.add_argument("--gamma", type=_number, help="scale factor, e.g. 1/7")
    g.add_argument("--eps", type=_number, help="lacunarity (absolute stage-1 gap width)")
    g.add_argument("--stage", "-S", type=int, dest="S", help="pre-fractal stage (default 1)")
    g.add_argument("--phiv", type=_number, dest="phi_v", help="dimensionless well depth (default 1/2)")
    g.add_argument("--seedless", action="store_true", help="accepted for scripts; runs are always deterministic")


def _add_grid(p):
    p.add_argument("--width", type=int)
    p.add_argument("--height", type=int)
    p.add_argument("--phi-min", type=_number, dest="phi_min")
    p.add_argument("--phi-max", type=_number, dest="phi_max")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cantorscatter", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("geometry", help="print the layer stack")
    _add_geometry(p)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", type=Path)

    p = sub.add_parser("scatter", help="R and T at given energies")
    _add_geometry(p)
    p.add_argument("--phi", type=_number, nargs="+", required=True)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", type=Path)

    p = sub.add_parser("twist", help="reflection twist plot over (phi, eps)")
    _add_geometry(p)
    _add_grid(p)
    p.add_argument("--floor-db", type=_number, dest="floor_db")
    p.add_argument("--flip", action="store_true", help="put eps = 0 on the top raster row")
    p.add_argument("--out", type=Path, action="append", default=[],
                   help="output file; format from the suffix (.pgm, .csv, .json); repeatable")
    p.add_argument("--no-meta", action="store_true", help="skip the JSON sidecar")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("nulls", help="analytic null curves")
    _add_geometry(p)
    p.add_argument("--eps-samples", type=int, dest="eps_samples")
    p.add_argument("--phi-max", type=_number, dest="phi_max")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", type=Path)

    p = sub.add_parser("verify", help="check predicted nulls against numerical minima")
    _add_geometry(p)
    p.add_argument("--eps-samples", type=int, dest="eps_samples")
    p.add_argument("--phi-max", type=_number, dest="phi_max")
    p.add_argument("--window", type=_number)
    p.add_argument("--out", type=Path)

    p = sub.add_parser("dimension", help="similarity dimension ln N / ln(1/gamma)")
    _add_geometry(p)
    return parser


_CONFIG_FIELDS = {f.name for f in dataclasses.fields(RunConfig)}


def _resolve(args) -> RunConfig:
    """Merge --config with explicit flags (flags win)."""
    if args.config is not None:
        cfg = parse_config(args.config.read_text(encoding="utf-8"))
    else:
        missing = [flag for flag, key in (("--N", "N"), ("--gamma", "gamma")) if getattr(args, key) is None]
        if missing:
            raise ValidationError(f"missing {', '.join(missing)} (or pass --config)")
        cfg = RunConfig(N=args.N, gamma=args.gamma, S=1, phi_v=0.5)
    over = {k: v for k, v in vars(args).items() if k in _CONFIG_FIELDS and v is not None}
    if "eps" in over:
        over["eps_sweep"] = False
    cfg = dataclasses.replace(cfg, **over)
    return validate_config(cfg)


def _emit(text_or_bytes, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text_or_bytes)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(text_or_bytes, bytes):
        path.write_bytes(text_or_bytes)
    else:
        path.write_text(text_or_bytes, encoding="utf-8", newline="\n")


def _fixed_params(cfg: RunConfig):
    if cfg.eps is None:
        raise ValidationError("this command needs a fixed --eps")
    return cfg.geometry()


def _eps_list(cfg: RunConfig, params, default_samples: int) -> list[float]:
    if cfg.eps_samples is None and cfg.eps is not None and not cfg.eps_sweep:
        return [float(cfg.eps)]
    return eps_grid(params, cfg.eps_samples or default_samples)


def cmd_geometry(args, cfg):
    stack = build_stage(_fixed_params(cfg))
    _emit(formats.geometry_json(stack) if args.json else formats.geometry_csv(stack), args.out)


def cmd_scatter(args, cfg):
    stack = build_stage(_fixed_params(cfg))
    records = []
    for phi in args.phi:
        point = EnergyPoint.for_stack(stack, float(phi), float(cfg.phi_v))
        records.append((float(phi), scatter(stack, point)))
    _emit(formats.scatter_json(records) if args.json else formats.scatter_csv(records), args.out)


def cmd_twist(args, cfg):
    outputs = [OutputSpec(p.suffix.lstrip(".").lower(), str(p)) for p in args.out] or list(cfg.outputs)
    if not outputs:
        raise ValidationError("twist needs at least one --out (or 'outputs' in the config)")
    for o in outputs:
        if o.format not in formats_by_name:
            raise ValidationError(f"cannot infer output format for {o.path!r}; use .pgm, .csv or .json")
    params = cfg.geometry()
    grid = twist(params, float(cfg.phi_v), cfg.phi_range, cfg.width, cfg.height, workers=args.workers)
    floor = float(cfg.floor_db)
    wrote_meta = False
    for o in outputs:
        if o.format == "json":
            wrote_meta = True
        _emit(formats_by_name[o.format](grid, floor, args.flip), Path(o.path))
    if not wrote_meta and not args.no_meta:
        _emit(formats.twist_meta(grid, floor, args.flip), Path(outputs[0].path).with_suffix(".json"))


formats_by_name = {
    "pgm": formats.twist_pgm,
    "csv": lambda grid, floor, flip: formats.twist_csv(grid),
    "json": formats.twist_meta,
}


def cmd_nulls(args, cfg):
    params = cfg.geometry()
    phi_max = cfg.phi_range[1]
    curves = null_curves(params, float(cfg.phi_v), _eps_list(cfg, params, 200), phi_max)
    preds = curve_predictions(curves, float(cfg.phi_v))
    _emit(formats.nulls_json(preds) if args.json else formats.nulls_csv(preds), args.out)


def cmd_verify(args, cfg):
    params = cfg.geometry()
    window = float(cfg.window)
    phi_max = cfg.phi_range[1]
    # keep every scan window inside (0, phi_max]
    curves = null_curves(params, float(cfg.phi_v), _eps_list(cfg, params, 5), phi_max - window)
    preds = [p for p in curve_predictions(curves, float(cfg.phi_v)) if p.phi > window]
    checks = verify_nulls(params, float(cfg.phi_v), preds, window, phi_max)
    _emit(formats.verify_csv(checks), args.out)


def cmd_dimension(args, cfg):
    params = cfg.geometry()
    bounds = epsilon_bounds(params.N, params.gamma)
    eps_max = "inf" if math.isinf(bounds.eps_max) else formats.fmt(bounds.eps_max)
    print(f"D={formats.fmt(similarity_dimension(params))} eps_max={eps_max} eps_reg={formats.fmt(bounds.eps_reg)}")


COMMANDS = {
    "geometry": cmd_geometry,
    "scatter": cmd_scatter,
    "twist": cmd_twist,
    "nulls": cmd_nulls,
    "verify": cmd_verify,
    "dimension": cmd_dimension,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _resolve(args)
        COMMANDS[args.command](args, cfg)
    except (CantorError, ValueError) as exc:
        _complain(str(exc))
        return 1
    except OSError as exc:
        _complain(f"{exc.filename or ''}: {exc.strerror or exc}")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
