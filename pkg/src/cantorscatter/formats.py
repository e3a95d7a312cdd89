"""CSV, JSON and binary PGM writers for every CLI product.

Numbers are written in their shortest round-trip decimal form so that golden
files stay stable across platforms.
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .geometry import LayerStack
from .sweep import TwistGrid, to_decibels, to_gray8


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def csv_lines(header, rows) -> str:
    out = [",".join(header)]
    out += [",".join(cell if isinstance(cell, str) else fmt(cell) for cell in row) for row in rows]
    return "\n".join(out) + "\n"


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, default=_json_default) + "\n"


def _json_default(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, np.generic):
        return x.item()
    raise TypeError(f"not JSON serializable: {type(x).__name__}")


def geometry_csv(stack: LayerStack) -> str:
    return csv_lines(["index", "kind", "width", "x_start", "x_end"], stack.rows())


def geometry_json(stack: LayerStack) -> str:
    return dumps(stack.to_dict())


def scatter_csv(records) -> str:
    return csv_lines(["phi", "R", "T"], [(phi, r.R, r.T) for phi, r in records])


def scatter_json(records) -> str:
    def pair(z):
        return [float(z.real), float(z.imag)]

    doc = [
        {
            "phi": phi, "R": r.R, "T": r.T,
            "M11": pair(r.M[0, 0]), "M12": pair(r.M[0, 1]),
            "M21": pair(r.M[1, 0]), "M22": pair(r.M[1, 1]),
        }
        for phi, r in records
    ]
    return dumps(doc)


def nulls_csv(predictions) -> str:
    rows = [(p.family.value, p.i, p.j, p.eps, p.phi, p.low_energy) for p in predictions]
    return csv_lines(["family", "i", "j", "eps", "phi", "low_energy_flag"], rows)


def nulls_json(predictions) -> str:
    return dumps([
        {"family": p.family.value, "i": p.i, "j": p.j, "eps": p.eps, "phi": p.phi,
         "low_energy_flag": p.low_energy}
        for p in predictions
    ])


def verify_csv(checks) -> str:
    rows = [
        (c.prediction.family.value, c.prediction.i, c.prediction.j, c.prediction.eps,
         c.prediction.phi, c.phi_at_min, c.R_min, c.residual)
        for c in checks
    ]
    return csv_lines(["family", "i", "j", "eps", "phi_pred", "phi_min", "R_min", "residual"], rows)


def twist_csv(grid: TwistGrid) -> str:
    """First row carries the phi axis, first column the eps axis."""
    header = ["eps\\phi"] + [fmt(p) for p in grid.phi_axis]
    rows = ([e, *row] for e, row in zip(grid.eps_axis, grid.values))
    return csv_lines(header, rows)


def pgm_bytes(img: np.ndarray) -> bytes:
    img = np.ascontiguousarray(img, dtype=np.uint8)
    h, w = img.shape
    return b"P5\n%d %d\n255\n" % (w, h) + img.tobytes()


def twist_pgm(grid: TwistGrid, floor_db: float, flip: bool = False) -> bytes:
    return pgm_bytes(to_gray8(to_decibels(grid, floor_db), flip=flip))


def read_pgm(data: bytes) -> np.ndarray:
    """Parse a binary 8-bit PGM (no comment lines)."""
    parts = data.split(maxsplit=4)
    if parts[0] != b"P5" or int(parts[3]) != 255:
        raise ValueError("not an 8-bit binary PGM")
    w, h = int(parts[1]), int(parts[2])
    body = parts[4]
    if len(body) != w * h:
        raise ValueError(f"expected {w * h} pixel bytes, found {len(body)}")
    return np.frombuffer(body, dtype=np.uint8).reshape(h, w)


def twist_meta(grid: TwistGrid, floor_db: float, flip: bool = False) -> str:
    p = grid.params
    return dumps({
        "params": {"N": p.N, "gamma": p.as_dict()["gamma"], "S": p.S},
        "phi_v": grid.phi_V,
        "axes": {
            "phi": {"min": float(grid.phi_axis[0]), "max": float(grid.phi_axis[-1]), "count": len(grid.phi_axis)},
            "eps": {"min": float(grid.eps_axis[0]), "max": float(grid.eps_axis[-1]), "count": len(grid.eps_axis)},
        },
        "floor_db": floor_db,
        "raster_row0": "eps_max" if not flip else "eps_min",
        "grid_sha256": grid.digest(),
    })
