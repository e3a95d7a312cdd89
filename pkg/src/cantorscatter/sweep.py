"""Twist plots: reflection over the (phi, eps) plane, plus null verification."""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import CantorError, WindowOutOfRange
from .geometry import CantorParams, build_stage, epsilon_bounds
from .nulls import NullPrediction
from .tmm import reflectance

DEFAULT_WIDTH = 600
DEFAULT_HEIGHT = 400
DEFAULT_PHI_MIN = 0.02
DEFAULT_FLOOR_DB = -60.0
DEFAULT_WINDOW = 0.15


def default_phi_max(phi_V: float) -> float:
    """Energy of the third vertical null, sqrt((3 pi)^2 - phi_V^2)."""
    return math.sqrt((3 * math.pi) ** 2 - phi_V**2)


@dataclass(frozen=True)
class TwistGrid:
    phi_axis: np.ndarray
    eps_axis: np.ndarray
    values: np.ndarray  # (H, W); row r is eps_axis[r]
    params: CantorParams
    phi_V: float

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def digest(self) -> str:
        return hashlib.sha256(np.ascontiguousarray(self.values, dtype="<f8").tobytes()).hexdigest()


@dataclass(frozen=True)
class NullVerification:
    prediction: NullPrediction
    phi_at_min: float
    R_min: float
    residual: float
    interior: bool  # False when the descent ran into the window edge


def _row(params: CantorParams, eps: float, phi: np.ndarray, phi_V: float) -> np.ndarray:
    try:
        stack = build_stage(params.with_eps(eps))
        return reflectance(stack, phi, phi_V)
    except CantorError as exc:
        raise type(exc)(f"twist row eps={eps!r}: {exc}") from exc


def twist(
    params: CantorParams,
    phi_V: float,
    phi_range: tuple[float, float] | None = None,
    width: int = DEFAULT_WIDTH,
    height: int = DEFAULT_HEIGHT,
    eps_range: tuple[float, float] | None = None,
    workers: int = 1,
) -> TwistGrid:
    """Evaluate R on a uniform ``height x width`` grid over (eps, phi).

    ``params.eps`` is ignored; eps spans ``eps_range`` (default [0, eps_max]).
    Rows are independent, so ``workers > 1`` shards them over threads
    without changing a single bit of the result.
    """
    if width < 2 or height < 2:
        raise ValueError("twist grid needs width, height >= 2")
    if phi_range is None:
        phi_range = (DEFAULT_PHI_MIN, default_phi_max(phi_V))
    phi_min, phi_max = phi_range
    if not 0 < phi_min < phi_max:
        raise ValueError(f"phi range must satisfy 0 < min < max, got {phi_range}")
    if eps_range is None:
        eps_max = epsilon_bounds(params.N, params.gamma).eps_max
        if math.isinf(eps_max):
            raise ValueError("N = 3 has no finite eps_max; pass an explicit eps_range")
        eps_range = (0.0, float(eps_max))
    phi_axis = np.linspace(phi_min, phi_max, width)
    eps_axis = np.linspace(eps_range[0], eps_range[1], height)
    values = np.empty((height, width))

    def fill(r):
        values[r] = _row(params, float(eps_axis[r]), phi_axis, phi_V)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill, range(height)))
    else:
        for r in range(height):
            fill(r)
    return TwistGrid(phi_axis, eps_axis, values, params, phi_V)


def to_decibels(grid, floor_db: float = DEFAULT_FLOOR_DB) -> np.ndarray:
    """Map R to [0, 1]: 0 (black) at or below ``floor_db``, 1 (white) at R = 1."""
    if not floor_db < 0:
        raise ValueError("floor_db must be negative")
    R = grid.values if isinstance(grid, TwistGrid) else np.asarray(grid, dtype=float)
    with np.errstate(divide="ignore"):
        d = 10 * np.log10(R)
    d = np.maximum(np.nan_to_num(d, nan=floor_db, neginf=floor_db), floor_db)
    return (d - floor_db) / -floor_db


def to_gray8(display: np.ndarray, flip: bool = False) -> np.ndarray:
    """8-bit raster; by default row 0 of the grid (eps = 0) ends up at the bottom."""
    img = np.rint(np.clip(display, 0, 1) * 255).astype(np.uint8)
    return img if flip else img[::-1]


def dark_columns(grid: TwistGrid, count: int = 3) -> list[int]:
    """The ``count`` darkest dark lines along phi.

    Columns are scored by their mean unclipped 10 log10 R over eps; only
    local minima of that profile qualify, so one null line counts once.
    """
    with np.errstate(divide="ignore"):
        score = (10 * np.log10(np.maximum(grid.values, 1e-300))).mean(axis=0)
    cand = local_minima(score)
    if score[0] < score[1]:
        cand = np.append(cand, 0)
    if score[-1] < score[-2]:
        cand = np.append(cand, len(score) - 1)
    order = sorted(cand.tolist(), key=lambda c: (score[c], c))
    return sorted(order[:count])


def local_minima(values: np.ndarray) -> np.ndarray:
    """Interior indices where a 1-D profile is not above either neighbour."""
    v = np.asarray(values)
    return np.flatnonzero((v[1:-1] <= v[:-2]) & (v[1:-1] <= v[2:])) + 1


def _descend(R: np.ndarray, k: int) -> int:
    while True:
        left = R[k - 1] if k > 0 else math.inf
        right = R[k + 1] if k < len(R) - 1 else math.inf
        if left < R[k] and left <= right:
            k -= 1
        elif right < R[k]:
            k += 1
        else:
            return k


def verify_nulls(
    params: CantorParams,
    phi_V: float,
    predictions,
    window: float = DEFAULT_WINDOW,
    phi_max: float | None = None,
    samples: int = 401,
) -> list[NullVerification]:
    """Locate the minimum of R(phi) reached by descending from each prediction.

    R is sampled on ``samples`` points spanning ``phi +/- window`` (the centre
    sample is the prediction itself), the descent is followed on the samples,
    and the minimum is refined on the bracketing cell to 1e-10 in phi.
    """
    if not window > 0:
        raise WindowOutOfRange(f"window must be positive, got {window!r}")
    samples = max(int(samples), 201) | 1
    out = []
    stacks: dict[float, object] = {}
    for pred in predictions:
        if pred.phi - window <= 0 or (phi_max is not None and pred.phi + window > phi_max):
            raise WindowOutOfRange(
                f"window [{pred.phi - window:.6g}, {pred.phi + window:.6g}] leaves (0, {phi_max}]")
        eps = float(pred.eps if pred.eps is not None else params.eps)
        stack = stacks.get(eps)
        if stack is None:
            stack = stacks[eps] = build_stage(params.with_eps(eps))
        x = np.linspace(pred.phi - window, pred.phi + window, samples)
        mid = samples // 2
        x[mid] = pred.phi
        R = reflectance(stack, x, phi_V)
        k = _descend(R, mid)
        interior = 0 < k < samples - 1
        if interior:
            res = minimize_scalar(lambda t: float(reflectance(stack, [t], phi_V)[0]),
                                  bounds=(x[k - 1], x[k + 1]), method="bounded",
                                  options={"xatol": 1e-10})
            phi_min, r_min = float(res.x), float(res.fun)
            if r_min > R[k]:
                phi_min, r_min = float(x[k]), float(R[k])
        else:
            phi_min, r_min = float(x[k]), float(R[k])
        out.append(NullVerification(pred, phi_min, r_min, abs(phi_min - pred.phi), interior))
    return out
