"""Analytic positions of the reflectionless curves in a twist plot.

Three families, each an implicit equation in the normalized energy phi:

* vertical:  sqrt(phi^2 + phi_V^2) = i pi                         (exact)
* arc:       sqrt(phi^2 + phi_V^2) + (eps/gamma)^S phi = (i + j/n) pi
* striation: (N - n) sqrt(phi^2 + phi_V^2)
             + (gamma^-S - N - (n - 1)(eps/gamma)^S) phi = (2i + 1) pi/2

with n = floor(N/2). Arc and striation positions rely on k0 ~ k1, i.e.
phi >> phi_V, and are exact in the interference argument only for even N.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from scipy.optimize import brentq

from .errors import BadCoefficients, NegativeB
from .geometry import CantorParams, epsilon_bounds


class Family(str, enum.Enum):
    VERTICAL = "vertical"
    ARC = "arc"
    STRIATION = "striation"


@dataclass(frozen=True)
class NullPrediction:
    family: Family
    i: int
    j: int | None
    eps: float | None
    phi: float
    low_energy: bool = False

    @property
    def key(self) -> tuple:
        return (self.family, self.i, self.j)


@dataclass(frozen=True)
class NullEquation:
    """A sqrt(phi^2 + phi_V^2) + B phi = C, increasing in phi for A + B > 0."""

    A: float
    B: float
    C: float
    phi_V: float

    def lhs(self, phi: float) -> float:
        return self.A * math.hypot(phi, self.phi_V) + self.B * phi

    def bracket(self) -> tuple[float, float]:
        # (A+B) phi <= lhs(phi) <= (A+B) phi + A phi_V
        s = self.A + self.B
        return (self.C - self.A * self.phi_V) / s, self.C / s


@dataclass
class NullCurve:
    family: Family
    i: int
    j: int | None
    points: list[tuple[float, float]] = field(default_factory=list)


def _flag(phi: float, phi_V: float) -> bool:
    return phi < 2 * phi_V


def solve_null_equation(eq: NullEquation) -> float | None:
    """Unique positive root, or ``None`` when C <= A phi_V leaves no root."""
    if not eq.A > 0 or not eq.C > 0 or eq.B < 0:
        raise BadCoefficients(f"need A > 0, B >= 0, C > 0; got A={eq.A}, B={eq.B}, C={eq.C}")
    if eq.C <= eq.A * eq.phi_V:
        return None
    lo, hi = eq.bracket()
    if hi - lo <= 1e-15 * hi:
        return hi
    f = lambda phi: eq.lhs(phi) - eq.C
    if f(lo) >= 0:
        return lo
    if f(hi) <= 0:
        return hi
    return brentq(f, lo, hi, xtol=1e-14, rtol=1e-15)


def vertical_nulls(phi_V: float, phi_max: float, eps: float | None = None) -> list[NullPrediction]:
    out = []
    i = 1
    while True:
        c = i * math.pi
        if c > phi_V:
            phi = math.sqrt((c - phi_V) * (c + phi_V))
            if phi > phi_max:
                break
            out.append(NullPrediction(Family.VERTICAL, i, None, eps, phi, _flag(phi, phi_V)))
        i += 1
    return out


def _ratio(params: CantorParams, eps) -> float:
    return (float(eps) / float(params.gamma)) ** params.S


def arc_equation(params: CantorParams, phi_V: float, eps, i: int, j: int) -> NullEquation:
    n = params.n_side
    return NullEquation(1.0, _ratio(params, eps), (i + j / n) * math.pi, phi_V)


def striation_equation(params: CantorParams, phi_V: float, eps, i: int) -> NullEquation:
    N, n = params.N, params.n_side
    B = float(params.gamma) ** -params.S - N - (n - 1) * _ratio(params, eps)
    if B < 0:
        raise NegativeB(f"striation coefficient B={B!r} < 0 for N={N}, gamma={float(params.gamma)}, eps={float(eps)}")
    return NullEquation(float(N - n), B, (2 * i + 1) * math.pi / 2, phi_V)


MAX_PREDICTIONS = 100_000


def _enumerate(make, indices, phi_max, family, phi_V, eps):
    """Walk index tuples in order until the smallest admissible root passes phi_max."""
    out = []
    for count, idx in enumerate(indices):
        if count >= MAX_PREDICTIONS:
            raise ValueError(f"more than {MAX_PREDICTIONS} {family.value} nulls below phi_max={phi_max}")
        eq = make(*idx)
        lo, _ = eq.bracket()
        if lo > phi_max:
            break
        phi = solve_null_equation(eq)
        if phi is not None and phi <= phi_max:
            i, j = idx if len(idx) == 2 else (idx[0], None)
            out.append(NullPrediction(family, i, j, float(eps), phi, _flag(phi, phi_V)))
    return out


def _arc_indices(n):
    i = 0
    while True:
        for j in range(1, n):
            yield i, j
        i += 1


def _striation_indices():
    i = 0
    while True:
        yield (i,)
        i += 1


def arc_nulls(params: CantorParams, phi_V: float, eps, phi_max: float) -> list[NullPrediction]:
    """Arc nulls; none unless each edge group holds at least two wells (and S >= 1)."""
    n = params.n_side
    if n < 2 or params.S == 0:
        return []
    make = lambda i, j: arc_equation(params, phi_V, eps, i, j)
    return _enumerate(make, _arc_indices(n), phi_max, Family.ARC, phi_V, eps)


def striation_nulls(params: CantorParams, phi_V: float, eps, phi_max: float) -> list[NullPrediction]:
    """Striation nulls; none at stage 0, where the stack is a single well."""
    if params.S == 0:
        return []
    make = lambda i: striation_equation(params, phi_V, eps, i)
    return _enumerate(make, _striation_indices(), phi_max, Family.STRIATION, phi_V, eps)


def predict_all(params: CantorParams, phi_V: float, eps, phi_max: float) -> list[NullPrediction]:
    return (vertical_nulls(phi_V, phi_max, float(eps))
            + arc_nulls(params, phi_V, eps, phi_max)
            + striation_nulls(params, phi_V, eps, phi_max))


def eps_grid(params: CantorParams, samples: int) -> list[float]:
    """``samples`` evenly spaced lacunarities covering [0, eps_max]."""
    eps_max = epsilon_bounds(params.N, params.gamma).eps_max
    if math.isinf(eps_max):
        raise ValueError("eps_max is unbounded for N = 3; lacunarity does not enter the geometry")
    if samples < 2:
        return [0.0]
    return [float(eps_max) * k / (samples - 1) for k in range(samples)]


def null_curves(params: CantorParams, phi_V: float, eps_samples, phi_max: float) -> list[NullCurve]:
    """Polylines (eps, phi) per family and index across ``eps_samples``.

    Indices whose root leaves (0, phi_max] at some eps yield truncated lines.
    """
    curves: dict[tuple, NullCurve] = {}
    for eps in eps_samples:
        for pred in predict_all(params, phi_V, eps, phi_max):
            curve = curves.setdefault(pred.key, NullCurve(pred.family, pred.i, pred.j))
            curve.points.append((float(eps), pred.phi))
    order = {Family.VERTICAL: 0, Family.ARC: 1, Family.STRIATION: 2}
    return sorted(curves.values(), key=lambda c: (order[c.family], c.i, c.j or 0))


def curve_predictions(curves, phi_V: float) -> list[NullPrediction]:
    """Flatten polylines back into individual predictions."""
    return [NullPrediction(c.family, c.i, c.j, eps, phi, _flag(phi, phi_V))
            for c in curves for eps, phi in c.points]
