"""Symmetric polyadic Cantor pre-fractal layer stacks.

All lengths are fractions of the initiator, whose width is fixed to 1.
Arithmetic stays exact (``fractions.Fraction``) whenever ``gamma`` and ``eps``
are rationals, and falls back to ``float`` otherwise.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Integral, Rational, Real

import numpy as np

from .errors import EpsOutOfRange, GammaOutOfRange, InvalidN, NegativeStage

# Segments narrower than this (in units of the initiator) are absorbed into
# their neighbours by canonicalize().
MERGE_TOL = 1e-14


class Kind(str, enum.Enum):
    WELL = "well"
    GAP = "gap"


@dataclass(frozen=True)
class Segment:
    width: Real
    kind: Kind


@dataclass(frozen=True)
class CantorParams:
    """A validated fractal recipe. Build instances with :func:`validate_params`."""

    N: int
    gamma: Real
    eps: Real
    S: int

    @property
    def n_side(self) -> int:
        """Wells in each edge group, floor(N/2)."""
        return self.N // 2

    @property
    def finest_well(self) -> Real:
        return self.gamma**self.S

    def with_eps(self, eps: Real) -> CantorParams:
        return validate_params(self.N, self.gamma, eps, self.S)

    def as_dict(self) -> dict:
        return {"N": self.N, "gamma": _num_repr(self.gamma), "eps": _num_repr(self.eps), "S": self.S}


@dataclass(frozen=True)
class LacunarityBounds:
    eps_min: Real
    eps_max: Real
    eps_reg: Real


@dataclass(frozen=True)
class LayerStack:
    segments: tuple[Segment, ...]
    stage: int | None = None
    params: CantorParams | None = None

    def __len__(self) -> int:
        return len(self.segments)

    def __iter__(self):
        return iter(self.segments)

    @cached_property
    def widths(self) -> np.ndarray:
        return np.array([float(s.width) for s in self.segments], dtype=np.float64)

    @cached_property
    def well_mask(self) -> np.ndarray:
        return np.array([s.kind is Kind.WELL for s in self.segments], dtype=np.uint8)

    @property
    def total_width(self) -> Real:
        return _sum([s.width for s in self.segments])

    @property
    def well_mass(self) -> Real:
        return _sum([s.width for s in self.segments if s.kind is Kind.WELL])

    @property
    def n_wells(self) -> int:
        return sum(1 for s in self.segments if s.kind is Kind.WELL)

    def reversed(self) -> LayerStack:
        return LayerStack(self.segments[::-1], self.stage, self.params)

    def concat(self, other: LayerStack) -> LayerStack:
        return LayerStack(self.segments + other.segments)

    def rows(self):
        """Yield ``(index, kind, width, x_start, x_end)`` left to right."""
        x = 0
        for i, seg in enumerate(self.segments):
            yield i, seg.kind.value, seg.width, x, x + seg.width
            x = x + seg.width

    def to_dict(self) -> dict:
        return {
            "stage": self.stage,
            "params": None if self.params is None else self.params.as_dict(),
            "segments": [
                {"index": i, "kind": kind, "width": float(w), "exact": _num_repr(w),
                 "x_start": float(x0), "x_end": float(x1)}
                for i, kind, w, x0, x1 in self.rows()
            ],
        }


def _num_repr(x):
    """JSON-friendly number: rationals as 'p/q' strings, everything else float."""
    if isinstance(x, Integral):
        return int(x)
    if isinstance(x, Fraction):
        return str(x)
    return float(x)


def _sum(values):
    if all(isinstance(v, Rational) for v in values):
        return sum(values, Fraction(0))
    return math.fsum(float(v) for v in values)


def _exactify(x):
    # ints become Fractions so that 1/N and friends stay exact
    if isinstance(x, Integral):
        return Fraction(int(x))
    return x


def _bounds(N: int, gamma: Real) -> LacunarityBounds:
    spare = 1 - N * gamma
    if N % 2 == 0:
        eps_max = spare / (N - 2)
    elif N == 3:
        # N = 3 has no internal gaps: eps never enters the geometry.
        eps_max = math.inf
    else:
        eps_max = spare / (N - 3)
    return LacunarityBounds(eps_min=0, eps_max=eps_max, eps_reg=spare / (N - 1))


def _check_n_gamma(N, gamma):
    if not isinstance(N, Integral) or isinstance(N, bool) or N < 3:
        raise InvalidN(f"N must be an integer >= 3, got {N!r}")
    if not (0 < gamma < Fraction(1, int(N))):
        raise GammaOutOfRange(f"gamma must satisfy 0 < gamma < 1/N = 1/{N}, got {float(gamma)!r}")


def validate_params(N: int, gamma: Real, eps: Real, S: int) -> CantorParams:
    """Check the non-overlap constraints and return a :class:`CantorParams`.

    Raises one of :class:`InvalidN`, :class:`GammaOutOfRange`,
    :class:`EpsOutOfRange` or :class:`NegativeStage`.
    """
    _check_n_gamma(N, gamma)
    if not isinstance(S, Integral) or S < 0:
        raise NegativeStage(f"stage S must be a non-negative integer, got {S!r}")
    gamma = _exactify(gamma)
    eps = _exactify(eps)
    bounds = _bounds(int(N), gamma)
    slack = 0 if isinstance(eps, Rational) and isinstance(gamma, Rational) else MERGE_TOL
    if not (eps >= 0 and eps <= bounds.eps_max + slack):
        raise EpsOutOfRange(eps, bounds.eps_max)
    return CantorParams(int(N), gamma, eps, int(S))


def epsilon_bounds(N: int, gamma: Real) -> LacunarityBounds:
    """Admissible lacunarity range for ``(N, gamma)``.

    ``eps_max`` is ``(1 - N gamma)/(N - 2)`` for even N and
    ``(1 - N gamma)/(N - 3)`` for odd N (infinite for N = 3);
    ``eps_reg = (1 - N gamma)/(N - 1)`` gives equal gaps and wells at stage 1.
    """
    _check_n_gamma(N, gamma)
    return _bounds(int(N), _exactify(gamma))


def _clamp(x, exact: bool):
    # float round-off (e.g. at eps = eps_max) must not leave slivers behind
    if not exact and x <= MERGE_TOL:
        return type(x)(0)
    return x


def generator(params: CantorParams) -> list[tuple[Kind, Real]]:
    """Stage-1 layout on a unit segment as ``(kind, relative width)`` pairs.

    In float mode gaps narrower than ``MERGE_TOL`` (relative to the parent
    segment) are set to zero, so they merge exactly at every stage.
    """
    N, g = params.N, params.gamma
    exact = isinstance(g, Rational) and isinstance(params.eps, Rational)
    e = _clamp(params.eps, exact)
    n = N // 2
    side = [(Kind.WELL, g)]
    for _ in range(n - 1):
        side += [(Kind.GAP, e), (Kind.WELL, g)]
    if N % 2 == 0:
        middle = [(Kind.GAP, _clamp(1 - N * g - (N - 2) * e, exact))]
    else:
        flank = _clamp((1 - N * g - (N - 3) * e) / 2 if N > 3 else (1 - N * g) / 2, exact)
        middle = [(Kind.GAP, flank), (Kind.WELL, g), (Kind.GAP, flank)]
    return side + middle + side[::-1]


def build_stage(params: CantorParams, canonical: bool = True) -> LayerStack:
    """Build the stage-S pre-fractal by self-similar substitution.

    Every well of stage S-1 is replaced by the generator scaled to its width;
    gaps are carried over untouched.
    """
    gen = generator(params)
    layers: list[tuple[Kind, Real]] = [(Kind.WELL, _exactify(1) if isinstance(params.gamma, Rational) else 1.0)]
    for _ in range(params.S):
        nxt = []
        for kind, w in layers:
            if kind is Kind.WELL:
                nxt.extend((k, f * w) for k, f in gen)
            else:
                nxt.append((kind, w))
        layers = nxt
    if not canonical:
        return LayerStack(tuple(Segment(w, k) for k, w in layers), params.S, params)
    # the generator already zeroed slivers, so only exact zeros merge here
    return LayerStack(_merge(layers, 0), params.S, params)


def _merge(layers, tol) -> tuple[Segment, ...]:
    # runs of (kind or None, widths); None marks a run of negligible segments only
    runs: list[list] = []
    for kind, w in layers:
        if w <= tol:
            kind = None
        if runs and (kind is None or runs[-1][0] is None or runs[-1][0] is kind):
            if runs[-1][0] is None:
                runs[-1][0] = kind
            runs[-1][1].append(w)
        else:
            runs.append([kind, [w]])
    if len(runs) == 1 and runs[0][0] is None:
        # the whole stack was negligible
        runs[0][0] = layers[0][0]
    return tuple(Segment(ws[0] if len(ws) == 1 else _sum(ws), kind) for kind, ws in runs)


def canonicalize(stack: LayerStack) -> LayerStack:
    """Drop negligible segments and merge adjacent segments of the same kind.

    A segment of width <= ``MERGE_TOL`` takes the kind of the run it sits in,
    so its width is absorbed rather than lost and the total is preserved.
    """
    if not stack.segments:
        return stack
    return LayerStack(_merge([(seg.kind, seg.width) for seg in stack.segments], MERGE_TOL), stack.stage, stack.params)


def similarity_dimension(params: CantorParams) -> float:
    """ln N / ln(1/gamma); independent of eps and S."""
    return math.log(params.N) / math.log(1 / float(params.gamma))
