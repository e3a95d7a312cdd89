"""Quantum scattering on symmetric polyadic Cantor superlattices.

Builds pre-fractal well/gap stacks, solves them with 2x2 transfer matrices,
sweeps reflection over energy and lacunarity (twist plots) and predicts the
vertical, arc and striation nulls in closed form.
"""

from .errors import CantorError, ValidationError
from .geometry import (
    CantorParams,
    Kind,
    LacunarityBounds,
    LayerStack,
    Segment,
    build_stage,
    canonicalize,
    epsilon_bounds,
    similarity_dimension,
    validate_params,
)
from .kernels import BACKEND
from .nulls import (
    Family,
    NullCurve,
    NullEquation,
    NullPrediction,
    arc_nulls,
    null_curves,
    solve_null_equation,
    striation_nulls,
    vertical_nulls,
)
from .sweep import NullVerification, TwistGrid, to_decibels, twist, verify_nulls
from .tmm import (
    EnergyPoint,
    ScatterResult,
    bloch_phase,
    interface_matrix,
    matrix_power_bloch,
    propagation_matrix,
    scatter,
    trace_of_cell,
    transfer_matrix,
    wavenumbers,
)

__version__ = "0.1.0"
