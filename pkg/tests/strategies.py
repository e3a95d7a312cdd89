"""Hypothesis strategies shared by the property tests."""

from fractions import Fraction

from hypothesis import strategies as st

from cantorscatter import epsilon_bounds, validate_params


@st.composite
def exact_params(draw, N=st.integers(3, 8), S=st.integers(0, 3)):
    """Rational (N, gamma, eps, S) with eps anywhere in [0, eps_max], endpoints included."""
    n = draw(N)
    m = draw(st.integers(2, 12))
    gamma = Fraction(draw(st.integers(1, m - 1)), m * n)
    eps_max = epsilon_bounds(n, gamma).eps_max
    if eps_max == float("inf"):
        eps = Fraction(draw(st.integers(0, 5)), 7)
    else:
        eps = eps_max * Fraction(draw(st.integers(0, 12)), 12)
    return validate_params(n, gamma, eps, draw(S))


@st.composite
def float_params(draw, N=st.integers(3, 8), S=st.integers(0, 3), fill=st.floats(0.01, 0.999)):
    n = draw(N)
    gamma = draw(fill) / n
    eps_max = epsilon_bounds(n, gamma).eps_max
    frac = draw(st.floats(0, 1))
    eps = frac * 0.3 if eps_max == float("inf") else frac * eps_max
    return validate_params(n, gamma, eps, draw(S))
