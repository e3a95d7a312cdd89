"""Exception hierarchy.

Everything raised on bad input derives from :class:`CantorError`, so the CLI
can map the whole family to exit code 1.
"""


class CantorError(ValueError):
    pass


class ValidationError(CantorError):
    """A Cantor recipe (N, gamma, eps, S) or run configuration is invalid."""


class InvalidN(ValidationError):
    pass


class GammaOutOfRange(ValidationError):
    pass


class EpsOutOfRange(ValidationError):
    def __init__(self, eps, eps_max):
        self.eps = eps
        self.eps_max = eps_max
        super().__init__(f"eps={float(eps)!r} outside the allowed interval [0, {float(eps_max)!r}]")


class NegativeStage(ValidationError):
    pass


class NonPositiveEnergy(CantorError):
    pass


class ZeroWavenumber(CantorError):
    pass


class NegativeWidth(CantorError):
    pass


class NonUnimodular(CantorError):
    pass


class BadCoefficients(CantorError):
    pass


class NegativeB(CantorError):
    pass


class WindowOutOfRange(CantorError):
    pass


class ParseError(CantorError):
    """Malformed configuration document; ``context`` names the line or key."""

    def __init__(self, message, context=None):
        self.context = context
        if context is not None:
            message = f"{message} ({context})"
        super().__init__(message)
