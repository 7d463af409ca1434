"""Exception hierarchy shared across the package."""


class GhzlabError(Exception):
    """Base class for all package-specific errors."""


class ImaginaryResidual(GhzlabError):
    """An expectation value came out with a non-negligible imaginary part."""


class VisibilityOutOfRange(GhzlabError):
    """White-noise visibility must lie in [0, 1]."""


class PointOutsideQuantumRegion(GhzlabError):
    """A Mermin-plane point lies outside the quantum disc of radius 4."""


class MalformedTable(GhzlabError):
    """A correlation table block is negative or does not normalize."""


class ToleranceOutOfRange(GhzlabError):
    """Tolerance must be a positive number below 1."""


class RestartBudgetExhausted(GhzlabError):
    """Random-restart ascent failed to reach the certified optimum."""


class NoViolation(GhzlabError):
    """Bisection found no visibility at which the bound is violated."""
