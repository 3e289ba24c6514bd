"""Exception hierarchy.

Every error carries a short machine-readable ``code`` so the command line
front end can report it without parsing messages.
"""


class InfoGeoError(Exception):
    code = "error"


class DomainError(InfoGeoError, ValueError):
    """Arguments outside the region where a quantity is defined."""

    code = "domain"


class NotSPDError(DomainError):
    code = "not-spd"


class DegenerateMetricError(DomainError):
    """The unified metric with alpha == -1/(2n) is not a metric."""

    code = "degenerate-metric"


class NotRiemannianError(DomainError):
    """Distances and lengths requested for a semi-Riemannian metric."""

    code = "not-riemannian"


class FisherNonexistenceError(DomainError):
    """The Fisher information integral diverges (p >= 2)."""

    code = "fisher-nonexistent"


class ParseError(DomainError):
    """Malformed input document; ``path`` locates the offending field."""

    code = "parse"

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class UsageError(InfoGeoError):
    code = "usage"


class NumericalError(InfoGeoError, ArithmeticError):
    code = "numerical"


class NonConvergenceError(NumericalError):
    code = "non-convergence"


class StepSizeError(NumericalError):
    """A finite-difference step pushed D out of the SPD cone."""

    code = "step-size"


class EmbeddingError(NumericalError):
    """An embedded Siegel geodesic left the image of the embedding."""

    code = "embedding"


class StepFailure(NumericalError):
    """Geodesic integration left the SPD cone.

    ``last_time`` and ``last_state`` hold the final valid sample.
    """

    code = "step-failure"

    def __init__(self, message, last_time=None, last_state=None):
        super().__init__(message)
        self.last_time = last_time
        self.last_state = last_state
