from typing import Optional


class AppError(Exception):
    """Base class for application exceptions."""
    pass

class ConfigurationError(AppError):
    """Raised when the runtime configuration or command line is unusable."""
    pass


class InputError(AppError):
    """Raised when user-supplied data is invalid."""
    pass

class MeshError(InputError):
    """Raised when a partition cannot host the requested interfaces."""
    pass

class ProblemDefinitionError(InputError):
    """Raised when a boundary value problem violates its invariants."""
    pass

class SpaceError(InputError):
    """Raised when an enriched space cannot be built from its ingredients."""
    pass

class QuadratureError(InputError):
    """Raised for an unsupported quadrature order."""
    pass

class ReportFormatError(InputError):
    """Raised for an unknown report format."""
    pass

class ProblemFileError(InputError):
    """Raised when a problem file cannot be parsed or validated."""

    def __init__(self, message: str, line: Optional[int] = None, field: Optional[str] = None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field:
            where.append(f"field '{field}'")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class NumericalError(AppError):
    """Raised when a computation cannot be carried out numerically."""
    pass

class EnrichmentError(NumericalError):
    """Raised when an enrichment function is undefined or degenerate."""
    pass

class SingularSystemError(NumericalError):
    """Raised when the discrete system is numerically singular."""

    def __init__(self, message: str, dof: int):
        self.dof = dof
        super().__init__(message)

class OrderError(NumericalError):
    """Raised when an observed convergence order is undefined."""
    pass
