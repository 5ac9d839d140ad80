"""Exception hierarchy shared by all modules."""


class ParakahlerError(Exception):
    """Base class for all errors raised by this package."""


class ExprSyntaxError(ParakahlerError):
    """Malformed expression text; carries the offending position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UndeclaredVariableError(ParakahlerError):
    def __init__(self, name, position=None):
        at = f" (at position {position})" if position is not None else ""
        super().__init__(f"undeclared identifier '{name}'{at}")
        self.name = name
        self.position = position


class IllegalDivisionError(ParakahlerError):
    """Division by a quantity that is not certified nonzero."""


class SubstitutionError(ParakahlerError):
    """A substitution made a denominator identically zero or uncertifiable."""


class UndecidablePivotError(ParakahlerError):
    """A symbolic pivot candidate is neither certified nonzero nor identically zero."""

    def __init__(self, entry, where=""):
        suffix = f" {where}" if where else ""
        super().__init__(f"cannot decide whether '{entry}' vanishes{suffix}")
        self.entry = entry


class SingularMatrixError(ParakahlerError):
    pass


class DimensionMismatchError(ParakahlerError):
    pass


class JacobiError(ParakahlerError):
    """Structure constants violate the Jacobi identity."""

    def __init__(self, triple, residual):
        i, j, k = triple
        super().__init__(
            f"Jacobi identity fails on basis triple ({i},{j},{k}); residual {residual}"
        )
        self.triple = triple
        self.residual = residual


class InternalConsistencyError(ParakahlerError):
    """Two routes that must agree by theory disagreed; indicates a bug or bad input."""


class ExternalDataRequiredError(ParakahlerError):
    """The requested computation needs data tagged external-required."""


class ProblemFormatError(ParakahlerError):
    """A problem file does not conform to the JSON schema."""
