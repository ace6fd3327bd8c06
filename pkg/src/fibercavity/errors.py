"""Exception hierarchy.

Every error carries a short machine-readable ``code`` which the CLI prints
as a prefix.
"""


class FiberCavityError(Exception):
    code = "E_GENERIC"


class DomainError(FiberCavityError, ValueError):
    """An argument lies outside the domain of the operation."""

    code = "E_DOMAIN"

    def __init__(self, parameter, message):
        self.parameter = parameter
        super().__init__(f"{parameter}: {message}")


class ConsistencyError(FiberCavityError, ValueError):
    code = "E_CONSISTENCY"


class NumericalAccuracyError(FiberCavityError, ArithmeticError):
    code = "E_ACCURACY"


class BracketError(FiberCavityError, ValueError):
    code = "E_BRACKET"


class ScanParseError(FiberCavityError, ValueError):
    code = "E_PARSE"

    def __init__(self, line_number, message):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class EmptyInputError(FiberCavityError, ValueError):
    code = "E_EMPTY"


class InsufficientPeaksError(FiberCavityError, ValueError):
    code = "E_PEAKS"


class DesignPointError(FiberCavityError):
    """A sweep point failed; wraps the underlying error."""

    def __init__(self, diameter_nm, cause):
        self.diameter_nm = diameter_nm
        self.code = getattr(cause, "code", FiberCavityError.code)
        super().__init__(f"at core diameter {diameter_nm:g} nm: {cause}")
