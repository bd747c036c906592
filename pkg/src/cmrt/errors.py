class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConsistencyError(ArithmeticError):
    """An exact identity that must hold did not; indicates a bug, not bad input."""


class DataFileError(Exception):
    """A bundled or user-supplied data file is missing, malformed or wrong."""


class TableParseError(DataFileError):
    pass


class TableVerificationError(DataFileError):
    pass


class PrecisionError(ArithmeticError):
    """A floating-point evaluation could not certify its integer result."""
