"""Exception hierarchy. Each class carries the CLI exit code for its failure class."""


class ForestPatError(Exception):
    exit_code = 1


class ParseError(ForestPatError, ValueError):
    exit_code = 2


class CapExceededError(ForestPatError):
    exit_code = 3


class IntegrityError(ForestPatError):
    """Count data contradicts a proven inequality (e.g. t_{k+1} >= f_k for uncovered sets)."""

    exit_code = 4


class InsufficientDataError(ForestPatError, ValueError):
    exit_code = 8


class UnsupportedFamilyError(ForestPatError):
    exit_code = 6


class AcceptanceRateError(ForestPatError):
    exit_code = 3
