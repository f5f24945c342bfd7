"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: usage problems exit with 2, internal
consistency failures with 3.
"""


class HeckeError(Exception):
    """Base class for all library errors."""


class UsageError(HeckeError, ValueError):
    """Bad arguments, mismatched arity or malformed text input."""


class DomainError(UsageError):
    """A value lies outside the domain of an operation."""


class ParameterError(UsageError):
    """The deformation parameter or a parabolic datum is not admissible."""


class ConsistencyError(HeckeError, RuntimeError):
    """An identity that must hold exactly failed; signals a bug, never bad input."""
