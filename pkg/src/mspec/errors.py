"""Exception hierarchy shared by all mspec modules."""


class MspecError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(MspecError, ValueError):
    """A distribution or experiment was given invalid parameters."""


class DomainError(MspecError, ValueError):
    """An input lies outside the domain an operation is defined on."""


class ValidityError(MspecError, ValueError):
    """A constructed kernel would violate its structural invariants."""


class ContractError(MspecError, ValueError):
    """A precondition on a matrix argument (shape, symmetry, ...) failed."""


class SizeError(MspecError, ValueError):
    """A requested size exceeds a documented cap."""


class NumericError(MspecError, ArithmeticError):
    """An iterative numerical routine failed to converge or validate."""
