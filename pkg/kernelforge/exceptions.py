"""Exceptions raised by kernelforge."""


class KernelForgeError(Exception):
    """Base class for every kernelforge error.

    ``pair`` is set by Gram assembly to the (i, j) index pair whose
    evaluation failed.
    """

    pair = None

    def __str__(self):
        message = super().__str__()
        if self.pair is not None:
            return f"pair {self.pair}: {message}"
        return message


class ConfigurationError(KernelForgeError):
    pass


class InputError(KernelForgeError):
    """Malformed or vacuous input."""


class DuplicatePointError(InputError):

    def __init__(self, message, indices=None):
        super().__init__(message)
        self.indices = indices


class ParseError(InputError):

    def __init__(self, message, line=None, field=None):
        location = []
        if line is not None:
            location.append(f"line {line}")
        if field is not None:
            location.append(f"field {field!r}")
        if location:
            message = f"{', '.join(location)}: {message}"
        super().__init__(message)
        self.line = line
        self.field = field


class ParameterError(InputError, ValueError):
    """A family or combinator parameter violates its constraint."""


class DomainError(KernelForgeError, ValueError):
    """An argument lies outside the mathematical domain of a function."""


class KernelTypeError(KernelForgeError, TypeError):
    """A point does not belong to the domain a kernel declares."""


class NumericalError(KernelForgeError, ArithmeticError):

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class RangeError(NumericalError, OverflowError):
    pass


class InvariantError(KernelForgeError, ValueError):
    """A geometric invariant (hyperboloid, Minkowski form) is violated."""


class MetrizabilityError(KernelForgeError, ValueError):
    pass


class NotCndError(KernelForgeError, ValueError):

    def __init__(self, message, lambda_max=None):
        super().__init__(message)
        self.lambda_max = lambda_max


class PreconditionError(KernelForgeError, ValueError):

    def __init__(self, message, failed=()):
        super().__init__(message)
        self.failed = tuple(failed)


class IllConditionedError(KernelForgeError, ArithmeticError):
    pass
