"""Shared exception types."""


class FieldMismatchError(ValueError):
    """Operands live in different fields."""


class CycleError(ValueError):
    """Cover pairs generate a cycle, violating antisymmetry."""


class BoundExceededError(RuntimeError):
    """An enumeration or search would exceed its configured bound."""


class NotInvertibleError(ValueError):
    """An incidence function with a zero diagonal entry has no inverse."""

    def __init__(self, element):
        self.element = element
        super().__init__(f"not invertible: zero diagonal entry at {element!r}")


class NotInvolutionError(ValueError):
    """A map or descriptor fails the involution conditions."""


class NotMultiplicativeError(ValueError):
    """Entries violate nonvanishing or the two-step product rule."""


class MultiplicativeGateError(RuntimeError):
    """A component admits a non-fractional multiplicative element, so the
    reduction theorems do not apply; only exhaustive paths are sound."""

    def __init__(self, component, witness=None):
        self.component = component
        self.witness = witness
        super().__init__(
            f"component {component} admits a non-fractional multiplicative element"
        )


class LambdaMismatchError(ValueError):
    """Inner equivalence queried for involutions inducing different poset maps."""


class InfiniteClassCountError(ValueError):
    """The class-count formula is infinite over this field."""


class InputError(ValueError):
    """Malformed or semantically invalid input document."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
