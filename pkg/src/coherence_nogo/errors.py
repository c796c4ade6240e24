class CoherenceError(Exception):
    """Base class for errors raised by this package."""


class DimensionLimit(CoherenceError):
    pass


class ShapeError(CoherenceError, ValueError):
    pass


class NotHermitian(CoherenceError, ValueError):
    pass


class NotUnitary(CoherenceError, ValueError):
    pass


class NotDephasingCovariant(CoherenceError, ValueError):
    pass


class InvalidTriggerSet(CoherenceError, ValueError):
    pass


class UnclassifiableGate(CoherenceError, ValueError):
    def __init__(self, message, ops=()):
        super().__init__(message)
        self.ops = list(ops)


class UnknownGadget(CoherenceError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown gadget"


class BoundViolation(CoherenceError, AssertionError):
    pass


class CircuitSyntaxError(CoherenceError, ValueError):
    """Parse failure carrying a 1-based line and column."""

    def __init__(self, message, line, column=1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.reason = message
