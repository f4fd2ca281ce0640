"""Exception hierarchy.

Every error raised by the toolkit derives from :class:`QrplError`. The CLI
prints ``type(err).__name__`` so the class names below are part of the
user-facing contract.
"""


class QrplError(Exception):
    """Base class for all toolkit errors."""


class ParseError(QrplError):
    def __init__(self, message, line=0, col=0, expected=()):
        self.line = line
        self.col = col
        self.expected = tuple(sorted(set(expected)))
        text = f"{line}:{col}: {message}"
        if self.expected:
            text += " (expected one of: " + ", ".join(self.expected) + ")"
        super().__init__(text)
        self.message = message


class StaticError(QrplError):
    """Raised when a program fails static checking and a caller asked to be strict."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


class ExecutionError(QrplError):
    """Base class for errors raised while evaluating or running a program."""


# classical evaluation

class Unbound(ExecutionError):
    pass


class TypeMismatch(ExecutionError):
    pass


class DivisionByZero(ExecutionError):
    pass


class IntOverflow(ExecutionError):
    pass


class OutOfRange(ExecutionError):
    pass


class DuplicateTarget(ExecutionError):
    pass


class FuelExhausted(ExecutionError):
    pass


# quantum model / state

class DuplicateWire(ExecutionError):
    pass


class UnknownWire(ExecutionError):
    pass


class DimensionMismatch(ExecutionError):
    pass


class NonUnitary(ExecutionError):
    pass


class LayoutMismatch(ExecutionError):
    pass


class SizeCap(ExecutionError):
    pass


class ZeroVector(ExecutionError):
    pass


class BranchCount(ExecutionError):
    pass


class UnknownGate(ExecutionError):
    pass


class UnknownProcedure(ExecutionError):
    pass


# interpreter

class RecursionLimit(ExecutionError):
    pass


class CoinViolation(ExecutionError):
    pass


class ClassicalDivergence(ExecutionError):
    pass


# oracle

class NonUnitaryResult(ExecutionError):
    pass


class ClassicalStoreMismatch(ExecutionError):
    pass


# stdlib

class AssetError(QrplError):
    """A bundled program or the manifest is missing or malformed."""
