from typing import Optional


class KernelError(Exception):
    """Base class for every error raised by the kernel."""


class ParseError(KernelError):
    """
    Raised when text does not match one of the grammars.

    Args:
        message: Human-readable reason.
        position: Zero-based offset into the input, if known.
        line: One-based line number, if known.
        column: One-based column number, if known.
    """
    def __init__(
        self,
        message: str,
        position: Optional[int] = None,
        line: Optional[int] = None,
        column: Optional[int] = None,
    ) -> None:
        self.message = message
        self.position = position
        self.line = line
        self.column = column
        where = ""
        if line is not None and column is not None:
            where = f" at line {line}, column {column}"
        elif position is not None:
            where = f" at position {position}"
        super().__init__(f"{message}{where}")


class IllFormed(KernelError):
    """A formula or context violates alternation or operand characteristics."""


class FitError(KernelError):
    """A formula was placed under a context it does not fit."""


class UnboundVariable(KernelError):
    """A formula mentions a variable the assignment does not bind."""


class CharacteristicMismatch(KernelError):
    """A formula was evaluated at a point of the wrong kind."""


class NonSentence(KernelError):
    """A formula with variables was given where a sentence is required."""


class ModelFormatError(KernelError):
    """A model file is syntactically valid but names unknown worlds or atoms."""


class DerivationFormatError(KernelError):
    """A derivation file references missing nodes or contains a cycle."""


class StaleRedex(KernelError):
    """A redex no longer matches the derivation it is applied to."""


class StepBudgetExceeded(KernelError):
    """Normalization did not reach a fixpoint within the step budget."""


class UnknownPoint(KernelError):
    """An evaluation point names a world or neighbourhood the model does not have."""
