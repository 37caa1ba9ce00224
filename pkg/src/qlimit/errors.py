"""Exception hierarchy shared by every qlimit module."""


class QLimitError(Exception):
    """Base class for all errors raised by qlimit."""


class SizeCapExceeded(QLimitError):
    """Materializing a function would enumerate more strings than the cap allows."""

    def __init__(self, message, *, largest_k=None):
        super().__init__(message)
        self.largest_k = largest_k


class UnknownName(QLimitError, KeyError):
    pass


class NotDroppable(QLimitError):
    pass


class EmptyPromise(QLimitError):
    pass


class DimensionMismatch(QLimitError, ValueError):
    pass


class TooManyBlocks(QLimitError):
    pass


class ArityTooLarge(QLimitError):
    pass


class StepInapplicable(QLimitError):
    def __init__(self, index, reason):
        super().__init__(f"step {index}: {reason}")
        self.index = index
        self.reason = reason


class SwitchabilityRequired(QLimitError):
    pass


class UnsupportedMeasure(QLimitError):
    pass


class UnattainableValue(QLimitError):
    pass


class UnsupportedEvaluator(QLimitError):
    pass


class ParseError(QLimitError, ValueError):
    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{where}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column


# budget-type failures map to exit code 2 in the CLI
BUDGET_ERRORS = (SizeCapExceeded, TooManyBlocks, ArityTooLarge)
