"""Exceptions raised by the algebra core."""


class LocohError(Exception):
    """Base class for everything the library raises on purpose."""


class ContractViolation(LocohError, ValueError):
    """A caller broke an operation's precondition."""


class FieldDivisionError(ContractViolation, ZeroDivisionError):
    pass


class InternalConsistencyError(LocohError):
    """A self-check failed; the computation cannot be trusted."""


class ParseError(LocohError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", col {col})" if col is not None else ")")
        super().__init__(f"{message}{where}")
        self.message = message


class BoundResolutionError(LocohError):
    """The stabilization bound u could not be resolved."""


class VerdictMismatchError(InternalConsistencyError):
    """Streaming and baseline verdicts disagree."""
