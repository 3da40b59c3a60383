from typing import Optional


class AutoIndexError(Exception):
    """Base error; exit_code is what the CLI returns when it surfaces."""

    exit_code = 3

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class UsageError(AutoIndexError):
    exit_code = 1


class ProgramError(AutoIndexError):
    exit_code = 2


class ParseError(ProgramError):
    def __init__(self, detail: str, line: Optional[int] = None, column: Optional[int] = None):
        if line is not None:
            detail = f"line {line}, column {column}: {detail}"
        super().__init__(detail)
        self.line = line
        self.column = column


class RecursionUnsupportedError(ProgramError):
    pass


class UnsafeRuleError(ProgramError):
    pass


class SchemaError(ProgramError):
    pass


class RuntimeFailure(AutoIndexError):
    exit_code = 3


class CoverViolationError(RuntimeFailure):
    pass


class MissingIndexError(RuntimeFailure):
    pass


class ArityMismatchError(RuntimeFailure):
    pass


class MissingRelationError(RuntimeFailure):
    pass


class InstanceTooLargeError(RuntimeFailure):
    pass


class OutOfRangeError(RuntimeFailure):
    pass


class InternalCompilerError(RuntimeFailure):
    pass


class FactFileError(RuntimeFailure):
    pass


class VerificationFailure(AutoIndexError):
    exit_code = 4
