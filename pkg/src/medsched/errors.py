"""Exception types shared across the package.

Each error carries a short machine-readable ``code`` so the CLI and the
booking service can map failures to stable identifiers without parsing
message text.
"""

from __future__ import annotations


class MedschedError(Exception):
    code = "error"


class InvariantError(MedschedError):
    """A domain-type invariant was violated while constructing an entity."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class FactSyntaxError(MedschedError):
    """Fact-file parse failure, with source position when known."""

    code = "syntax-error"

    def __init__(self, message: str, line: int | None = None,
                 column: int | None = None, code: str | None = None):
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
        self.line = line
        self.column = column
        if code is not None:
            self.code = code


class SchemaError(MedschedError):
    """JSON document violates the instance schema; ``path`` locates the field."""

    code = "schema-error"

    def __init__(self, message: str, path: str = "$", code: str | None = None):
        super().__init__(f"{path}: {message}")
        self.path = path
        if code is not None:
            self.code = code


class InvalidInstanceError(MedschedError):
    """An operation that requires a valid instance received one with errors."""

    code = "invalid-instance"

    def __init__(self, issues):
        issues = list(issues)
        summary = "; ".join(str(i) for i in issues[:5])
        if len(issues) > 5:
            summary += f" (+{len(issues) - 5} more)"
        super().__init__(f"instance failed validation: {summary}")
        self.issues = issues


class NoTemporalOriginError(MedschedError):
    """Instance has no declared current time and no slots to derive one from."""

    code = "no-temporal-origin"


class ScoringError(MedschedError):
    """An appointment cannot be scored (its slot lies before current time)."""

    code = "negative-wait"


class OracleCapError(MedschedError):
    """Exhaustive enumeration would exceed the combination cap."""

    code = "instance-too-large"


class GenerationError(MedschedError):
    """Generator parameters are mutually inconsistent."""

    code = "params-inconsistent"
