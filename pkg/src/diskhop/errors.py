"""Exceptions shared across the package."""


class DegenerateInstanceError(Exception):
    """An event predicate fell inside the indeterminate tolerance band.

    Raised instead of silently building a corrupt structure.  Instances
    accepted by the generators (minimum predicate margin enforced) never
    trigger this.
    """


class InputFormatError(Exception):
    """Malformed instance or result file; carries a line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")
