"""Exception types shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for all toolkit errors."""


class ParseError(ToolkitError):
    """Syntax error in an input file, with position information."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        loc = ""
        if line is not None:
            loc = f" at line {line}"
            if column is not None:
                loc += f", column {column}"
        super().__init__(message + loc)


class ValidationError(ToolkitError):
    """Structurally invalid data (bad quiver, non-parallel relation, ...)."""


class CapError(ToolkitError):
    """A degree or homological cap was exceeded."""


class InconclusiveError(ToolkitError):
    """A question could not be decided within the certified window."""


class ExtractionError(ToolkitError):
    """Presentation extraction from structure constants failed validation."""
