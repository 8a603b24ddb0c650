"""Exception types shared across the package.

The CLI maps these onto distinct exit codes, so library code should raise
ParseError for malformed input files and ValidationError for structurally
sound input that violates a precondition.
"""


class ResolvError(Exception):
    """Base class for errors raised by this package."""


class ParseError(ResolvError):
    """An input file or textual spec could not be parsed."""


class ValidationError(ResolvError):
    """Input parsed fine but fails a documented precondition."""
