"""Exception types shared across the package.

Plain argument mistakes (bad n, bad k, negative alpha) raise ValueError;
the classes here carry input-data and numeric failure context so the CLI
can map them to exit codes.
"""


class DiscourseSignalError(Exception):
    """Base class for errors raised by this package."""


class ParseError(DiscourseSignalError):
    """A line or record in an input file could not be parsed."""


class SchemaError(DiscourseSignalError):
    """An input file is missing a required column or header."""


class ValidationError(DiscourseSignalError):
    """Input data is well-formed but violates a contract."""


class RangeError(DiscourseSignalError):
    """A date or index lookup fell outside the available range."""


class NumericError(DiscourseSignalError):
    """A computation degenerated: rank deficiency, non-finite values,
    or a series without variance."""
