"""Exception hierarchy.

Input problems (bad charts, parse failures, unusable points) derive from
``InputError``; ``ConsistencyError`` signals a broken internal invariant and
should never surface in normal use.
"""


class TanakaError(Exception):
    pass


class InputError(TanakaError, ValueError):
    pass


class ChartMismatchError(InputError):
    pass


class DegreeCapError(InputError):
    pass


class ParseError(InputError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class NotBracketGeneratingError(InputError):
    pass


class NonRegularPointError(InputError):
    pass


class SizeGuardError(TanakaError):
    pass


class ConsistencyError(TanakaError, AssertionError):
    pass


class PropertyViolation(ConsistencyError):
    """A checked structural property failed on a concrete instance."""
