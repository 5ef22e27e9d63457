"""Exception hierarchy shared by all fdl modules."""


class FdlError(Exception):
    """Base class for every error raised by this package."""


class InputError(FdlError):
    """A document, degree, flag, or argument is malformed or out of range."""


class ParseError(InputError):
    """Syntax error in concept/role text; carries the offending position."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class FeatureError(InputError):
    """A construct is used that the active feature set does not allow."""


class ModelError(InputError):
    """An interpretation document or model-level precondition is violated."""


class BudgetError(FdlError):
    """A combinatorial operation exceeded its configured budget."""
