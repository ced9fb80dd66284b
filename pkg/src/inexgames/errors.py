"""Exception hierarchy shared by all modules."""


class InexError(Exception):
    """Base class for every error raised by this package."""


class DomainError(InexError, ValueError):
    """A variable, element or vertex is outside the domain an operation works on."""


class ParseError(InexError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"{message}{where}")


class ArityError(ParseError):
    pass


class InvalidGuard(InexError, ValueError):
    """A guard or restriction formula contains a team atom."""


class UnsupportedFormula(InexError, ValueError):
    """The formula uses a construct the requested operation does not handle."""


class InvalidChoice(InexError, ValueError):
    pass


class InvalidInput(InexError, ValueError):
    pass


class BudgetExceeded(InexError, RuntimeError):
    """The search needed more than the configured budget.

    Raised instead of returning a possibly wrong answer: callers must treat
    the result as unknown.
    """
