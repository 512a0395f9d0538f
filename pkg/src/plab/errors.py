"""Exception hierarchy shared by every module."""


class PlabError(Exception):
    """Base class for library errors."""


class PoleError(PlabError, ZeroDivisionError):
    """Argument sits on (or numerically at) a pole."""


class DomainError(PlabError, ValueError):
    """Argument outside the domain where the routine is defined."""


class ConvergenceError(PlabError, ArithmeticError):
    """A series or quadrature failed to reach the requested accuracy."""


class LimitError(PlabError, RuntimeError):
    """An iteration limit supplied by the caller was exceeded."""


class DegenerateError(PlabError, ValueError):
    """Input describes a degenerate (rational or repeated) object."""


class UnknownSuite(PlabError, KeyError):
    """Requested verification suite does not exist."""
