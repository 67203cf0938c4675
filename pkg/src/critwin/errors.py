"""Exception and warning types shared across the package."""


class CritwinError(Exception):
    """Base class for all errors raised by critwin."""


class DomainError(CritwinError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class WindowError(CritwinError, ValueError):
    """A query lies outside the parameter window in which a formula is valid.

    The message always names the violated condition, e.g.
    ``"requires lambda <= n^(1/12)/5"``.
    """


class WindowWarning(UserWarning):
    """A query is admissible but sits in a band where two stated windows disagree."""
