"""Exception hierarchy shared by every gaplab module."""


class GaplabError(Exception):
    """Base class for all gaplab failures."""


class FactorizationError(GaplabError):
    """Integer factorization exceeded its iteration budget."""


class BudgetExceeded(GaplabError):
    """A search or computation exceeded its configured resource budget."""


class NotDivisibleError(GaplabError, ValueError):
    """Input is not a genuine divisibility instance."""


class VerificationError(GaplabError):
    """An exact check that must hold did not hold."""
