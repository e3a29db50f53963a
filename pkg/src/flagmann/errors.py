"""Exception hierarchy shared across the package."""


class FlagmannError(Exception):
    """Base class for all package errors."""


class InputError(FlagmannError):
    """Malformed or inconsistent user input (bad file, mismatched shapes, ...)."""


class UnsupportedQuiverError(InputError):
    """The quiver is outside the supported class (not Dynkin, cyclic order, ...)."""


class VerificationError(FlagmannError):
    """A cross-check against the counting oracle failed."""


class BudgetExceededError(FlagmannError):
    """An enumeration was refused because its estimated size exceeds the budget."""


class InternalConsistencyError(FlagmannError):
    """A mathematically impossible intermediate value; signals a bug, never bad data."""
