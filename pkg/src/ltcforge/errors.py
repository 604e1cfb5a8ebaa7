"""Shared exception types.

Exit-code mapping for the CLI: CapacityError, DomainError and SchemaError
are usage/capacity problems (exit 2); verdict failures are data, not
exceptions, and map to exit 1.
"""


class ForgeError(Exception):
    """Base class for all package errors."""


class CapacityError(ForgeError):
    """An enumeration would exceed the configured budget."""

    def __init__(self, required: int, budget: int, what: str = "enumeration"):
        self.required = required
        self.budget = budget
        self.what = what
        super().__init__(f"{what} requires {required} items, budget is {budget}")


class MismatchError(ForgeError):
    """Incompatible shapes: alphabet, length or field disagreement."""


class DomainError(ForgeError):
    """A parameter is outside the range an operation supports."""


class SchemaError(ForgeError):
    """A serialized artifact does not match its expected schema."""
