"""Exception taxonomy shared across the package.

The CLI maps these onto exit codes: precondition violations exit 2,
verification failures exit 3, parse errors exit 4.
"""


class FullGroupsError(Exception):
    """Base class for all package errors."""


class SystemConfigError(FullGroupsError):
    """A system description is invalid (bad bases, non-primitive or periodic rule, ...)."""


class PreconditionError(FullGroupsError):
    """An operation was called outside its stated domain."""


class NotPartitionError(PreconditionError):
    """An input family fails to partition the space (overlap or gap)."""


class VerificationError(FullGroupsError):
    """A machine-checked postcondition failed; indicates an internal inconsistency."""


class ParseError(FullGroupsError):
    """A text artifact does not parse."""
