"""Exception hierarchy for the kspm package."""


class KSPMError(Exception):
    """Base class for all errors raised by kspm."""


class RuleViolationError(KSPMError, ValueError):
    """A column was fired while its slope was below D."""


class DomainError(KSPMError, ValueError):
    """An argument lies outside the region where an operation is defined."""


class InputError(KSPMError, ValueError):
    """Malformed user input (bad letter, bad parameter)."""


class IntegrityError(KSPMError, RuntimeError):
    """A recorded object violates an invariant the simulator guarantees."""


class InternalError(KSPMError, RuntimeError):
    """A termination guard tripped; indicates a bug, not bad input."""
