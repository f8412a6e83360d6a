"""Exception types shared across the package."""


class HochschildError(Exception):
    """Base class for all package errors."""


class ScalarError(HochschildError, ValueError):
    """Bad scalar literal, or a value with no image in the target field."""


class FieldMismatchError(HochschildError, ValueError):
    """Objects over different scalar fields were combined."""


class AmbientMismatchError(HochschildError, ValueError):
    """Subspaces of different ambient dimension were compared."""


class NotAChainMapError(HochschildError, ValueError):
    """A map failed to send cycles to cycles or boundaries to boundaries."""


class ComplexInconsistencyError(HochschildError, RuntimeError):
    """A built complex violated boundary-squared-equals-zero."""


class SizeGuardError(HochschildError, RuntimeError):
    """Estimated memory for a build exceeded the configured cap."""


class BudgetExceededError(HochschildError, RuntimeError):
    """An elimination ran past its time budget."""


class PreconditionError(HochschildError, ValueError):
    """Operation preconditions violated (bad degree, non-idempotent, ...)."""


class InstanceFormatError(HochschildError, ValueError):
    """Malformed instance file."""
