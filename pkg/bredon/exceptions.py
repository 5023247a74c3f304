"""
Custom exceptions for the bredon library.

Every error carries a machine-readable ``category`` and the exit status the
command-line front end reports for it. Messages may be given logging-style,
``InputError("bad degree %s", d)``, and are rendered lazily by ``str()``.
"""

from typing import Any, Dict


class BredonError(Exception):
    """Base class for bredon related exceptions."""

    category = "internal"
    exit_code = 1

    def __str__(self) -> str:
        if len(self.args) > 1 and isinstance(self.args[0], str):
            try:
                return self.args[0] % self.args[1:]
            except (TypeError, ValueError):
                pass
        return super().__str__()

    def to_json(self) -> Dict[str, Any]:
        return {"category": self.category, "message": str(self)}


class InputError(BredonError):
    """Raised when an input document or argument is malformed."""

    category = "input"
    exit_code = 2


class InvalidPermutationError(InputError):
    """A permutation is not a bijection of the stated degree."""


class InvalidActionError(InputError):
    """A group action violates the automorphism or homomorphism laws."""


class InvalidCategoryError(InputError):
    """A finite category fails associativity or identity laws."""


class InvalidModuleError(InputError):
    """A module is not a functor or does not respect its relations."""


class NotASubgroupError(InputError):
    """A set of elements is not a subgroup of the ambient group."""


class NotNormalError(InputError):
    """A subgroup is required to be normal but is not."""


class EmptyFamilyError(InputError):
    """A family of subgroups would have no members."""


class NotSimpleError(InputError):
    """A non-abelian simple group was required."""


class NoInitialObjectError(InputError):
    """A poset was required to have an initial element."""


class UnsupportedInputError(InputError):
    """The input is outside the class the algorithm is built for."""


class VerificationError(BredonError):
    """A certified construction failed its own check."""

    category = "verification"
    exit_code = 1


class BudgetExceededError(BredonError):
    """A configured budget was exceeded; the answer is indeterminate."""

    category = "budget"
    exit_code = 3


class SizeBoundError(BudgetExceededError):
    """An enumeration bound (group order, class count) was exceeded."""


class ServerError(BredonError):
    """Errors raised by the batch job servers."""

    category = "server"
    exit_code = 3


class ServerTimeoutError(ServerError, TimeoutError):
    """A call got no reply, or a server did not stop, in time."""
