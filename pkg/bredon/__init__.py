"""
Exact Bredon cohomology of finite groups relative to families of subgroups.
"""

import logging
from importlib.metadata import PackageNotFoundError, version

from bredon.config import DEFAULT_BUDGETS, DEFAULT_N_MAX, Budgets
from bredon.exceptions import (
    BredonError,
    BudgetExceededError,
    InputError,
    ServerError,
    ServerTimeoutError,
    VerificationError,
)

try:
    __version__ = version("bredon")
except PackageNotFoundError:
    __version__ = "0.0.0"

# Configure default logger for the library
logging.getLogger(__name__).addHandler(logging.NullHandler())

__all__ = [
    "Budgets",
    "DEFAULT_BUDGETS",
    "DEFAULT_N_MAX",
    "BredonError",
    "BudgetExceededError",
    "InputError",
    "ServerError",
    "ServerTimeoutError",
    "VerificationError",
]
