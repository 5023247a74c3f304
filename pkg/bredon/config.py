"""
Budgets and defaults.

Every budget has a default here, can be overridden from the environment
(``BREDON_*`` variables) and again from command-line flags.
"""

import logging
import os
from dataclasses import dataclass, fields, replace
from typing import Any, Dict, Mapping, Optional

from bredon.exceptions import InputError

logger = logging.getLogger(__name__)

DEFAULT_N_MAX = 3
"""Default window for dimension verdicts: cd <= n is decided for n <= 3."""

ENV_PREFIX = "BREDON_"


@dataclass(frozen=True)
class Budgets:
    """
    Resource bounds for the exact computations.

    Attributes
    ----------
    max_group_order : int
        Largest group order for which the subgroup lattice is enumerated.
    max_family_classes : int
        Largest number of conjugacy classes of subgroups for which all
        families are enumerated.
    max_resolution_rank : int
        Largest total rank (summed over objects) of one resolution stage.
    max_cocycle_candidates : int
        Largest number of generator assignments tried by cocycle search.
    exhaustive_cocycle_order : int
        Groups up to this order have their cocycles enumerated as
        functions on all elements.
    max_pointed_objects : int
        Largest pointed orbit category that is built.
    job_timeout : float or None
        Wall-clock seconds granted to each job, counted from the moment a
        worker picks it up; a job still running then is reported
        indeterminate.
    workers : int
        Number of job workers used by ``batch``.
    """

    max_group_order: int = 360
    max_family_classes: int = 16
    max_resolution_rank: int = 20000
    max_cocycle_candidates: int = 1_000_000
    exhaustive_cocycle_order: int = 8
    max_pointed_objects: int = 2000
    job_timeout: Optional[float] = None
    workers: int = 1

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None) -> "Budgets":
        """Defaults overlaid with ``BREDON_<FIELD>`` environment variables."""
        environ = os.environ if environ is None else environ
        values: Dict[str, Any] = {}
        for f in fields(cls):
            key = ENV_PREFIX + f.name.upper()
            if key not in environ:
                continue
            raw = environ[key]
            try:
                values[f.name] = float(raw) if f.name == "job_timeout" else int(raw)
            except ValueError:
                raise InputError("Environment variable %s is not a number: %r", key, raw)
            logger.debug("Budget %s=%s taken from environment", f.name, raw)
        return cls(**values)

    def merged(self, **overrides: Any) -> "Budgets":
        """A copy with the non-``None`` overrides applied."""
        known = {f.name for f in fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise InputError("Unknown budget keys: %s", sorted(unknown))
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def to_json(self) -> Dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


DEFAULT_BUDGETS = Budgets()
