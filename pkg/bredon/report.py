"""Pass/fail reports shared by the verification commands."""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

logger = logging.getLogger(__name__)


@dataclass
class VerificationReport:
    """
    Outcome of a consistency check.

    ``passed`` is ``None`` when some part was indeterminate within budget
    and nothing failed.
    """

    name: str
    passed: Optional[bool] = True
    checks: List[Dict[str, Any]] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)

    def add(self, check: str, ok: Optional[bool], **data: Any) -> None:
        self.checks.append({"check": check, "ok": ok, **data})
        if ok is False:
            self.passed = False
            logger.warning("%s: check %s failed", self.name, check)
        elif ok is None and self.passed:
            self.passed = None

    def failed(self) -> List[Dict[str, Any]]:
        return [c for c in self.checks if c["ok"] is False]

    @property
    def exit_code(self) -> int:
        if self.passed is None:
            return 3
        return 0 if self.passed else 1

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checks": self.checks,
            "details": self.details,
        }
