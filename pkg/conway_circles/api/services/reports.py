from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple


@dataclass(frozen=True)
class CheckReport:
    passed: bool
    max_residual: float
    tolerance: float
    details: List[Tuple[str, float]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "details": [[label, value] for label, value in self.details],
        }


def make_report(residual: float, tolerance: float, details: List[Tuple[str, float]] | None = None) -> CheckReport:
    residual = float(residual)
    return CheckReport(
        passed=residual <= tolerance,
        max_residual=residual,
        tolerance=float(tolerance),
        details=list(details or []),
    )
