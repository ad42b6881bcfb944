import json
import math
from dataclasses import dataclass, field
from typing import Any, Sequence


@dataclass(frozen=True)
class CheckResult:
    name: str
    anchor: str
    measured: float
    expected: float
    tolerance: float
    passed: bool
    runtime_s: float = 0.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "anchor": self.anchor,
            "measured": _number(self.measured),
            "expected": _number(self.expected),
            "tolerance": _number(self.tolerance),
            "pass": bool(self.passed),
            "runtime_s": _number(self.runtime_s),
        }


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[CheckResult, ...]
    environment: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def summary(self) -> str:
        return "pass" if self.passed else "fail"

    @property
    def failures(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def to_dict(self) -> dict[str, Any]:
        return {
            "summary": self.summary,
            "failures": self.failures,
            "checks": [c.to_dict() for c in self.checks],
            "environment": {k: self.environment[k] for k in sorted(self.environment)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"


def _number(value):
    value = float(value)
    return value if math.isfinite(value) else None


def build_report(results: Sequence[CheckResult], environment: dict[str, Any] | None = None) -> VerificationReport:
    """Report with checks ordered by name; an empty result list is rejected."""
    if not results:
        raise ValueError("a verification report needs at least one check result")
    ordered = tuple(sorted(results, key=lambda c: (c.name, c.anchor)))
    return VerificationReport(checks=ordered, environment=dict(environment or {}))
