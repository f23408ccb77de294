"""Uniform check-result record shared by all verification layers."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

__all__ = ["CheckResult", "passed", "failed"]


@dataclass
class CheckResult:
    name: str
    ok: bool
    witness: Any = None
    residual: float | None = None
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        def clean(v):
            if isinstance(v, Fraction):
                from .rationals import format_rat

                return format_rat(v)
            if isinstance(v, (list, tuple)):
                return [clean(x) for x in v]
            if isinstance(v, dict):
                return {str(k): clean(x) for k, x in v.items()}
            if hasattr(v, "to_json"):
                return v.to_json()
            if isinstance(v, (int, float, str, bool)) or v is None:
                return v
            return repr(v)

        return {
            "name": self.name,
            "status": "pass" if self.ok else "fail",
            "witness": clean(self.witness),
            "residual": self.residual,
            "details": clean(self.details),
        }


def passed(name: str, **details) -> CheckResult:
    return CheckResult(name, True, details=details)


def failed(name: str, witness=None, residual=None, **details) -> CheckResult:
    return CheckResult(name, False, witness=witness, residual=residual, details=details)
