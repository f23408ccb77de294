"""Deterministic JSON reports for verification runs.

A report is fully determined by the run spec (suite, trials, seed,
tolerance, algebra reference): identical specs give byte-identical
serializations, except for the "timings" section which callers must
strip before comparing.  Checks are sorted by name so that assembly
order never leaks into the output.
"""

from __future__ import annotations

import json

from .checks import CheckResult

SCHEMA = "albert-report/1"
VERSION = "0.1.0"
ENGINE = "albert %s" % VERSION

__all__ = [
    "SCHEMA",
    "VERSION",
    "ENGINE",
    "Report",
    "document",
    "dumps",
    "strip_timings",
    "render_check_lines",
]


class Report:
    """One suite's worth of check results plus the spec that produced them."""

    def __init__(self, suite: str, spec: dict, checks, elapsed_s: float | None = None):
        self.suite = suite
        self.spec = dict(spec)
        self.checks = sorted(checks, key=lambda c: c.name)
        self.elapsed_s = elapsed_s

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "spec": self.spec,
            "checks": [c.to_json() for c in self.checks],
            "summary": {
                "total": len(self.checks),
                "passed": sum(1 for c in self.checks if c.ok),
                "failed": sum(1 for c in self.checks if not c.ok),
                "ok": self.ok,
            },
            "timings": {"elapsed_s": self.elapsed_s},
        }


def document(command: str, body: dict) -> dict:
    """Wrap a command payload in the versioned envelope."""
    doc = {"schema": SCHEMA, "engine": ENGINE, "command": command}
    doc.update(body)
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def strip_timings(doc):
    """Copy of the document with every timings section removed."""
    if isinstance(doc, dict):
        return {k: strip_timings(v) for k, v in doc.items() if k != "timings"}
    if isinstance(doc, list):
        return [strip_timings(v) for v in doc]
    return doc


def render_check_lines(check: CheckResult) -> str:
    if check.ok:
        return "  PASS %s" % check.name
    parts = ["  FAIL %s" % check.name]
    if check.witness is not None:
        parts.append("witness=%r" % (check.witness,))
    if check.residual is not None:
        parts.append("residual=%g" % check.residual)
    return "  ".join(parts)
