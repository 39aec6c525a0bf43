"""Structured results for verification suites.

A report is deterministic for fixed inputs: failures are recorded in
scan order and the canonical dict omits the wall-clock field, so two
runs of the same suite serialize to identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class Failure:
    identity: str
    inputs: dict
    deviation: float

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "inputs": self.inputs,
            "deviation": self.deviation,
        }


@dataclass
class VerifyReport:
    suite: str
    params: dict
    checks_run: int = 0
    failures: list[Failure] = field(default_factory=list)
    max_abs_deviation: float = 0.0
    runtime_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, ok: bool, deviation: float, identity: str, inputs: dict) -> None:
        self.checks_run += 1
        if deviation > self.max_abs_deviation:
            self.max_abs_deviation = deviation
        if not ok:
            self.failures.append(Failure(identity, inputs, deviation))

    def to_dict(self, include_runtime: bool = False) -> dict:
        out = {
            "suite": self.suite,
            "params": self.params,
            "checks_run": self.checks_run,
            "passed": self.passed,
            "max_abs_deviation": self.max_abs_deviation,
            "failures": [f.to_dict() for f in self.failures],
        }
        if include_runtime:
            out["runtime_ms"] = self.runtime_ms
        return out

    def to_json(self, include_runtime: bool = False) -> str:
        return json.dumps(
            self.to_dict(include_runtime), sort_keys=True, separators=(",", ":")
        )
