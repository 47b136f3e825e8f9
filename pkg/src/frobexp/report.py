"""Verification reports: per-check tallies plus counterexample payloads."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Report:
    name: str
    params: dict[str, Any] = field(default_factory=dict)
    tallies: dict[str, list[int]] = field(default_factory=dict)
    violations: list[dict[str, Any]] = field(default_factory=list)
    extra: dict[str, Any] = field(default_factory=dict)

    def check(self, name: str, ok: bool, sample: int | None = None, **payload) -> bool:
        tally = self.tallies.setdefault(name, [0, 0])
        tally[0] += 1
        if not ok:
            tally[1] += 1
            entry = {"check": name, "sample": sample}
            entry.update(payload)
            self.violations.append(entry)
        return bool(ok)

    def absorb(self, results) -> None:
        """Replay ``(name, ok, sample, payload)`` tuples produced elsewhere."""
        for name, ok, sample, payload in results:
            self.check(name, ok, sample, **payload)

    @property
    def passed(self) -> bool:
        return not self.violations

    def failed(self, name: str) -> int:
        return self.tallies.get(name, [0, 0])[1]

    def evaluated(self, name: str) -> int:
        return self.tallies.get(name, [0, 0])[0]

    def to_dict(self) -> dict[str, Any]:
        out = {
            "name": self.name,
            "params": self.params,
            "passed": self.passed,
            "checks": {
                k: {"evaluated": v[0], "failed": v[1], "passed": v[1] == 0}
                for k, v in sorted(self.tallies.items())
            },
            "violations": sorted(
                self.violations, key=lambda v: (-1 if v["sample"] is None else v["sample"], v["check"])
            ),
        }
        out.update(self.extra)
        return out
