"""Pass/fail records for numerical checks, serialisable to stable JSON."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Entry:
    name: str
    residual: float
    tolerance: float
    passed: bool

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "residual": _json_float(self.residual),
            "tolerance": _json_float(self.tolerance),
            "pass": self.passed,
        }


def _json_float(x: float):
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


@dataclass
class VerificationReport:
    entries: list[Entry] = field(default_factory=list)

    def add(self, name: str, residual: float, tolerance: float) -> Entry:
        residual = float(residual)
        ok = bool(math.isfinite(residual) and residual <= tolerance)
        entry = Entry(name, residual, float(tolerance), ok)
        self.entries.append(entry)
        return entry

    def add_flag(self, name: str, ok: bool) -> Entry:
        """Record a yes/no property as residual 0 (holds) or 1 (fails) with tolerance 0."""
        entry = Entry(name, 0.0 if ok else 1.0, 0.0, bool(ok))
        self.entries.append(entry)
        return entry

    def extend(self, other: "VerificationReport", prefix: str = "") -> None:
        for e in other.entries:
            self.entries.append(Entry(prefix + e.name, e.residual, e.tolerance, e.passed))

    @property
    def overall(self) -> bool:
        return all(e.passed for e in self.entries)

    def __getitem__(self, name: str) -> Entry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def names(self) -> list[str]:
        return [e.name for e in self.entries]

    def as_dict(self) -> dict:
        return {"overall": self.overall, "entries": [e.as_dict() for e in self.entries]}

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.as_dict(), indent=indent)
