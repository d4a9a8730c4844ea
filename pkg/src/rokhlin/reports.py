"""Check/report containers shared by the certificate and CLI layers.

Reports carry exact values (Fractions stay Fractions until rendering)
and serialize to deterministic JSON: rationals as "p/q" strings, keys
sorted, list order preserved.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction


def render_value(v):
    """JSON-safe rendering; Fractions become 'p/q' strings."""
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, (int, float, str)):
        return v
    if isinstance(v, (list, tuple)):
        return [render_value(x) for x in v]
    if isinstance(v, dict):
        return {str(k): render_value(x) for k, x in v.items()}
    return str(v)


def parse_rational(v) -> Fraction:
    """Accept ints, 'p/q' strings, and Fractions from scenario files."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise ValueError(f"not an exact rational: {v!r}")


@dataclass(frozen=True)
class Check:
    """One verified inequality or predicate."""

    name: str
    passed: bool
    lhs: object = None
    rhs: object = None
    relation: str = ""
    note: str = ""

    def to_json(self) -> dict:
        out = {"name": self.name, "pass": self.passed}
        if self.lhs is not None:
            out["lhs"] = render_value(self.lhs)
        if self.rhs is not None:
            out["rhs"] = render_value(self.rhs)
        if self.relation:
            out["relation"] = self.relation
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class Report:
    scenario: str
    params: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    def add(self, *args, **kwargs) -> Check:
        check = args[0] if args and isinstance(args[0], Check) else Check(*args, **kwargs)
        self.checks.append(check)
        return check

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed_checks(self) -> list:
        return [c.name for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {
            "scenario": self.scenario,
            "params": render_value(self.params),
            "checks": [c.to_json() for c in self.checks],
            "extras": render_value(self.extras),
            "pass": self.passed,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"
