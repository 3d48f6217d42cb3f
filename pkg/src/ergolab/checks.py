"""Pass/fail reports with counterexample witnesses, shared by all law checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .riesz import RieszVector


def fraction_to_json(x: Fraction) -> dict:
    """Bit-exact rational for machine-readable output: {"num", "den"} in lowest terms."""
    return {"num": x.numerator, "den": x.denominator}


def vector_to_json(f: RieszVector) -> list[dict]:
    return [fraction_to_json(x) for x in f.entries]


@dataclass(frozen=True)
class Check:
    """One named law: passed or failed, with a witness exactly on failure."""

    name: str
    passed: bool
    witness: Optional[RieszVector] = None
    note: str = ""

    def __post_init__(self):
        if self.passed and self.witness is not None:
            raise ValueError(f"check {self.name!r} passed but carries a witness")
        if not self.passed and self.witness is None:
            raise ValueError(f"check {self.name!r} failed without a witness")


@dataclass(frozen=True)
class CheckReport:
    checks: tuple[Check, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> tuple[Check, ...]:
        return tuple(c for c in self.checks if not c.passed)

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        out = []
        for c in self.checks:
            entry: dict = {"name": c.name, "passed": c.passed}
            if c.witness is not None:
                entry["witness"] = vector_to_json(c.witness)
            if c.note:
                entry["note"] = c.note
            out.append(entry)
        return {"passed": self.passed, "checks": out}
