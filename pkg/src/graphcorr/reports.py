"""Structured validator reports."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping


@dataclass(frozen=True)
class Violation:
    clause: str
    message: str
    indices: tuple = ()
    residual: float | None = None


@dataclass(frozen=True)
class Report:
    """Outcome of a validator: accepted iff there are no violations.

    ``residuals`` maps each numerically checked clause to its largest
    (scaled) residual, whether or not it exceeded the tolerance.
    """

    subject: str
    violations: tuple[Violation, ...] = ()
    residuals: Mapping[str, float] = field(default_factory=dict)

    @property
    def accepted(self) -> bool:
        return not self.violations

    @property
    def failed_clauses(self) -> list[str]:
        return [v.clause for v in self.violations]

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    def __bool__(self):
        return self.accepted
