"""Check records and the plain-text verification report."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List


@dataclass(frozen=True)
class Check:
    """One verified identity.

    ``value`` is the measured defect; the check passes when ``value <= tol``.
    ``exact`` marks defects computed in exact arithmetic.
    """

    name: str
    value: float
    tol: float
    config: str = ""
    exact: bool = False
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.value <= self.tol

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        mode = "exact" if self.exact else "float"
        text = f"{status} {self.name} [{self.config}] defect={self.value:.3e} tol={self.tol:.1e} {mode}"
        return text + (f" ({self.note})" if self.note else "")


@dataclass
class Report:
    title: str
    header: List[str] = field(default_factory=list)
    checks: List[Check] = field(default_factory=list)

    def extend(self, checks: Iterable[Check]):
        self.checks.extend(checks)

    def add(self, check: Check):
        self.checks.append(check)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    def render(self) -> str:
        lines = [f"# {self.title}"]
        lines += [f"# {h}" for h in self.header]
        lines += [c.line() for c in self.checks]
        n_fail = len(self.failures)
        lines.append(f"# summary: {len(self.checks) - n_fail}/{len(self.checks)} passed")
        lines.append("# result: " + ("PASS" if n_fail == 0 else "FAIL"))
        return "\n".join(lines) + "\n"
