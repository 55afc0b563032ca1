"""Pass/fail reports for verifier batteries.

Every failed check carries a witness (the lexicographically least
offending tuple), so reports double as debugging output and as the
machine-readable half of the CLI's run reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    passed: bool
    witness: tuple | None = None
    detail: str = ""

    def line(self) -> str:
        status = "pass" if self.passed else "FAIL"
        extra = ""
        if not self.passed and self.witness is not None:
            extra = f"  witness={self.witness}"
        if self.detail:
            extra += f"  [{self.detail}]"
        return f"{status}  {self.name}{extra}"


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)

    def add(self, name, passed, witness=None, detail=""):
        if witness is not None:
            witness = tuple(int(w) for w in witness)
        self.checks.append(Check(name, bool(passed), witness, detail))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def first_failure(self) -> Check | None:
        for c in self.checks:
            if not c.passed:
                return c
        return None

    def __str__(self) -> str:
        head = f"{self.title}: {'all pass' if self.passed else 'FAILURES'}"
        return "\n".join([head] + ["  " + c.line() for c in self.checks])


def first_violation(mask) -> tuple | None:
    """Lexicographically least index tuple where a violation mask is True."""
    import numpy as np

    idx = np.argwhere(mask)
    if len(idx) == 0:
        return None
    return tuple(int(v) for v in idx[0])
