"""Pass/fail reports for axiom verification and suite runs."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    counterexample: tuple | None = None

    def __str__(self):
        status = "pass" if self.passed else "FAIL"
        extra = ""
        if not self.passed and self.counterexample is not None:
            extra = f" at {self.counterexample}"
        if self.detail and not self.passed:
            extra += f" ({self.detail})"
        return f"{status}  {self.name}{extra}"


@dataclass
class VerificationReport:
    subject: str
    checks: list[CheckResult] = field(default_factory=list)

    def add(self, name: str, passed: bool, detail: str = "", counterexample=None):
        self.checks.append(CheckResult(name, bool(passed), detail, counterexample))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def __str__(self):
        lines = [f"{self.subject}: {'pass' if self.passed else 'FAIL'}"]
        lines += [f"  {c}" for c in self.checks]
        return "\n".join(lines)
