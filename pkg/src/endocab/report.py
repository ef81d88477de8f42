from __future__ import annotations

from dataclasses import dataclass, field

PASS, FAIL, SKIP = "PASS", "FAIL", "SKIP"


@dataclass
class Check:
    name: str
    status: str
    witness: str = ""

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def line(self) -> str:
        tail = f" {self.witness}" if self.witness else ""
        return f"CHECK {self.name} {self.status}{tail}"


@dataclass
class Report:
    """Ordered, append-only list of CHECK and RESULT records."""

    checks: list[Check] = field(default_factory=list)
    results: list[tuple[str, str]] = field(default_factory=list)
    lines_: list[str] = field(default_factory=list)

    def check(self, name: str, ok: bool, witness="") -> bool:
        c = Check(name, PASS if ok else FAIL, "" if ok else str(witness))
        self.checks.append(c)
        self.lines_.append(c.line())
        return ok

    def skip(self, name: str, reason: str = "") -> None:
        c = Check(name, SKIP, reason)
        self.checks.append(c)
        self.lines_.append(c.line())

    def result(self, key: str, value) -> None:
        self.results.append((key, str(value)))
        self.lines_.append(f"RESULT {key} {value}")

    def extend(self, other: Report, prefix: str = "") -> None:
        for c in other.checks:
            c = Check(prefix + c.name, c.status, c.witness)
            self.checks.append(c)
            self.lines_.append(c.line())
        for k, v in other.results:
            self.result(prefix + k, v)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def count(self, status: str) -> int:
        return sum(c.status == status for c in self.checks)

    def lines(self) -> list[str]:
        return list(self.lines_)

    def __str__(self):
        return "\n".join(self.lines_)
