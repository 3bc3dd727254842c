"""Result object shared by the verification checks."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Assertion:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class Outcome:
    """A list of named assertions plus any data worth reporting (witnesses etc.)."""

    assertions: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def require(self, name: str, condition, detail: str = "") -> bool:
        ok = bool(condition)
        self.assertions.append(Assertion(name, ok, detail))
        return ok

    @property
    def passed(self) -> bool:
        return bool(self.assertions) and all(a.passed for a in self.assertions)

    @property
    def failures(self) -> list:
        return [a for a in self.assertions if not a.passed]

    def summary(self) -> str:
        bad = self.failures
        if not bad:
            return f"{len(self.assertions)} assertions hold"
        return "; ".join(f"{a.name}: {a.detail}" if a.detail else a.name for a in bad)
