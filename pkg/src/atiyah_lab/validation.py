from dataclasses import dataclass, field


@dataclass
class ValidationReport:
    """Outcome of an axiom check.

    Each violation is a plain dict with at least a ``kind`` key; index fields
    inside violations are 1-based, matching the x1..xN / e1..er naming used in
    problem files and reports.
    """

    subject: str
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def add(self, kind, **detail):
        self.violations.append({"kind": kind, **detail})

    def extend(self, other):
        self.violations.extend(other.violations)
        return self

    def to_dict(self):
        return {"status": "pass" if self.ok else "fail", "violations": list(self.violations)}
