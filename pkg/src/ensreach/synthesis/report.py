"""Synthesis reports: budgets, degrees and the measured outcome."""

from dataclasses import dataclass, field


@dataclass
class BudgetEntry:
    name: str
    allotted: float
    measured: float

    @property
    def ok(self):
        return self.measured <= self.allotted

    def to_dict(self):
        return {"name": self.name, "allotted": self.allotted, "measured": self.measured,
                "ok": self.ok}


@dataclass
class SynthesisReport:
    """What a synthesis run promised and what simulation actually delivered.

    ``achieved_error`` is always taken from a simulation of the returned
    input on the validation grid.
    """

    method: str
    eps: float
    mode: str
    budget: list = field(default_factory=list)
    degrees: dict = field(default_factory=dict)
    component_errors: dict = field(default_factory=dict)
    horizon: dict = field(default_factory=dict)
    achieved_error: float = float("nan")
    validation_points: int = 0
    notes: list = field(default_factory=list)

    def add(self, name, allotted, measured):
        self.budget.append(BudgetEntry(name, float(allotted), float(measured)))

    @property
    def within_budget(self):
        return all(e.ok for e in self.budget) and self.achieved_error <= self.eps

    def to_dict(self):
        return {
            "method": self.method,
            "eps": self.eps,
            "mode": self.mode,
            "budget": [e.to_dict() for e in self.budget],
            "degrees": dict(self.degrees),
            "component_errors": dict(self.component_errors),
            "horizon": dict(self.horizon),
            "achieved_error": self.achieved_error,
            "validation_points": self.validation_points,
            "within_budget": self.within_budget,
            "notes": list(self.notes),
        }

    def summary(self):
        lines = [f"method {self.method} ({self.mode}), eps={self.eps:g}"]
        for e in self.budget:
            flag = "ok" if e.ok else "OVER"
            lines.append(f"  {e.name:<24} allotted {e.allotted:.3e}  measured {e.measured:.3e}  {flag}")
        lines.append(f"  degrees {self.degrees}")
        lines.append(f"  horizon {self.horizon}")
        lines.append(f"  achieved sup error {self.achieved_error:.3e} on {self.validation_points} "
                     f"validation samples")
        lines.extend(f"  note: {n}" for n in self.notes)
        return "\n".join(lines)
