"""Structured pass/fail reports produced by the validators and verifiers.

A report is an ordered list of items; rendering is deterministic, so
two runs on the same input produce byte-identical output.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class ReportItem:
    label: str
    ok: bool | None  # None marks an informational line
    detail: str = ""


@dataclass
class Report:
    title: str
    items: list[ReportItem] = field(default_factory=list)

    @property
    def ok(self):
        return all(item.ok is not False for item in self.items)

    @property
    def violations(self):
        return [item for item in self.items if item.ok is False]

    def check(self, label, ok, detail=""):
        self.items.append(ReportItem(label, bool(ok), detail))
        return ok

    def info(self, label, detail=""):
        self.items.append(ReportItem(label, None, detail))

    def extend(self, other):
        """Absorb another report's items under their own labels."""
        for item in other.items:
            self.items.append(
                ReportItem(f"{other.title}: {item.label}", item.ok, item.detail)
            )

    def render(self):
        lines = [f"== {self.title}: {'ok' if self.ok else 'FAILED'} =="]
        for item in self.items:
            mark = "info" if item.ok is None else ("ok" if item.ok else "FAIL")
            line = f"  [{mark}] {item.label}"
            if item.detail:
                line += f": {item.detail}"
            lines.append(line)
        return "\n".join(lines) + "\n"

    def as_dict(self):
        return {
            "title": self.title,
            "ok": self.ok,
            "items": [
                {"label": i.label, "ok": i.ok, "detail": i.detail}
                for i in self.items
            ],
        }
