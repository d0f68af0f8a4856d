"""Check reports shared by every axiom verifier."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Report:
    """Outcome of a single named check.

    ``status`` is one of ``"pass"``, ``"fail"`` or ``"vacuous"``; a failing
    report always carries a ``witness`` describing the offending input.
    """

    check: str
    status: str
    residual: float = 0.0
    seed: int | None = None
    witness: dict | None = field(default=None)

    def __post_init__(self):
        if self.status not in ("pass", "fail", "vacuous"):
            raise ValueError(f"unknown report status {self.status!r}")
        if self.status == "fail" and self.witness is None:
            raise ValueError("failing reports must carry a witness")

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def to_dict(self) -> dict:
        d = {"check": self.check, "status": self.status, "residual": self.residual}
        if self.seed is not None:
            d["seed"] = self.seed
        if self.witness is not None:
            d["witness"] = self.witness
        return d


def all_passed(reports) -> bool:
    return all(r.passed for r in reports)
