"""Provenance-tagged scalar estimates.

Every constant that feeds an invertibility certificate carries a label that
says how trustworthy it is: computed exactly, bounded from one side by a
truncated/grid computation, or supplied by the user.
"""

from __future__ import annotations

from dataclasses import dataclass, field

EXACT = "exact"
LOWER_BOUND = "estimated-lower-bound"
UPPER_BOUND = "estimated-upper-bound"
USER = "user-supplied"

_ALLOWED = (EXACT, LOWER_BOUND, UPPER_BOUND, USER)


@dataclass(frozen=True)
class ConstantEstimate:
    """A positive scalar together with how it was obtained."""

    value: float
    provenance: str
    detail: str = field(default="", compare=False)

    def __post_init__(self):
        if self.provenance not in _ALLOWED:
            raise ValueError(f"unknown provenance tag {self.provenance!r}")
        if not (self.value == self.value):  # NaN guard
            raise ValueError("constant estimate is NaN")

    def to_dict(self) -> dict:
        d = {"value": float(self.value), "provenance": self.provenance}
        if self.detail:
            d["detail"] = self.detail
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ConstantEstimate":
        return cls(float(d["value"]), str(d["provenance"]), str(d.get("detail", "")))
