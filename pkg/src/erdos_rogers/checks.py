"""Rows of a verification report."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

PASS = "pass"
FAIL = "fail"
NOT_APPLICABLE = "n/a"
MEASURED = "measured"
SAMPLED = "sampled"
# for asymptotic thresholds that are measured, not enforced
HOLDS = "holds"
BELOW = "below-threshold"


@dataclass(frozen=True)
class Check:
    name: str
    value: Any
    threshold: Any = None
    verdict: str = MEASURED
    seed: int | None = None

    def as_row(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "threshold": self.threshold,
            "verdict": self.verdict,
            "seed": self.seed,
        }


def verdict(ok: bool) -> str:
    return PASS if ok else FAIL
