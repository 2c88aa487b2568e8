"""Claim verification reports shared by the measures and claims modules."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

__all__ = ["ClaimReport", "HOLDS", "VIOLATED", "INDETERMINATE"]

HOLDS = "holds"
VIOLATED = "violated"
INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class ClaimReport:
    """Outcome of evaluating both sides of one stated claim.

    ``gap`` follows a per-claim sign convention (documented at each check):
    for inequality claims it is the slack, non-negative exactly when the
    claim holds.  ``extras`` carries auxiliary numbers (e.g. competing
    formula values) that the notes describe.
    """

    claim_id: str
    lhs: float
    rhs: float
    gap: float
    verdict: str
    notes: str = ""
    extras: Mapping[str, float] = field(default_factory=dict)
