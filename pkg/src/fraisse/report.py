"""A small three-valued verification report shared by all checkers.

Bounded verification can never prove a universally quantified axiom, so
reports carry their bound explicitly: ``verified`` means verified up to
the stated bound, ``refuted`` carries a concrete witness, and
``inconclusive`` records why no verdict was reached (budget, cap, or an
under-certified target).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

VERIFIED = "verified"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive"


@dataclass
class VerificationReport:
    status: str
    check: str
    bound: int | None = None
    witness: object = None
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in (VERIFIED, REFUTED, INCONCLUSIVE):
            raise ValueError(f"bad status {self.status!r}")

    def __bool__(self) -> bool:
        return self.status == VERIFIED

    @classmethod
    def verified_up_to(cls, check: str, bound: int | None, **details) -> "VerificationReport":
        return cls(VERIFIED, check, bound=bound, details=details)

    @classmethod
    def refuted(cls, check: str, witness, bound: int | None = None, **details) -> "VerificationReport":
        return cls(REFUTED, check, bound=bound, witness=witness, details=details)

    @classmethod
    def inconclusive(cls, check: str, reason: str, bound: int | None = None, **details) -> "VerificationReport":
        details = dict(details)
        details["reason"] = reason
        return cls(INCONCLUSIVE, check, bound=bound, details=details)

    def to_json(self) -> dict:
        out = {"status": self.status, "check": self.check}
        if self.bound is not None:
            out["bound"] = self.bound
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        if self.details:
            out["details"] = _jsonable(self.details)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _jsonable(value):
    if hasattr(value, "to_json"):
        return value.to_json()
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in value]
        if isinstance(value, (set, frozenset)):
            items = sorted(items, key=repr)
        return items
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return repr(value)
