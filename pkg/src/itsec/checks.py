"""Three-valued inequality checks shared by the relation, bound and inequality suites."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any

HOLDS = "holds"
VIOLATED = "violated"
SKIPPED = "skipped"


@dataclass(frozen=True)
class RelationCheck:
    """``lhs <= rhs`` (or equality when ``kind == "eq"``) with the evaluated sides."""

    name: str
    lhs: Any
    rhs: Any
    slack: Any
    status: str
    kind: str = "le"
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.status != VIOLATED

    def as_dict(self) -> dict:
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs, "slack": self.slack,
                "status": self.status, "kind": self.kind, "note": self.note}


def _exact(*xs) -> bool:
    return all(isinstance(x, (Fraction, int)) for x in xs)


def leq(name: str, lhs, rhs, tol: float = 1e-9, note: str = "") -> RelationCheck:
    """Point comparison; exact values compare with no tolerance."""
    t = 0 if _exact(lhs, rhs) else tol
    status = HOLDS if lhs <= rhs + t else VIOLATED
    return RelationCheck(name, lhs, rhs, rhs - lhs, status, "le", note)


def equal(name: str, lhs, rhs, tol: float = 1e-9, note: str = "") -> RelationCheck:
    t = 0 if _exact(lhs, rhs) else tol
    status = HOLDS if abs(lhs - rhs) <= t else VIOLATED
    return RelationCheck(name, lhs, rhs, abs(rhs - lhs), status, "eq", note)


def leq_interval(name: str, lhs: tuple, rhs: tuple, tol: float = 1e-9, note: str = "") -> RelationCheck:
    """``lhs <= rhs`` for quantities only known up to intervals ``(lo, hi)``.

    Holds when the largest possible left side is below the smallest possible
    right side, is violated when even the smallest left side exceeds the
    largest right side, and is skipped otherwise.
    """
    (llo, lhi), (rlo, rhi) = lhs, rhs
    t = 0 if _exact(llo, lhi, rlo, rhi) else tol
    if lhi <= rlo + t:
        status = HOLDS
    elif llo > rhi + t:
        status = VIOLATED
    else:
        status = SKIPPED
        note = note or f"undecided: [{_fmt(llo)}, {_fmt(lhi)}] against [{_fmt(rlo)}, {_fmt(rhi)}]"
    return RelationCheck(name, lhi, rlo, rlo - lhi, status, "le", note)


def _fmt(x) -> str:
    return str(x) if isinstance(x, (Fraction, int)) else f"{float(x):.6g}"


def skipped(name: str, note: str) -> RelationCheck:
    return RelationCheck(name, None, None, None, SKIPPED, "le", note)
