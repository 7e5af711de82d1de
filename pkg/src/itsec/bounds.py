"""Key-size lower bounds for encryption and the distinguisher that drives them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .cipher import CipherSpec, execute
from .metrics import SecurityReport
from .probdist import RATIONAL, Dist, ProbError

SATISFIED = "satisfied"
VIOLATED = "violated"
INDETERMINATE = "indeterminate"

ROOT_HALF_LN2 = math.sqrt(math.log(2) / 2)
ROOT_TWO_LN2 = math.sqrt(2 * math.log(2))


@dataclass(frozen=True)
class BoundReport:
    name: str
    rhs: Any
    lhs_lo: Any
    lhs_hi: Any
    status: str
    note: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "rhs": self.rhs, "lhs_lo": self.lhs_lo, "lhs_hi": self.lhs_hi,
                "status": self.status, "note": self.note}


def judge(name: str, lhs_lo, lhs_hi, rhs, tol: float = 1e-9, note: str = "") -> BoundReport:
    """A lower bound lhs >= rhs where lhs is only known to lie in [lhs_lo, lhs_hi]."""
    exact = all(isinstance(v, (Fraction, int)) for v in (lhs_lo, lhs_hi, rhs))
    t = 0 if exact else tol
    if lhs_hi < rhs - t:
        status = VIOLATED
    elif lhs_lo >= rhs - t:
        status = SATISFIED
    else:
        status = INDETERMINATE
    return BoundReport(name, rhs, lhs_lo, lhs_hi, status, note)


def pope_bound(n_keys: int, n_messages: int) -> Fraction:
    if n_keys < 1 or n_messages < 1:
        raise ValueError("sizes must be at least 1")
    return max(Fraction(0), 1 - Fraction(n_keys, n_messages))


def check_bound103(r: SecurityReport, tol: float | None = None) -> list[BoundReport]:
    """Each weighted sum of the decryption error and one advantage against 1 - |K|/|M|."""
    tol = r.tol if tol is None else tol
    rhs = pope_bound(r.sizes["keys"], r.sizes["messages"])
    d = r.delta.value
    out = []
    for j in (3, 5, 6, 8, 9, 10):
        e = r.eps[j]
        out.append(judge(f"(i) delta + eps{j}", d + e.lo, d + e.hi, rhs, tol))
    for j in (2, 4):
        e = r.eps[j]
        out.append(judge(f"(ii) delta + 2 eps{j}", d + 2 * e.lo, d + 2 * e.hi, rhs, tol))
    e = r.eps[7]
    out.append(judge("(iii) delta + 4 eps7", d + 4 * e.lo, d + 4 * e.hi, rhs, tol))
    e = r.eps[1]
    lo = float(d) + ROOT_HALF_LN2 * math.sqrt(max(float(e.lo), 0.0))
    hi = float(d) + ROOT_HALF_LN2 * math.sqrt(max(float(e.hi), 0.0))
    out.append(judge("(iv) delta + sqrt(ln2/2) eps1^(1/2)", lo, hi, rhs, tol))
    return out


_BRANCHES = {3: (1, 1), 5: (1, 1), 6: (1, 1), 8: (1, 1), 9: (1, 1), 10: (1, 1),
             2: (2, 1), 4: (2, 1), 7: (4, 1), 1: (ROOT_TWO_LN2, 0.5)}


def _type(kind) -> tuple[int, int]:
    i, j = kind if isinstance(kind, tuple) else (1, kind)
    if i not in (1, 2, 3) or j not in _BRANCHES:
        raise ValueError(f"no security type {kind!r}")
    return i, j


def key_size_bound(delta, eps, kind) -> Any:
    """Smallest |K|/|M| compatible with the given delta and eps for security type (i, j)."""
    _, j = _type(kind)
    for name, v in (("delta", delta), ("eps", eps)):
        if not 0 <= v <= 1:
            raise ValueError(f"{name} must lie in [0, 1]")
    c, p = _BRANCHES[j]
    if p == 1:
        val = 1 - (delta + c * eps)
        zero = val * 0
        return max(val, zero)
    return max(1 - (float(delta) + c * math.sqrt(float(eps))), 0.0)


def impossibility(delta, eps, n_keys: int, n_messages: int, kind) -> bool:
    """True when no scheme with these sizes can meet (delta, eps) for the type."""
    return n_keys < key_size_bound(delta, eps, kind) * n_messages


def decryption_fanout(s: CipherSpec) -> int:
    """Largest number of outputs any one ciphertext can decrypt to, over keys in the support.

    Deterministic decryption has fanout at most |K|, which is what makes the
    uniform-plaintext distinguisher reach 1 - |K|/|M|. In general that
    distinguisher only guarantees 1 - fanout/|M|.
    """
    best = 0
    for ci in range(len(s.ciphertexts)):
        outs = set()
        for ki, pk in enumerate(s.p_k):
            if pk:
                outs.update(o for o, v in enumerate(s.dec[ki][ci]) if v)
        best = max(best, len(outs))
    return best


def has_deterministic_decryption(s: CipherSpec) -> bool:
    return all(sum(1 for v in row if v) == 1 for block in s.dec for row in block)


def fanout_bound(s: CipherSpec) -> Fraction:
    """Advantage floor of the uniform-plaintext distinguisher against any simulator."""
    return max(Fraction(0), 1 - Fraction(decryption_fanout(s), len(s.messages)))


def distinguisher_advantage(s: CipherSpec, pm: Dist, q) -> Any:
    """Delta(P_{M Mt C}, P_{MM} x q): real system against an ideal channel with simulated ciphertext q."""
    if isinstance(q, Dist):
        if q.alphabet != s.ciphertexts:
            raise ProbError("simulator distribution must be over the ciphertexts")
        q = q.probs
    if len(q) != len(s.ciphertexts):
        raise ProbError("simulator distribution has the wrong length")
    j = execute(s, pm)
    zero = Fraction(0) if s.mode == RATIONAL else 0.0
    ideal: dict = {}
    for m, w in zip(s.messages, pm.probs):
        if not w:
            continue
        for c, qc in zip(s.ciphertexts, q):
            if qc:
                ideal[(m, m, c)] = w * qc
    real = {cell: p for cell, p in j.items() if p}
    total = zero
    for cell in set(real) | set(ideal):
        diff = real.get(cell, zero) - ideal.get(cell, zero)
        if diff > 0:
            total += diff
    return total
