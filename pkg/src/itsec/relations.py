"""Cross-checks between the computed parameters, brute-force oracles and trend diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .checks import RelationCheck, equal, leq, leq_interval, skipped
from .cipher import CipherSpec, channel_rows, decryption_output, execute
from .inequalities import PINSKER, fannes_bound
from .metrics import (MetricValue, SecurityReport, _batch_joint_tv, _batch_posterior,
                      joint_independence_distance, output_row, security_report)
from .probdist import RATIONAL, Channel, Dist, mutual_information, tv_rows
from .structured import CirculantChannel

__all__ = ["RelationCheck", "check_theorem1", "grid_oracle", "OracleResult",
           "equivalence_diagnostics", "TrendReport", "simplex_grid"]

EXECUTE_LIMIT = 100_000  # cells of all executed joints together
NEAR_VERTEX = Fraction(1, 1000)


def _iv(m: MetricValue) -> tuple:
    return (m.lo, m.hi)


def _scale(c, iv: tuple) -> tuple:
    return (c * iv[0], c * iv[1])


def _fannes_range(iv: tuple, size: int) -> tuple:
    """Range of x -> -2x log2(2x/size) over [lo, hi]; the map is concave."""
    lo, hi = float(iv[0]), float(iv[1])
    ends = [fannes_bound(lo, size), fannes_bound(hi, size)]
    peak = size / (2 * math.e)
    top = fannes_bound(peak, size) if lo <= peak <= hi else max(ends)
    return (min(ends), top)


def _vertex_errors(s: CipherSpec) -> list:
    """Pr{output != m} at each point-mass prior, read off the executed joint."""
    out = []
    for i, m in enumerate(s.messages):
        pm = Dist.point(s.messages, m, s.mode)
        j = execute(s, pm)
        miss = sum((p for (mm, o, _), p in j.items() if mm != o), s.zero())
        out.append(miss)
    return out


def _near_vertex_prior(n: int, i: int, gamma: Fraction, mode: str) -> list:
    if n == 1:
        return [Fraction(1) if mode == RATIONAL else 1.0]
    g = gamma if mode == RATIONAL else float(gamma)
    rest = g / (n - 1)
    pm = [rest] * n
    pm[i] = 1 - g
    return pm


def check_theorem1(s: CipherSpec, report: SecurityReport | None = None,
                   tol: float | None = None) -> list[RelationCheck]:
    """Evaluate every relation between the parameters of one scheme.

    Exact quantities are compared exactly; interval quantities are compared
    conservatively and a relation that the intervals cannot settle is skipped.
    """
    r = report if report is not None else security_report(s)
    tol = s.tol if tol is None else tol
    e = r.eps
    rows = channel_rows(s)
    nm, nc = len(s.messages), len(s.ciphertexts)
    delta = r.delta.value
    out: list[RelationCheck] = []

    # correctness: worst-case error three ways
    avg_out = []
    for m, msg in enumerate(s.messages):
        law = decryption_output(s, m)
        ideal = [s.one() if o == msg else s.zero() for o in s.outputs]
        avg_out.append(tv_rows(law, ideal))
    d2 = max(avg_out)
    out.append(equal("delta1 = delta3 (worst output distance)", d2, delta, tol))
    if nm * nm * nc * len(s.outputs) <= EXECUTE_LIMIT:
        d1 = max(_vertex_errors(s))
        out.append(equal("delta2 = delta3 (executed error at point priors)", d1, delta, tol))
    else:
        out.append(skipped("delta2 = delta3 (executed error at point priors)", "scheme too large to execute"))

    # the secrecy chain
    out.append(leq_interval("(2/ln2) eps2^2 <= eps1", _scale(PINSKER, tuple(float(v) ** 2 for v in _iv(e[2]))),
                            _iv(e[1]), tol))
    wit = (e[2].witness or {}).get("P_M")
    if wit is not None and len(wit) == nm:
        pm = list(wit)
        d_at = joint_independence_distance(rows, pm)
        q = output_row(rows, pm)
        info = _info_at(rows, pm, q)
        out.append(leq("(2/ln2) D^2 <= I at the eps2 witness", PINSKER * float(d_at) ** 2, info, tol))
        out.append(leq("I at the eps2 witness <= eps1", info, float(e[1].hi), 1e-7))
        if d_at <= Fraction(1, 4):
            out.append(leq("I <= Fannes bound at the eps2 witness", info, fannes_bound(d_at, nm * nc), tol))
        else:
            out.append(skipped("I <= Fannes bound at the eps2 witness", "distance above 1/4"))
    out.append(leq_interval("eps1 <= -2 eps2 log(2 eps2/(|M||C|))", _iv(e[1]),
                            _fannes_range(_iv(e[2]), nm * nc), tol,
                            note="valid for every eps2 once |M||C| >= 3"
                            if nm * nc >= 3 else "small alphabets"))
    out.append(leq_interval("eps2 <= eps3", _iv(e[2]), _iv(e[3]), tol))
    out.append(leq_interval("eps3 <= 2 eps2", _iv(e[3]), _scale(2, _iv(e[2])), tol))
    out.append(leq_interval("eps2 <= eps4", _iv(e[2]), _iv(e[4]), tol))

    out.append(equal("eps3 = eps5", e[3].value, e[5].value, tol))
    out.append(equal("eps5 = eps6", e[5].value, e[6].value, tol))
    # independent route to eps3: the near-vertex prior gets within gamma of eps5
    e5 = e[5].value
    if nm >= 2:
        a, b = (s.messages.index(x) for x in e[5].witness["pair"])
        pm = _near_vertex_prior(nm, b, NEAR_VERTEX, s.mode)
        q = output_row(rows, pm)
        v = max(tv_rows(row, q) for row in rows)
        g = NEAR_VERTEX if s.mode == RATIONAL else float(NEAR_VERTEX)
        out.append(leq("near-vertex value <= eps3", v, e[3].value, tol))
        out.append(leq("eps5 - gamma <= near-vertex value", e5 - g, v, tol))

    out.append(leq_interval("eps7 <= eps6", _iv(e[7]), _iv(e[6]), tol))
    out.append(leq_interval("eps6 <= 4 eps7", _iv(e[6]), _scale(4, _iv(e[7])), tol))
    out.append(equal("eps9 = eps10", e[9].value, e[10].value, tol))
    q_star = list(e[10].witness["Q"]) if e[10].witness else None
    if q_star is not None:
        at_center = max(tv_rows(row, q_star) for row in rows)
        out.append(equal("radius attained by its center", at_center, e[10].value, tol))
        out.append(leq("eps9 <= distinguisher value at Q*", e[9].value, at_center, tol))
        upper = max(_simulator_gap(s, m, q_star) for m in range(nm))
        out.append(leq("eps8 <= worst simulator distance at Q*", e[8].lo, upper, tol))
        out.append(leq("worst simulator distance at Q* <= eps9 + delta", upper, e[9].value + delta, tol))
    out.append(leq_interval("max(eps9, delta) <= eps8", (max(e[9].value, delta),) * 2, _iv(e[8]), tol))
    out.append(leq_interval("eps8 <= eps9 + delta", _iv(e[8]), (e[9].value + delta,) * 2, tol))
    out.append(leq_interval("eps2/2 <= eps9", _scale(Fraction(1, 2) if s.mode == RATIONAL else 0.5, _iv(e[2])),
                            _iv(e[9]), tol))
    out.append(leq("eps9 <= eps5", e[9].value, e5, tol))
    return out


def _info_at(rows, pm, q) -> float:
    parts = []
    for w, row in zip(pm, rows):
        if not w:
            continue
        for v, qc in zip(row, q):
            if v > 0:
                parts.append(float(w) * float(v) * math.log2(float(v) / float(qc)))
    return max(math.fsum(parts), 0.0)


def _simulator_gap(s: CipherSpec, m: int, q: Sequence):
    """Delta(P_{Mt C | M=m}, point(m) x q): the real system against the ideal one."""
    total = s.zero()
    msg = s.messages[m]
    ideal_out = s.outputs.index(msg) if msg in s.outputs else None
    joint: dict = {}
    for k, pk in enumerate(s.p_k):
        for c, e in enumerate(s.enc[k][m]):
            if not e:
                continue
            for o, d in enumerate(s.dec[k][c]):
                if d:
                    joint[(o, c)] = joint.get((o, c), s.zero()) + pk * e * d
    for (o, c), p in joint.items():
        ideal = q[c] if o == ideal_out else s.zero()
        if p > ideal:
            total += p - ideal
    return total


# ---------------------------------------------------------------- grid oracle

def simplex_grid(n: int, r: int) -> np.ndarray:
    """Every prior on n points with denominator r, vertices included."""
    if n == 1:
        return np.ones((1, 1))
    if n == 2:
        k = np.arange(r + 1)
        return np.stack([k, r - k], axis=1) / r
    if n == 3:
        i, j = np.meshgrid(np.arange(r + 1), np.arange(r + 1), indexing="ij")
        keep = i + j <= r
        i, j = i[keep], j[keep]
        return np.stack([i, j, r - i - j], axis=1) / r
    raise ValueError("grid oracle supports at most 3 messages")


@dataclass(frozen=True)
class OracleResult:
    value: float
    argmax: tuple
    upper: float
    points: int

    def consistent_with(self, m: MetricValue, tol: float = 1e-9) -> bool:
        """The oracle's range [value, upper] meets the metric's [lo, hi]."""
        return self.value <= float(m.hi) + tol and float(m.lo) <= self.upper + tol


def grid_oracle(s: CipherSpec, metric: str, resolution: int = 100, batch: int = 20_000) -> OracleResult:
    """Brute-force the prior simplex on a grid of step 1/resolution.

    For eps2 the objective is eps3-Lipschitz in L1 and every prior is within
    L1 distance |M|/resolution of the grid, which gives the upper estimate.
    The posterior objective has no such constant, so its upper estimate is 1.
    """
    rows = channel_rows(s)
    n = len(rows)
    if n > 3:
        raise ValueError("grid oracle supports at most 3 messages")
    W = np.asarray([[float(v) for v in r] for r in rows])
    if metric in ("eps2", "2", 2):
        f = _batch_joint_tv
    elif metric in ("eps4", "4", 4):
        f = _batch_posterior
    else:
        raise ValueError(f"grid oracle covers eps2 and eps4, not {metric!r}")
    P = simplex_grid(n, resolution)
    best, arg = -1.0, None
    for start in range(0, len(P), batch):
        chunk = P[start:start + batch]
        vals = f(W, chunk)
        k = int(np.argmax(vals))
        if vals[k] > best:
            best, arg = float(vals[k]), tuple(float(x) for x in chunk[k])
    if f is _batch_joint_tv:
        e3 = max((tv_rows(a, b) for i, a in enumerate(rows) for b in rows[i + 1:]), default=0)
        upper = min(best + float(e3) * n / resolution, float(e3))
    else:
        upper = 1.0
    return OracleResult(max(best, 0.0), arg, max(upper, best), len(P))


# ---------------------------------------------------------------- trends

@dataclass
class TrendReport:
    kappas: list
    rows: list = field(default_factory=list)
    classes: dict = field(default_factory=dict)
    trends: dict = field(default_factory=dict)

    def column(self, name: str) -> list:
        return [r[name] for r in self.rows]


def _vanishing(seq: Sequence[float]) -> bool:
    """Heuristic: all zero, or decreasing over the last three samples and ending below half the first."""
    if all(v == 0 for v in seq):
        return True
    if len(seq) < 3:
        return False
    tail = seq[-3:]
    return all(b < a for a, b in zip(tail, tail[1:])) and seq[-1] < seq[0] / 2


def _trend(seq: Sequence[float]) -> str:
    if all(v == 0 for v in seq):
        return "zero"
    if all(b > a for a, b in zip(seq, seq[1:])):
        return "increasing"
    if all(b < a for a, b in zip(seq, seq[1:])):
        return "decreasing"
    if all(b == a for a, b in zip(seq, seq[1:])):
        return "constant"
    return "mixed"


def _sample(obj, tol: float) -> dict:
    if isinstance(obj, CirculantChannel):
        e5, _ = obj.max_pair_distance()
        cap = obj.capacity(tol)
        return {"messages": obj.n, "eps5": e5, "delta": Fraction(0),
                "I_uniform": obj.mutual_information_uniform(), "eps1_lo": cap.lo, "eps1_hi": cap.hi}
    s: CipherSpec = obj
    r = security_report(s, tol)
    rows = channel_rows(s)
    n = len(s.messages)
    pm = [Fraction(1, n) if s.mode == RATIONAL else 1.0 / n] * n
    j = Channel.from_rows(s.messages, s.ciphertexts, rows, s.mode).joint(Dist(s.messages, pm, s.mode))
    return {"messages": n, "eps5": r.eps[5].value, "delta": r.delta.value,
            "I_uniform": mutual_information(j), "eps1_lo": r.eps[1].lo, "eps1_hi": r.eps[1].hi}


def equivalence_diagnostics(family: Callable[[object], object], kappas: Iterable,
                            tol: float = 1e-9) -> TrendReport:
    """Sample a family and classify how the class products behave as kappa grows.

    The family may return a CipherSpec or, for very large alphabets, a
    CirculantChannel (correctness is then perfect by construction).
    Classification is a finite-sample heuristic, not a proof.
    """
    kappas = list(kappas)
    rep = TrendReport(kappas)
    for k in kappas:
        row = _sample(family(k), tol)
        n = row["messages"]
        logn = math.log2(n) if n > 1 else 0.0
        row["eps5_log"] = float(row["eps5"]) * logn
        row["eps5_n"] = float(row["eps5"]) * n
        row["delta_log"] = float(row["delta"]) * logn
        row["kappa"] = k
        rep.rows.append(row)
    e_log, e_n, d_log = rep.column("eps5_log"), rep.column("eps5_n"), rep.column("delta_log")
    rep.classes = {
        "Pi1": "in-class" if _vanishing(e_log) and _vanishing(d_log) else "not in class",
        "Pi2": "in-class" if _vanishing(e_n) and _vanishing(d_log) else "not in class",
    }
    rep.trends = {name: _trend([float(v) for v in rep.column(name)])
                  for name in ("eps5", "eps5_log", "eps5_n", "delta_log", "I_uniform", "eps1_lo")}
    return rep
