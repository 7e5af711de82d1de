"""Round-based key agreement over a correlated source.

Alice holds x, Bob holds y with (x, y) drawn from P_XY. Odd rounds are sent by
Alice, even rounds by Bob; each round draws one transcript symbol from a table
indexed by the sender's input and the transcript so far. Keys are drawn from
output tables indexed the same way. Every table entry is a probability row,
so private randomness is folded into the tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .bounds import ROOT_HALF_LN2, BoundReport, judge
from .checks import RelationCheck, equal, leq, skipped
from .inequalities import PINSKER, fannes_bound
from .lp import solve_lp
from .metrics import MetricValue
from .probdist import (DEFAULT_TOL, FLOAT, RATIONAL, Dist, Joint, ProbError, infer_mode,
                       mutual_information, shannon_entropy, to_num, tv_rows)

DEFAULT_CAP = 10**6
ALICE, BOB = "A", "B"


class KAError(ValueError):
    """Invalid protocol description or an execution that exceeds the cap."""

    def __init__(self, message: str, where: str = ""):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


@dataclass(frozen=True)
class Table:
    """Rows keyed by (input index, transcript prefix as symbol indices).

    ``default`` answers any key that is not listed, which keeps silent rounds
    and protocols that ignore part of the transcript short.
    """

    party: str
    rows: Mapping[tuple, tuple]
    default: tuple | None = None

    def row(self, inp: int, prefix: tuple, where: str) -> tuple:
        r = self.rows.get((inp, prefix))
        if r is None:
            r = self.default
        if r is None:
            raise KAError(f"no row for input {inp} after transcript {list(prefix)}", where)
        return r


@dataclass(frozen=True)
class KASpec:
    xs: tuple
    ys: tuple
    ts: tuple
    ks: tuple
    p_xy: tuple  # p_xy[x][y]
    rounds: tuple  # Table per round
    g_a: Table
    g_b: Table
    mode: str = RATIONAL
    tol: float = DEFAULT_TOL

    @property
    def n_rounds(self) -> int:
        return len(self.rounds)

    @property
    def support(self) -> list[tuple[int, int]]:
        return [(i, j) for i, row in enumerate(self.p_xy) for j, p in enumerate(row) if p > 0]

    def zero(self):
        return Fraction(0) if self.mode == RATIONAL else 0.0


def _as_row(raw, size: int, mode: str, tol: float, where: str) -> tuple:
    if isinstance(raw, Dist):
        raw = raw.probs
    if not isinstance(raw, (list, tuple)) or len(raw) != size:
        raise KAError(f"expected a row of {size} probabilities", where)
    try:
        vals = tuple(to_num(v, mode) for v in raw)
    except ProbError as exc:
        raise KAError(str(exc), where) from None
    if any(v < 0 for v in vals):
        raise KAError("negative probability", where)
    total = sum(vals)
    if (mode == RATIONAL and total != 1) or (mode == FLOAT and abs(total - 1) > tol):
        raise KAError(f"row sums to {total}, not 1", where)
    return vals


def _table(raw: Table | Mapping, party: str, n_inputs: int, size: int, mode: str, tol: float,
           where: str) -> Table:
    if isinstance(raw, Table):
        rows, default = raw.rows, raw.default
    else:
        rows, default = raw.get("rows", {}), raw.get("default")
    fixed = {}
    for key, r in rows.items():
        inp, prefix = key
        if not 0 <= inp < n_inputs:
            raise KAError(f"input index {inp} out of range", where)
        fixed[(inp, tuple(prefix))] = _as_row(r, size, mode, tol, f"{where}[{inp}|{list(prefix)}]")
    d = None if default is None else _as_row(default, size, mode, tol, f"{where}.default")
    return Table(party, fixed, d)


def _guess_mode(p_xy, tables) -> str:
    vals = [v for row in p_xy for v in row]
    for t in tables:
        rows = t.rows if isinstance(t, Table) else t.get("rows", {})
        for r in rows.values():
            vals.extend(r)
        d = t.default if isinstance(t, Table) else t.get("default")
        if d is not None:
            vals.extend(d)
    try:
        return infer_mode(v for v in vals if not isinstance(v, str))
    except ProbError:
        return RATIONAL


def make_ka(xs, ys, ts, ks, p_xy, rounds: Sequence, g_a, g_b, mode: str | None = None,
            tol: float = DEFAULT_TOL) -> KASpec:
    """Validate and build a protocol; rounds alternate Alice, Bob, Alice, ..."""
    xs, ys, ts, ks = tuple(xs), tuple(ys), tuple(ts), tuple(ks)
    for name, a in (("X", xs), ("Y", ys), ("T", ts), ("K", ks)):
        if not a:
            raise KAError("empty alphabet", f"alphabets.{name}")
        if len(set(a)) != len(a):
            raise KAError("repeated symbol", f"alphabets.{name}")
    if len(rounds) % 2 != 1:
        raise KAError(f"round count must be odd, got {len(rounds)}", "rounds")
    if mode is None:
        mode = _guess_mode(p_xy, list(rounds) + [g_a, g_b])
    if not isinstance(p_xy, (list, tuple)) or len(p_xy) != len(xs):
        raise KAError(f"expected {len(xs)} rows", "p_xy")
    cells = []
    for i, row in enumerate(p_xy):
        if not isinstance(row, (list, tuple)) or len(row) != len(ys):
            raise KAError(f"expected {len(ys)} entries", f"p_xy[{i}]")
        try:
            cells.append(tuple(to_num(v, mode) for v in row))
        except ProbError as exc:
            raise KAError(str(exc), f"p_xy[{i}]") from None
    flat = [v for r in cells for v in r]
    if any(v < 0 for v in flat):
        raise KAError("negative probability", "p_xy")
    total = sum(flat)
    if (mode == RATIONAL and total != 1) or (mode == FLOAT and abs(total - 1) > tol):
        raise KAError(f"joint sums to {total}, not 1", "p_xy")
    tabs = []
    for i, r in enumerate(rounds):
        party = ALICE if i % 2 == 0 else BOB
        n_in = len(xs) if party == ALICE else len(ys)
        tabs.append(_table(r, party, n_in, len(ts), mode, tol, f"rounds[{i}]"))
    ga = _table(g_a, ALICE, len(xs), len(ks), mode, tol, "g_a")
    gb = _table(g_b, BOB, len(ys), len(ks), mode, tol, "g_b")
    return KASpec(xs, ys, ts, ks, tuple(cells), tuple(tabs), ga, gb, mode, tol)


# ---------------------------------------------------------------- execution

def execute_ka(s: KASpec, cap: int = DEFAULT_CAP) -> Joint:
    """Exact joint of (K_A, K_B, transcript) by enumerating every path.

    The transcript axis lists only transcripts that occur, as tuples of symbols.
    """
    supp = s.support
    size = len(supp) * len(s.ts) ** s.n_rounds
    if size > cap:
        raise KAError(f"{size} enumeration states exceed the cap {cap}; "
                      "use a smaller transcript alphabet or fewer rounds", "cap")
    paths = [(x, y, (), s.p_xy[x][y]) for x, y in supp]
    for i, tab in enumerate(s.rounds):
        nxt = []
        for x, y, pre, p in paths:
            inp = x if tab.party == ALICE else y
            row = tab.row(inp, pre, f"rounds[{i}]")
            for t, w in enumerate(row):
                if w:
                    nxt.append((x, y, pre + (t,), p * w))
        paths = nxt
    acc: dict = {}
    for x, y, pre, p in paths:
        ra = s.g_a.row(x, pre, "g_a")
        rb = s.g_b.row(y, pre, "g_b")
        for ka, wa in enumerate(ra):
            if not wa:
                continue
            for kb, wb in enumerate(rb):
                if wb:
                    key = (ka, kb, pre)
                    acc[key] = acc.get(key, s.zero()) + p * wa * wb
    transcripts = sorted({pre for _, _, pre in acc})
    labels = {pre: tuple(s.ts[t] for t in pre) for pre in transcripts}
    table = {(s.ks[a], s.ks[b], labels[pre]): p for (a, b, pre), p in acc.items()}
    return Joint(("KA", "KB", "T"), (s.ks, s.ks, [labels[p] for p in transcripts]), table, s.mode, s.tol)


# ---------------------------------------------------------------- metrics

@dataclass(frozen=True)
class SimulatorFit:
    value: Any
    q: tuple
    lower_certificate: Any
    certified: bool


def best_simulated_transcript(joint_kt: Sequence[Sequence], pk: Sequence) -> SimulatorFit:
    """min over Q of sum_{k,t} (P(k,t) - P(k) Q(t))^+ by water-filling.

    Each transcript's term is convex and piecewise linear in Q(t) with
    breakpoints P(t|k); spending the unit mass on the steepest segments first
    is optimal. The Lagrange bound at the final slope certifies the value.
    """
    nk, nt = len(joint_kt), len(joint_kt[0])
    zero = pk[0] * 0
    segments = []
    for t in range(nt):
        ks = [k for k in range(nk) if pk[k] > 0]
        bps = sorted({joint_kt[k][t] / pk[k] for k in ks})
        prev = zero
        for b in bps:
            slope = sum((pk[k] for k in ks if joint_kt[k][t] / pk[k] > prev), zero)
            if slope > 0 and b > prev:
                segments.append((slope, t, b - prev))
            prev = b
    segments.sort(key=lambda s: (-s[0], s[1]))
    q = [zero] * nt
    left = zero + 1
    lam = zero
    for slope, t, length in segments:
        if left <= 0:
            break
        take = min(length, left)
        q[t] += take
        left -= take
        lam = slope
    if left > 0:
        # every term is flat from here on; park the rest anywhere
        q[0] += left
        lam = zero

    def term(t, v):
        return sum((joint_kt[k][t] - pk[k] * v for k in range(nk) if joint_kt[k][t] > pk[k] * v), zero)

    value = sum((term(t, q[t]) for t in range(nt)), zero)
    # dual bound: sum_t min_v (term(t, v) + lam v) - lam
    bound = -lam
    for t in range(nt):
        pts = [zero] + [joint_kt[k][t] / pk[k] for k in range(nk) if pk[k] > 0]
        bound += min(term(t, v) + lam * v for v in pts)
    exact = isinstance(zero, Fraction)
    certified = (bound == value) if exact else abs(bound - value) <= 1e-9
    return SimulatorFit(value, tuple(q), bound, certified)


def simulator_fit_lp(joint_kt: Sequence[Sequence], pk: Sequence, exact: bool = True):
    """The same minimum as a linear program, for cross-checking."""
    nk, nt = len(joint_kt), len(joint_kt[0])
    cells = [(k, t) for k in range(nk) for t in range(nt)]
    nvar = nt + len(cells)
    A_ub, b_ub = [], []
    for i, (k, t) in enumerate(cells):
        row = [0] * nvar
        row[t] = -pk[k]
        row[nt + i] = -1
        A_ub.append(row)
        b_ub.append(-joint_kt[k][t])
    A_eq = [[1] * nt + [0] * len(cells)]
    cost = [0] * nt + [1] * len(cells)
    return solve_lp(cost, A_ub, b_ub, A_eq, [1], exact=exact)


@dataclass(frozen=True)
class KAReport:
    delta1: MetricValue
    delta2: MetricValue
    eps1: MetricValue
    eps2: MetricValue
    eps3: MetricValue
    simulator: tuple
    disagreement: Any
    key_distance: tuple  # distances of the two key marginals to uniform
    sizes: dict
    mode: str
    tol: float = DEFAULT_TOL
    extras: dict = field(default_factory=dict)


def _rows_kt(j: Joint, ks: tuple) -> tuple[list, list, tuple]:
    kt = j.marginal("KA", "T")
    ts = kt.alphabets[1]
    zero = Fraction(0) if j.mode == RATIONAL else 0.0
    rows = [[kt.prob((k, t)) for t in ts] for k in ks]
    pk = [sum(r, zero) for r in rows]
    return rows, pk, ts


def ka_metrics(s: KASpec, cap: int = DEFAULT_CAP) -> KAReport:
    j = execute_ka(s, cap)
    ks = s.ks
    n = len(ks)
    zero = s.zero()
    one = zero + 1
    uniform = [one / n] * n
    kab = j.marginal("KA", "KB")
    pa = list(j.marginal_dist("KA").probs)
    pb = list(j.marginal_dist("KB").probs)
    miss = sum((p for (a, b), p in kab.items() if a != b), zero)
    h = shannon_entropy(pa)
    if s.mode == RATIONAL and all(p == one / n for p in pa):
        deficit = 0.0
    else:
        deficit = max(math.log2(n) - h, 0.0)
    d1 = miss if deficit == 0 else max(float(miss), deficit)
    ideal = [[one / n if a == b else zero for b in range(n)] for a in range(n)]
    d2 = tv_rows([kab.prob((ks[a], ks[b])) for a in range(n) for b in range(n)],
                 [v for r in ideal for v in r])
    ka_t = j.marginal("KA", "T")
    e1 = mutual_information(ka_t)
    rows, pk, ts = _rows_kt(j, ks)
    pt = [sum((rows[k][t] for k in range(n)), zero) for t in range(len(ts))]
    e2 = sum((max(rows[k][t] - pk[k] * pt[t], zero) for k in range(n) for t in range(len(ts))), zero)
    fit = best_simulated_transcript(rows, pk)
    e3 = fit.value
    sim_lo = max(e3 / 3, d2)
    sim_hi = min(e3 + 2 * d2, one)
    return KAReport(
        delta1=MetricValue.exact(d1, None, "max of disagreement and entropy deficit"),
        delta2=MetricValue.exact(d2, None, "distance of the key pair to the ideal shared key"),
        eps1=MetricValue.exact(e1, None, "mutual information of Alice's key and the transcript"),
        eps2=MetricValue.exact(e2, None, "distance to the product of marginals"),
        eps3=MetricValue.exact(e3, {"Q": tuple(fit.q), "dual_bound": fit.lower_certificate,
                                    "certified": fit.certified}, "water-filling with Lagrange certificate"),
        simulator=(sim_lo, sim_hi),
        disagreement=miss,
        key_distance=(tv_rows(pa, uniform), tv_rows(pb, uniform)),
        sizes={"keys": n, "transcripts": len(s.ts), "rounds": s.n_rounds,
               "support": len(s.support)},
        mode=s.mode, tol=s.tol)


def ka_simulator_interval(r: KAReport) -> tuple:
    return r.simulator


def check_relation_ka(r: KAReport, n_keys: int | None = None, n_transcripts: int | None = None,
                      n_rounds: int | None = None, tol: float | None = None) -> list[RelationCheck]:
    tol = r.tol if tol is None else tol
    nk = r.sizes["keys"] if n_keys is None else n_keys
    nt = r.sizes["transcripts"] if n_transcripts is None else n_transcripts
    lam = r.sizes["rounds"] if n_rounds is None else n_rounds
    d1, d2 = r.delta1.value, r.delta2.value
    e1, e2, e3 = r.eps1.value, r.eps2.value, r.eps3.value
    out = [leq("delta2 <= delta1 + sqrt(delta1 ln2 / 2)", float(d2),
               float(d1) + math.sqrt(float(d1) * math.log(2) / 2), tol)]
    if d2 > Fraction(1, 4):
        out.append(skipped("delta1 <= -2 delta2 log(2 delta2/|K|)", "precondition unmet: delta2 > 1/4"))
    else:
        out.append(leq("delta1 <= -2 delta2 log(2 delta2/|K|)", float(d1), fannes_bound(d2, nk), tol))
    out.append(leq("(2/ln2) eps2^2 <= eps1", PINSKER * float(e2) ** 2, e1, tol))
    size = nk * nt ** lam
    if size < 3 and e2 > Fraction(1, 4):
        out.append(skipped("eps1 <= -2 eps2 log(2 eps2/(|K||T|^l))", "precondition unmet"))
    else:
        out.append(leq("eps1 <= -2 eps2 log(2 eps2/(|K||T|^l))", e1, fannes_bound(e2, size), tol))
    out.append(leq("eps3 <= eps2", e3, e2, tol))
    out.append(leq("eps2 <= 2 eps3", e2, 2 * e3, tol))
    # the coupling sandwich on delta2
    miss = r.disagreement
    out.append(leq("Pr{KA != KB} <= delta2", miss, d2, tol))
    out.append(leq("delta2 <= Pr{KA != KB} + min key distance", d2, miss + min(r.key_distance), tol))
    lo, hi = r.simulator
    out.append(leq("simulator interval is ordered", lo, hi, tol))
    cert = r.eps3.witness or {}
    if "dual_bound" in cert:
        out.append(equal("eps3 dual bound meets primal", cert["dual_bound"], e3, tol))
    return out


# ---------------------------------------------------------------- bounds

def support_size(s: KASpec) -> int:
    return len(s.support)


def support_entropy(s: KASpec):
    """H0(X, Y) in bits; an int when the support size is a power of two, keeping bounds exact."""
    n = support_size(s)
    return n.bit_length() - 1 if n & (n - 1) == 0 else math.log2(n)


def ka_lower_bound(s: KASpec, target: Dist | Sequence) -> Any:
    """max(0, 1 - 2^(H0(X,Y) - Hmin(K))) = max(0, 1 - |supp P_XY| max P_K)."""
    probs = target.probs if isinstance(target, Dist) else tuple(target)
    pmax = max(probs)
    val = 1 - support_size(s) * pmax
    return max(val, val * 0)


def _resource_rhs(h0, n_keys: int):
    """1 - 2^h0 / |K|, exact when 2^h0 is an integer."""
    power = 2 ** h0 if isinstance(h0, int) else 2.0 ** float(h0)
    if not isinstance(power, int) and abs(power - round(power)) < 1e-9:
        power = int(round(power))
    if isinstance(power, int):
        return 1 - Fraction(power, n_keys)
    return 1 - power / n_keys


_C1 = 2 * (1 + ROOT_HALF_LN2)


def check_bound303(r: KAReport, h0, n_keys: int | None = None, tol: float | None = None) -> list[BoundReport]:
    tol = r.tol if tol is None else tol
    nk = r.sizes["keys"] if n_keys is None else n_keys
    rhs = _resource_rhs(h0, nk)
    d1, d2 = float(r.delta1.value), r.delta2.value
    e1 = float(r.eps1.value)
    out = []
    note = "" if d1 <= 1 else "delta1 above 1: stated precondition unmet"
    v = _C1 * math.sqrt(d1) + ROOT_HALF_LN2 * math.sqrt(e1)
    out.append(judge("(i) 2(1+sqrt(ln2/2)) delta1^(1/2) + sqrt(ln2/2) eps1^(1/2)", v, v, rhs, tol, note))
    for jn, e in (("2", r.eps2.value), ("3", r.eps3.value)):
        v = _C1 * math.sqrt(d1) + float(e)
        out.append(judge(f"(ii) 2(1+sqrt(ln2/2)) delta1^(1/2) + eps{jn}", v, v, rhs, tol, note))
    v = 2 * float(d2) + ROOT_HALF_LN2 * math.sqrt(e1)
    out.append(judge("(iii) 2 delta2 + sqrt(ln2/2) eps1^(1/2)", v, v, rhs, tol))
    for jn, e in (("2", r.eps2.value), ("3", r.eps3.value)):
        v = 2 * d2 + e
        out.append(judge(f"(iv) 2 delta2 + eps{jn}", v, v, rhs, tol))
    return out


def _ka_branch(kind) -> str:
    if isinstance(kind, str):
        if kind not in ("i", "ii", "iii", "iv"):
            raise ValueError(f"unknown branch {kind!r}")
        return kind
    i, j = kind
    if i not in (1, 2) or j not in (1, 2, 3):
        raise ValueError(f"no key agreement type {kind!r}")
    return {(1, 1): "i", (2, 1): "iii"}.get((i, j), "ii" if i == 1 else "iv")


def ka_branch_lhs(delta, eps, kind) -> Any:
    """The advantage combination of one branch; linear branches stay exact."""
    b = _ka_branch(kind)
    if b == "i":
        return ROOT_HALF_LN2 * math.sqrt(float(eps)) + _C1 * math.sqrt(float(delta))
    if b == "ii":
        return float(eps) + _C1 * math.sqrt(float(delta))
    if b == "iii":
        return ROOT_HALF_LN2 * math.sqrt(float(eps)) + 2 * float(delta)
    return eps + 2 * delta


def ka_resource_bound(delta, eps, kind) -> Any:
    """Smallest 2^H0(X,Y) / |K| compatible with (delta, eps) for the branch."""
    for name, v in (("delta", delta), ("eps", eps)):
        if not 0 <= v <= 1:
            raise ValueError(f"{name} must lie in [0, 1]")
    val = 1 - ka_branch_lhs(delta, eps, kind)
    return max(val, val * 0)


def ka_impossible(delta, eps, h0, h_min, kind) -> bool:
    """True when the branch combination falls strictly below 1 - 2^(H0 - Hmin)."""
    threshold = 1 - 2.0 ** (float(h0) - float(h_min))
    if isinstance(h0, int) and isinstance(h_min, int):
        threshold = 1 - Fraction(2) ** (h0 - h_min)
    return ka_branch_lhs(delta, eps, kind) < threshold


def resource_impossible(eps_hat, h0, h_min) -> bool:
    """No protocol reaches simulator distance eps_hat below 1 - 2^(H0 - Hmin)."""
    return eps_hat < 1 - 2.0 ** (float(h0) - float(h_min))


def expansion_impossible(eps_hat, shared_bits: int, h_min) -> bool:
    """Stretching a uniform key of ``shared_bits`` bits into a key of min-entropy h_min."""
    return resource_impossible(eps_hat, shared_bits, h_min)


# ---------------------------------------------------------------- sample protocols

def _point(n: int, i: int) -> tuple:
    return tuple(Fraction(int(j == i)) for j in range(n))


def pre_shared_key(n: int) -> KASpec:
    """X = Y uniform over n symbols, a single constant round, both output their input."""
    xs = tuple(range(n))
    p = [[Fraction(1, n) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    g = {"rows": {(i, (0,)): _point(n, i) for i in range(n)}}
    return make_ka(xs, xs, (0,), xs, p, [{"default": (Fraction(1),)}], g, g)


def public_reveal(n: int) -> KASpec:
    """Alice announces x; both keys equal the announced symbol."""
    xs = tuple(range(n))
    p = [[Fraction(1, n)] for _ in range(n)]
    r1 = {"rows": {(i, ()): _point(n, i) for i in range(n)}}
    ga = {"rows": {(i, (i,)): _point(n, i) for i in range(n)}}
    gb = {"rows": {(0, (i,)): _point(n, i) for i in range(n)}}
    return make_ka(xs, (0,), xs, xs, p, [r1], ga, gb)


def biased_shared_key(p0) -> KASpec:
    p0 = Fraction(p0)
    p = [[p0, Fraction(0)], [Fraction(0), 1 - p0]]
    g = {"rows": {(i, (0,)): _point(2, i) for i in range(2)}}
    return make_ka((0, 1), (0, 1), (0,), (0, 1), p, [{"default": (Fraction(1),)}], g, g)


def expansion_protocol(shared_bits: int, key_bits: int) -> KASpec:
    """Both parties pad a shared uniform key with zeros: the naive key expansion."""
    n, m = 2 ** shared_bits, 2 ** key_bits
    if m < n:
        raise ValueError("key must be at least as long as the shared secret")
    xs = tuple(range(n))
    p = [[Fraction(1, n) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    g = {"rows": {(i, (0,)): _point(m, i) for i in range(n)}}
    return make_ka(xs, xs, (0,), tuple(range(m)), p, [{"default": (Fraction(1),)}], g, g)
