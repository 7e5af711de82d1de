"""Correctness and secrecy parameters of a cipher, exact where possible.

Index map for ``SecurityReport.eps``:

    1   sup over message priors of I(M;C), the channel capacity
    2   sup of Delta(P_MC, P_M P_C)
    3   sup of max_m Delta(P_C|m, P_C)          equals 5
    4   sup of max_c Delta(P_M|c, P_M)
    5   max pairwise distance of ciphertext rows
    6   max pairwise advantage of a binary test  equals 5
    7   semantic-security advantage, interval only
    8   simulator distance of the whole system, interval only
    9   inf over Q of sup of Delta(P_MC, P_M Q)  equals 10
    10  inf over Q of max_m Delta(P_C|m, Q), the TV Chebyshev radius
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Any, Sequence

import numpy as np

from .capacity import DenseKernel, blahut_arimoto, rationalize
from .cipher import CipherSpec, channel_rows, decryption_output, per_message_error
from .lp import LPError, solve_lp, verify_certificate
from .probdist import RATIONAL, binary_entropy, tv_rows

EXACT = "exact"
INTERVAL = "interval"
EXACT_LP_LIMIT = 4096


class ReportInconsistency(AssertionError):
    """A computed report contradicts an identity that must hold."""


@dataclass(frozen=True)
class MetricValue:
    kind: str
    lo: Any
    hi: Any
    witness: dict | None = None
    note: str = ""

    @classmethod
    def exact(cls, value, witness: dict | None = None, note: str = "") -> "MetricValue":
        return cls(EXACT, value, value, witness, note)

    @classmethod
    def interval(cls, lo, hi, witness: dict | None = None, note: str = "") -> "MetricValue":
        if lo > hi:
            raise ReportInconsistency(f"interval lower end {lo} exceeds upper end {hi}")
        return cls(INTERVAL, lo, hi, witness, note)

    @property
    def value(self):
        if self.kind != EXACT:
            raise ValueError("interval metric has no single value")
        return self.lo

    @property
    def is_exact(self) -> bool:
        return self.kind == EXACT

    def contains(self, x, tol: float = 0.0) -> bool:
        return self.lo - tol <= x <= self.hi + tol


# ---------------------------------------------------------------- evaluators

def _zero(rows):
    return Fraction(0) if rows and rows[0] and isinstance(rows[0][0], Fraction) else 0.0


def output_row(rows, pm: Sequence) -> list:
    out = [_zero(rows)] * len(rows[0])
    for w, r in zip(pm, rows):
        if w:
            out = [o + w * v for o, v in zip(out, r)]
    return out


def joint_independence_distance(rows, pm: Sequence):
    """Delta(P_MC, P_M P_C) at a fixed message prior."""
    q = output_row(rows, pm)
    parts = [w * tv_rows(r, q) for w, r in zip(pm, rows) if w]
    return sum(parts, _zero(rows))


def posterior_prior_distance(rows, pm: Sequence) -> tuple:
    """max_c Delta(P_M|c, P_M) at a fixed prior, with the maximizing c."""
    q = output_row(rows, pm)
    best, arg = _zero(rows), None
    for c, qc in enumerate(q):
        if qc <= 0:
            continue
        d = sum((w * (r[c] / qc - 1) for w, r in zip(pm, rows) if w and r[c] > qc), _zero(rows))
        if arg is None or d > best:
            best, arg = d, c
    return best, arg


def posterior_pair_distance(rows, pm: Sequence) -> tuple:
    """max over ciphertext pairs of Delta(P_M|c0, P_M|c1) at a fixed prior."""
    q = output_row(rows, pm)
    posts = {}
    for c, qc in enumerate(q):
        if qc > 0:
            posts[c] = [w * r[c] / qc for w, r in zip(pm, rows)]
    best, arg = _zero(rows), None
    for c0, c1 in combinations(sorted(posts), 2):
        d = tv_rows(posts[c0], posts[c1])
        if arg is None or d > best:
            best, arg = d, (c0, c1)
    return best, arg


def _batch_joint_tv(W: np.ndarray, P: np.ndarray) -> np.ndarray:
    Q = P @ W
    D = 0.5 * np.abs(W[None, :, :] - Q[:, None, :]).sum(axis=2)
    return (P * D).sum(axis=1)


def _batch_posterior(W: np.ndarray, P: np.ndarray) -> np.ndarray:
    Q = P @ W
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(Q[:, None, :] > 0, W[None, :, :] / Q[:, None, :], 1.0)
    gain = (P[:, :, None] * np.maximum(ratio - 1.0, 0.0)).sum(axis=1)
    return gain.max(axis=1)


def _batch_posterior_pair(W: np.ndarray, P: np.ndarray) -> np.ndarray:
    Q = P @ W
    with np.errstate(divide="ignore", invalid="ignore"):
        post = np.where(Q[:, None, :] > 0, P[:, :, None] * W[None, :, :] / Q[:, None, :], np.nan)
    nc = W.shape[1]
    best = np.zeros(P.shape[0])
    for a, b in combinations(range(nc), 2):
        d = 0.5 * np.abs(post[:, :, a] - post[:, :, b]).sum(axis=1)
        best = np.fmax(best, np.nan_to_num(d, nan=0.0))
    return best


def _local_search(batch_f, W: np.ndarray, p0: np.ndarray, min_step: float = 1e-8,
                  max_moves: int = 2000) -> tuple[np.ndarray, float]:
    """Coordinate ascent on the simplex by pairwise mass transfers."""
    n = len(p0)
    p = p0.copy()
    val = float(batch_f(W, p[None, :])[0])
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    if not pairs:
        return p, val
    src = np.array([i for i, _ in pairs])
    dst = np.array([j for _, j in pairs])
    step = 0.25
    moves = 0
    while step >= min_step and moves < max_moves:
        amt = np.minimum(step, p[src])
        cand = np.repeat(p[None, :], len(pairs), axis=0)
        cand[np.arange(len(pairs)), src] -= amt
        cand[np.arange(len(pairs)), dst] += amt
        vals = batch_f(W, cand)
        k = int(np.argmax(vals))
        if vals[k] > val + 1e-15 and amt[k] > 0:
            p, val = cand[k], float(vals[k])
            moves += 1
        else:
            step /= 2
    return p, val


def _seeds(W: np.ndarray, pair: tuple | None, restarts: int, seed: int) -> list[np.ndarray]:
    n = W.shape[0]
    out = [np.full(n, 1.0 / n)]
    if pair is not None:
        p = np.zeros(n)
        p[list(pair)] = 0.5
        out.append(p)
    rng = np.random.default_rng(seed)
    out.extend(rng.dirichlet(np.ones(n)) for _ in range(restarts))
    return out


# ---------------------------------------------------------------- metrics

def _rows(s: CipherSpec):
    return channel_rows(s)


def delta_all(s: CipherSpec) -> MetricValue:
    errs = per_message_error(s)
    worst = max(range(len(errs)), key=lambda m: (errs[m], -m))
    value = errs[worst]
    if s.mode == RATIONAL:
        # second route: distance between the decrypted-output law and the ideal point mass
        for m, msg in enumerate(s.messages):
            out = decryption_output(s, m)
            ideal = [Fraction(int(o == msg)) for o in s.outputs]
            d = tv_rows(out, ideal) if msg in s.outputs else Fraction(1)
            if d != errs[m]:
                raise ReportInconsistency(f"vertex error route disagrees for {msg!r}: {d} vs {errs[m]}")
    return MetricValue.exact(value, {"message": s.messages[worst]},
                             "worst-case decryption error; equals the prior-averaged forms")


def _max_pair(rows):
    best, arg = _zero(rows), None
    for a, b in combinations(range(len(rows)), 2):
        d = tv_rows(rows[a], rows[b])
        if arg is None or d > best:
            best, arg = d, (a, b)
    return best, arg


def eps_ind(s: CipherSpec) -> MetricValue:
    rows = _rows(s)
    best, arg = _max_pair(rows)
    if arg is None:
        return MetricValue.exact(best, None, "single message: empty maximum")
    return MetricValue.exact(best, {"pair": (s.messages[arg[0]], s.messages[arg[1]])},
                             "max pairwise distance of ciphertext rows")


def eps_test_advantage(s: CipherSpec, exhaustive_limit: int = 10) -> MetricValue:
    """Best binary test advantage between two messages, computed from test sets."""
    rows = _rows(s)
    nc = len(s.ciphertexts)
    zero = _zero(rows)
    best, arg = zero, None
    for a, b in combinations(range(len(rows)), 2):
        if nc <= exhaustive_limit:
            for bits in product((0, 1), repeat=nc):
                adv = sum((rows[a][c] - rows[b][c] for c in range(nc) if bits[c]), zero)
                adv = abs(adv)
                if arg is None or adv > best:
                    best, arg = adv, (a, b, bits)
        else:
            bits = tuple(int(rows[a][c] > rows[b][c]) for c in range(nc))
            adv = sum((rows[a][c] - rows[b][c] for c in range(nc) if bits[c]), zero)
            if arg is None or adv > best:
                best, arg = adv, (a, b, bits)
    if arg is None:
        return MetricValue.exact(best, None, "single message: empty maximum")
    a, b, bits = arg
    return MetricValue.exact(best, {"pair": (s.messages[a], s.messages[b]),
                                    "test": tuple(c for c, f in zip(s.ciphertexts, bits) if f)},
                             "best binary test between two messages")


@dataclass(frozen=True)
class RadiusLP:
    value: Any
    center: tuple
    certificate_ok: bool
    exact: bool


def chebyshev_radius(rows, tol: float = 1e-9, force_float: bool = False) -> RadiusLP:
    """min over Q of max_m Delta(row_m, Q), solved as a linear program."""
    nm, nc = len(rows), len(rows[0])
    exact = isinstance(_zero(rows), Fraction) and nm * nc <= EXACT_LP_LIMIT and not force_float
    cols = [c for c in range(nc) if any(r[c] > 0 for r in rows)]
    slacks = [(m, c) for m in range(nm) for c in cols if rows[m][c] > 0]
    nq, ns = len(cols), len(slacks)
    nvar = nq + ns + 1
    qi = {c: i for i, c in enumerate(cols)}
    A_ub, b_ub = [], []
    for k, (m, c) in enumerate(slacks):
        r = [0] * nvar
        r[qi[c]] = -1
        r[nq + k] = -1
        A_ub.append(r)
        b_ub.append(-rows[m][c])
    for m in range(nm):
        r = [0] * nvar
        for k, (mm, _) in enumerate(slacks):
            if mm == m:
                r[nq + k] = 1
        r[-1] = -1
        A_ub.append(r)
        b_ub.append(0)
    A_eq = [[1] * nq + [0] * (ns + 1)]
    b_eq = [1]
    cost = [0] * (nvar - 1) + [1]
    res = solve_lp(cost, A_ub, b_ub, A_eq, b_eq, exact=exact)
    cert = verify_certificate(res, cost, A_ub, b_ub, A_eq, b_eq, tol=tol)
    zero = Fraction(0) if exact else 0.0
    center = [zero] * nc
    for c in cols:
        center[c] = res.x[qi[c]] if exact else max(float(res.x[qi[c]]), 0.0)
    if not exact:
        total = sum(center)
        center = [v / total for v in center]
    return RadiusLP(res.value if exact else max(float(res.value), 0.0), tuple(center), cert.ok, exact)


def eps_radius(s: CipherSpec) -> MetricValue:
    rows = _rows(s)
    lp = chebyshev_radius(rows, s.tol)
    if not lp.certificate_ok:
        raise LPError("radius LP certificate failed verification")
    # the value is attained by the center: recheck directly
    direct = max(tv_rows(r, list(lp.center)) for r in rows)
    if lp.exact and direct != lp.value:
        raise ReportInconsistency(f"radius LP value {lp.value} but center attains {direct}")
    return MetricValue.exact(lp.value if lp.exact else float(direct),
                             {"Q": lp.center, "dual_certificate": "verified"},
                             "exact simplex optimum" if lp.exact else "HiGHS optimum within tolerance")


def eps_mi_sup(s: CipherSpec, tol: float = 1e-9, max_iter: int = 100_000) -> MetricValue:
    rows = _rows(s)
    if all(r == rows[0] for r in rows):
        return MetricValue.exact(Fraction(0) if s.mode == RATIONAL else 0.0,
                                 {"P_M": "any"}, "identical ciphertext rows: capacity zero")
    res = blahut_arimoto(DenseKernel(rows), tol, max_iter)
    note = "Blahut-Arimoto duality gap" + ("" if res.converged else "; iteration cap reached")
    return MetricValue.interval(res.lo, res.hi, {"P_M": tuple(float(v) for v in res.p),
                                                 "iterations": res.iterations}, note)


def eps_joint_tv(s: CipherSpec, restarts: int = 6, seed: int = 0,
                 eps3: MetricValue | None = None) -> MetricValue:
    rows = _rows(s)
    nm = len(rows)
    e3 = eps3 if eps3 is not None else eps_ind(s)
    top = e3.value
    if nm == 1 or top == 0:
        return MetricValue.exact(top * 0, None, "zero because the row maximum is zero")
    half = top / 2
    pair = tuple(s.messages.index(x) for x in e3.witness["pair"])
    if nm == 2:
        w = [Fraction(1, 2), Fraction(1, 2)] if s.mode == RATIONAL else [0.5, 0.5]
        return MetricValue.exact(half, {"P_M": tuple(w)},
                                 "two messages: objective is 2p(1-p) times the row distance")
    W = np.asarray([[float(v) for v in r] for r in rows])
    best_p, best_v = None, -1.0
    for p0 in _seeds(W, pair, restarts, seed):
        p, v = _local_search(_batch_joint_tv, W, p0)
        if v > best_v:
            best_p, best_v = p, v
    if s.mode == RATIONAL:
        cand = rationalize(best_p)
        val = joint_independence_distance(rows, cand)
    else:
        cand, val = [float(v) for v in best_p], best_v
    if val >= half:
        lo, wit = val, {"P_M": tuple(cand)}
    else:
        h = Fraction(1, 2) if s.mode == RATIONAL else 0.5
        pm = [h * 0] * nm
        for i in pair:
            pm[i] = h
        lo, wit = half, {"P_M": tuple(pm)}
    return MetricValue.interval(lo, top, wit,
                                "lower end attained by witness prior; upper end is the row maximum")


def column_posterior_sup(col: Sequence) -> Any:
    """sup over priors of Delta(P_M|c, P_M) for one ciphertext column.

    For fixed mean the objective is a convex expectation, so two-point priors
    on the smallest and largest entries are optimal; optimizing the split gives
    (sqrt(hi) - sqrt(lo)) / (sqrt(hi) + sqrt(lo)).
    """
    lo, hi = min(col), max(col)
    if hi == 0 or lo == hi:
        return lo * 0
    if lo == 0:
        return hi / hi
    if isinstance(lo, Fraction):
        root = _exact_sqrt(lo * hi)
        if root is not None:
            # multiply through by sqrt(hi)
            return (hi - root) / (hi + root)
    a, b = math.sqrt(float(lo)), math.sqrt(float(hi))
    return (b - a) / (b + a)


def _exact_sqrt(x: Fraction) -> Fraction | None:
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _two_point_prior(col: Sequence, mode: str) -> tuple[int, int, Any, bool]:
    """Indices of the smallest and largest entries and the optimal weight on the largest.

    The weight is exact when the optimum is rational; ``attained`` is False
    when the smallest entry is zero and the supremum is only a limit.
    """
    nm = len(col)
    lo_i = min(range(nm), key=lambda m: (col[m], m))
    hi_i = max(range(nm), key=lambda m: (col[m], -m))
    lo, hi = col[lo_i], col[hi_i]
    if lo == 0:
        return lo_i, hi_i, None, False
    if mode == RATIONAL:
        root = _exact_sqrt(lo * hi)
        if root is not None:
            return lo_i, hi_i, (root - lo) / (hi - lo), True
        t = (math.sqrt(float(lo) * float(hi)) - float(lo)) / float(hi - lo)
        return lo_i, hi_i, Fraction(t).limit_denominator(10**9), False
    return lo_i, hi_i, (math.sqrt(lo * hi) - lo) / (hi - lo), True


def eps_posterior(s: CipherSpec) -> MetricValue:
    """Exact value via the per-column closed form, maximized over columns."""
    rows = _rows(s)
    nm, nc = len(rows), len(rows[0])
    if nm == 1:
        return MetricValue.exact(_zero(rows), None, "single message: posterior equals prior")
    best, arg = None, None
    for c in range(nc):
        col = [rows[m][c] for m in range(nm)]
        if max(col) == 0:
            continue
        v = column_posterior_sup(col)
        if best is None or v > best:
            best, arg = v, c
    if best == 0:
        return MetricValue.exact(best, {"c": s.ciphertexts[arg]}, "posterior never moves")
    col = [rows[m][arg] for m in range(nm)]
    lo_i, hi_i, t, attained = _two_point_prior(col, s.mode)
    if t is None:
        return MetricValue.exact(best, {"c": s.ciphertexts[arg], "limit_vertex": s.messages[lo_i],
                                        "other": s.messages[hi_i]},
                                 "supremum 1 approached as the prior concentrates on a message "
                                 "that never yields c")
    zero = Fraction(0) if s.mode == RATIONAL else 0.0
    prior = [zero] * nm
    prior[hi_i], prior[lo_i] = t, 1 - t
    return MetricValue.exact(best, {"c": s.ciphertexts[arg], "P_M": tuple(prior), "attained": attained},
                             "closed form per column: (sqrt(max) - sqrt(min)) / (sqrt(max) + sqrt(min))")


def eps_posterior_pair(s: CipherSpec, restarts: int = 6, seed: int = 0,
                       eps4: MetricValue | None = None, extra_priors: Sequence = ()) -> MetricValue:
    """sup of the largest distance between two posteriors, bracketed.

    It lies between eps4 and 2 eps4 by the triangle inequality through the prior.
    """
    rows = _rows(s)
    nm = len(rows)
    e4 = eps4 if eps4 is not None else eps_posterior(s)
    if nm == 1 or e4.hi == 0:
        return MetricValue.exact(e4.hi * 0, None, "posteriors all equal the prior")
    W = np.asarray([[float(v) for v in r] for r in rows])
    pair = _max_pair(rows)[1]
    cands = []
    for p0 in _seeds(W, pair, restarts, seed):
        cands.append(_local_search(_batch_posterior_pair, W, p0)[0])
    zero = Fraction(0) if s.mode == RATIONAL else 0.0
    best_v, best_p = zero, None
    exact_cands = [list(p) for p in extra_priors]
    for p in cands:
        exact_cands.append(rationalize(p) if s.mode == RATIONAL else [float(v) for v in p])
    for pm in exact_cands:
        v, _ = posterior_pair_distance(rows, pm)
        if best_p is None or v > best_v:
            best_v, best_p = v, pm
    lo = max(best_v, e4.lo)
    hi = min(2 * e4.hi, e4.hi / e4.hi)
    wit = {"P_M": tuple(best_p)} if best_v >= e4.lo else e4.witness
    return MetricValue.interval(lo, hi, wit, "between the prior-form value and twice it")


def uniform_input_posterior_bound(delta, eps3, n_messages: int, n_ciphertexts: int) -> float:
    """2 eps3 |C| / (1 - sqrt(2 ln 2 * eta)) with eta from Fano at the uniform prior.

    Kept for comparison only: the estimate of the smallest output probability
    behind it holds at the uniform prior, not at every prior, and the posterior
    closed form exceeds it on small examples (see tests).
    """
    eta = math.log2(n_ciphertexts) - (1 - float(delta)) * math.log2(n_messages) + binary_entropy(delta)
    den = 1 - math.sqrt(2 * math.log(2) * max(eta, 0.0))
    if den <= 0:
        return math.inf
    return 2 * float(eps3) * n_ciphertexts / den


def eps_semantic(eps6: MetricValue) -> MetricValue:
    v = eps6.value
    return MetricValue.interval(v / 4, v, None, "bracketed by the test advantage; exact value not computed")


def eps_composable(eps9: MetricValue, delta: MetricValue) -> MetricValue:
    lo = max(eps9.value, delta.value)
    hi = eps9.value + delta.value
    one = hi / hi if hi else hi
    if hi > 1:
        hi = one if isinstance(hi, Fraction) else 1.0
    return MetricValue.interval(lo, hi, eps9.witness,
                                "between max and sum of the radius and the decryption error")


@dataclass(frozen=True)
class SecurityReport:
    delta: MetricValue
    eps: dict
    sizes: dict
    mode: str
    tol: float = 1e-9
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        _assert_consistent(self)

    def metric(self, j: int) -> MetricValue:
        return self.eps[j]


def _assert_consistent(r: SecurityReport) -> None:
    tol = 0 if r.mode == RATIONAL else r.tol
    e = r.eps

    def eq(a, b, what):
        if (a != b) if tol == 0 else abs(a - b) > tol:
            raise ReportInconsistency(f"{what}: {a} != {b}")

    def le(a, b, what):
        if a > b + tol:
            raise ReportInconsistency(f"{what}: {a} > {b}")

    for j, m in e.items():
        le(m.lo, m.hi, f"eps{j} interval")
    eq(e[3].value, e[5].value, "eps3 = eps5")
    eq(e[5].value, e[6].value, "eps5 = eps6")
    eq(e[9].value, e[10].value, "eps9 = eps10")
    le(e[3].value / 2, e[2].lo, "eps3/2 <= eps2")
    le(e[2].hi, e[3].value, "eps2 <= eps3")
    le(e[10].value, e[5].value, "eps10 <= eps5")
    le(e[5].value / 2, e[10].value, "eps5/2 <= eps10")
    le(e[2].lo, e[4].hi, "eps2 <= eps4")


def security_report(s: CipherSpec, tol: float | None = None, restarts: int = 6,
                    seed: int = 0) -> SecurityReport:
    tol = s.tol if tol is None else tol
    d = delta_all(s)
    e5 = eps_ind(s)
    e6 = eps_test_advantage(s)
    e3 = MetricValue.exact(e5.value, e5.witness, "equals the row maximum (limit of near-vertex priors)")
    e10 = eps_radius(s)
    e9 = MetricValue.exact(e10.value, e10.witness, "equals the radius: the sup over priors is a max over vertices")
    e1 = eps_mi_sup(s, tol)
    e2 = eps_joint_tv(s, restarts, seed, e3)
    e4 = eps_posterior(s)
    e7 = eps_semantic(e6)
    e8 = eps_composable(e9, d)
    eps = {1: e1, 2: e2, 3: e3, 4: e4, 5: e5, 6: e6, 7: e7, 8: e8, 9: e9, 10: e10}
    return SecurityReport(d, eps, dict(s.sizes), s.mode, tol)


def is_type_secure(r: SecurityReport, i: int, j: int, delta_max, eps_max) -> str:
    if i not in (1, 2, 3) or j not in range(1, 11):
        raise ValueError(f"no security type ({i},{j})")
    tol = 0 if r.mode == RATIONAL else r.tol
    e = r.eps[j]
    if r.delta.lo > delta_max + tol or e.lo > eps_max + tol:
        return "no"
    if r.delta.hi <= delta_max + tol and e.hi <= eps_max + tol:
        return "yes"
    return "unknown"
