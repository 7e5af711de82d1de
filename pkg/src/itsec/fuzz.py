"""Random schemes and protocols, and campaigns that run every cross-check on them.

All randomness comes from SplitMix64 seeded per trial, so a failing trial is
replayed from the seed printed in the report.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .bounds import VIOLATED as BOUND_VIOLATED
from .bounds import (check_bound103, distinguisher_advantage, fanout_bound, has_deterministic_decryption,
                     pope_bound)
from .checks import VIOLATED, equal, leq
from .cipher import CipherSpec, make_spec
from .keyagree import (KASpec, _rows_kt, check_bound303, check_relation_ka, execute_ka, ka_metrics,
                       make_ka, simulator_fit_lp, support_entropy, support_size)
from .metrics import MetricValue, security_report
from .prng import SplitMix64, trial_seed
from .probdist import Dist
from .relations import check_theorem1, grid_oracle

MAX_WEIGHT = 64


def _row(rng: SplitMix64, n: int, sparse: bool = True) -> list[Fraction]:
    w = [0 if sparse and rng.chance(1, 3) else rng.randint(1, MAX_WEIGHT) for _ in range(n)]
    if not any(w):
        w[rng.below(n)] = rng.randint(1, MAX_WEIGHT)
    total = sum(w)
    return [Fraction(v, total) for v in w]


def _point(n: int, i: int) -> list[Fraction]:
    return [Fraction(int(j == i)) for j in range(n)]


def random_cipher(seed: int, max_size: int = 5) -> CipherSpec:
    """A valid scheme with alphabets of size 1..max_size and weights of denominator <= 64.

    A quarter of the draws encrypt injectively and decrypt exactly, the rest
    use arbitrary randomized tables.
    """
    rng = SplitMix64(seed)
    nk = rng.randint(1, max_size)
    nm = rng.randint(1, max_size)
    nc = rng.randint(1, max_size)
    injective = nc >= nm and rng.chance(1, 4)
    p_k = [0 if nk > 1 and rng.chance(1, 8) else rng.randint(1, MAX_WEIGHT) for _ in range(nk)]
    if not any(p_k):
        p_k[0] = 1
    p_k = [Fraction(v, sum(p_k)) for v in p_k]
    enc, dec = [], []
    for _ in range(nk):
        if injective:
            perm = rng.permutation(nc)
            enc.append([_point(nc, perm[m]) for m in range(nm)])
            inv = {perm[m]: m for m in range(nm)}
            dec.append([_point(nm, inv[c]) if c in inv else _row(rng, nm) for c in range(nc)])
            continue
        enc.append([_row(rng, nc) for _ in range(nm)])
        block = []
        for _ in range(nc):
            block.append(_point(nm, rng.below(nm)) if rng.chance(1, 2) else _row(rng, nm))
        dec.append(block)
    zm = list(range(nm))
    return make_spec(range(nk), zm, range(nc), p_k, enc, dec, zm)


def random_ka(seed: int, max_size: int = 3, max_rounds: int = 3) -> KASpec:
    """A protocol with every table entry listed, sizes 1..max_size and 1 or 3 rounds."""
    rng = SplitMix64(seed)
    nx, ny, nt, nk = (rng.randint(1, max_size) for _ in range(4))
    lam = 1 + 2 * rng.below((max_rounds + 1) // 2)
    flat = _row(rng, nx * ny)
    p_xy = [flat[i * ny:(i + 1) * ny] for i in range(nx)]

    def prefixes(length: int):
        out = [()]
        for _ in range(length):
            out = [p + (t,) for p in out for t in range(nt)]
        return out

    def table(n_in: int, length: int, size: int) -> dict:
        rows = {}
        for i in range(n_in):
            for pre in prefixes(length):
                rows[(i, pre)] = _point(size, rng.below(size)) if rng.chance(1, 2) else _row(rng, size)
        return {"rows": rows}

    rounds = [table(nx if r % 2 == 0 else ny, r, nt) for r in range(lam)]
    return make_ka(range(nx), range(ny), range(nt), range(nk), p_xy, rounds,
                   table(nx, lam, nk), table(ny, lam, nk))


# ---------------------------------------------------------------- trials

@dataclass
class TrialResult:
    index: int
    seed: int
    sizes: dict
    checks: int
    violated: list = field(default_factory=list)
    skipped: int = 0
    error: str | None = None

    def as_dict(self) -> dict:
        return {"index": self.index, "seed": self.seed, "sizes": self.sizes, "checks": self.checks,
                "skipped": self.skipped, "violated": self.violated, "error": self.error}


def _corrupt(report, metric: str) -> None:
    """Negative-control hook: overwrite one parameter after the report is built."""
    j = int(metric.removeprefix("eps"))
    bad = report.eps[5].value + 1
    report.eps[j] = MetricValue.exact(bad, report.eps[j].witness, "corrupted")


def cipher_checks(s: CipherSpec, seed: int, oracle: bool = True, corrupt: str | None = None) -> list:
    r = security_report(s, seed=seed & 0xFFFF)
    if corrupt:
        _corrupt(r, corrupt)
    checks: list = list(check_theorem1(s, r))
    checks.extend(check_bound103(r))
    # randomized decryption can spread one ciphertext over more than |K| outputs,
    # so the Pope floor is only owed by deterministic decryption
    if has_deterministic_decryption(s):
        name, rhs = "Pope: distinguisher advantage >= 1 - |K|/|M|", pope_bound(len(s.keys), len(s.messages))
    else:
        name, rhs = "distinguisher advantage >= 1 - fanout/|M|", fanout_bound(s)
    pm = Dist.uniform(s.messages)
    rng = SplitMix64(seed ^ 0x5DEECE66D)
    qs = [list(r.eps[10].witness["Q"])] if r.eps[10].witness else []
    qs += [_row(rng, len(s.ciphertexts)) for _ in range(3)]
    for q in qs:
        checks.append(leq(name, rhs,
                          distinguisher_advantage(s, pm, q)))
    if oracle and len(s.messages) <= 3:
        for name, j in (("eps2", 2), ("eps4", 4)):
            o = grid_oracle(s, name, 100)
            m = r.eps[j]
            checks.append(leq(f"grid {name} <= reported upper end", o.value, float(m.hi), 1e-9))
            checks.append(leq(f"reported lower end <= grid {name} upper estimate", float(m.lo), o.upper, 1e-9))
    return checks


def ka_checks(s: KASpec, corrupt: str | None = None) -> list:
    r = ka_metrics(s)
    if corrupt:
        r = _corrupt_ka(r)
    checks: list = list(check_relation_ka(r))
    supp = support_size(s)
    checks.extend(check_bound303(r, support_entropy(s)))
    rhs = 1 - Fraction(supp, len(s.ks))
    checks.append(leq("resource bound <= simulator upper end", rhs, r.simulator[1]))
    rows, pk, _ = _rows_kt(execute_ka(s), s.ks)
    lp = simulator_fit_lp(rows, pk, exact=True)
    checks.append(equal("eps3 water-filling = simplex optimum", r.eps3.value, lp.value))
    return checks


def _corrupt_ka(r):
    return replace(r, eps3=MetricValue.exact(r.eps2.value + 1, None, "corrupted"))


def _status(c) -> str:
    return c.status


def run_trial(args: tuple) -> TrialResult:
    kind, index, campaign_seed, max_size, corrupt, oracle = args
    seed = trial_seed(campaign_seed, index)
    try:
        if kind == "cipher":
            s = random_cipher(seed, max_size)
            sizes = dict(s.sizes)
            checks = cipher_checks(s, seed, oracle, corrupt)
        else:
            s = random_ka(seed, max_size)
            sizes = {"X": len(s.xs), "Y": len(s.ys), "T": len(s.ts), "K": len(s.ks), "rounds": s.n_rounds}
            checks = ka_checks(s, corrupt)
    except Exception as exc:  # a crash is reported as a failed trial, never swallowed
        return TrialResult(index, seed, {}, 0, ["crash"], 0, f"{type(exc).__name__}: {exc}")
    bad = [c.name for c in checks if _status(c) in (VIOLATED, BOUND_VIOLATED)]
    skipped = sum(1 for c in checks if _status(c) in ("skipped", "indeterminate"))
    return TrialResult(index, seed, sizes, len(checks), bad, skipped)


@dataclass
class CampaignReport:
    kind: str
    seed: int
    trials: list

    @property
    def violations(self) -> int:
        return sum(1 for t in self.trials if t.violated)

    def as_dict(self) -> dict:
        return {"kind": self.kind, "seed": self.seed, "trials": len(self.trials),
                "violating_trials": self.violations,
                "checks": sum(t.checks for t in self.trials),
                "skipped_checks": sum(t.skipped for t in self.trials),
                "failures": [t.as_dict() for t in self.trials if t.violated],
                "results": [t.as_dict() for t in self.trials]}


def run_campaign(kind: str, trials: int, seed: int = 1, jobs: int | None = None,
                 max_size: int | None = None, corrupt: str | None = None,
                 oracle: bool = True) -> CampaignReport:
    if kind not in ("cipher", "keyagreement"):
        raise ValueError(f"unknown campaign kind {kind!r}")
    if max_size is None:
        max_size = 5 if kind == "cipher" else 3
    jobs = jobs or os.cpu_count() or 1
    args = [(kind, i, seed, max_size, corrupt, oracle) for i in range(trials)]
    if jobs == 1 or trials < 2:
        results = [run_trial(a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_trial, args, chunksize=max(1, trials // (4 * jobs))))
    return CampaignReport(kind, seed, results)
