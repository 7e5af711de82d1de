"""Acceptance criteria, one test each, run at their stated tolerances.

Every test records a PASS/FAIL line that is printed in the terminal summary.
"""

import math
import time
from fractions import Fraction as F

import conftest
from itsec.bounds import pope_bound
from itsec.checks import HOLDS, SKIPPED, VIOLATED
from itsec.cipher import channel_matrix, channel_rows, per_message_error
from itsec.fuzz import random_cipher, run_campaign
from itsec.inequalities import (binary_table_checks, check_coupling, check_fannes, check_marginal_contraction,
                                check_mutual_information_sandwich, check_pinsker, check_row_distance_sup)
from itsec.keyagree import (ka_impossible, ka_lower_bound, ka_metrics, ka_simulator_interval,
                            expansion_protocol, pre_shared_key)
from itsec.metrics import eps_posterior, posterior_pair_distance, security_report
from itsec.prng import SplitMix64, trial_seed
from itsec.probdist import Dist, Joint, entropies, mutual_information
from itsec.relations import equivalence_diagnostics, grid_oracle
from itsec.structured import counterexample_channel
from itsec.synth import (birkhoff_decompose, counterexample_scheme, dodis_schemes, one_time_pad, random_doubly_stochastic, scheme_from_matrix, shift_cipher)

TAU = 1e-9


def verdict(k: int, clauses: list[tuple[str, bool]]) -> None:
    failed = [name for name, ok in clauses if not ok]
    line = "PASS" if not failed else "FAIL"
    detail = "all clauses hold" if not failed else "failed: " + "; ".join(failed)
    conftest.ACCEPTANCE[k] = (line, detail)
    print(f"criterion {k}: {line}  {detail}")
    assert not failed, detail


def test_perfect_secrecy_baseline():
    start = time.perf_counter()
    r = security_report(one_time_pad(16))
    elapsed = time.perf_counter() - start
    verdict(1, [
        ("delta = 0", r.delta.lo == r.delta.hi == 0),
        ("every eps collapses to [0, 0]", all(m.lo == 0 and m.hi == 0 for m in r.eps.values())),
        ("distance-valued metrics are exact rationals",
         all(isinstance(r.eps[j].hi, F) for j in (2, 3, 5, 6, 7, 8, 9, 10))),
        (f"runtime < 1 s (took {elapsed:.2f} s)", elapsed < 1.0),
    ])


def test_counterexample_reproduction():
    s, A, formula = counterexample_scheme(4, F(1, 2))
    r = security_report(s)
    ch = Dist(range(4), A[0])
    target = 2 - entropies(ch).H
    pm = Dist.uniform(s.messages)
    info = mutual_information(channel_matrix(s).joint(pm))
    verdict(2, [
        ("eps5 = eps6 = eps3 = 1/2", r.eps[5].value == r.eps[6].value == r.eps[3].value == F(1, 2)),
        ("information at uniform input matches the formula within 1e-12", abs(info - formula) <= 1e-12),
        ("and equals 2 - H(5/8, 1/8, 1/8, 1/8)", abs(info - target) <= 1e-12),
        ("eps9 = eps10 = 3/8", r.eps[9].value == r.eps[10].value == F(3, 8)),
        ("dual certificate verified", r.eps[10].witness.get("dual_certificate") == "verified"),
    ])


def test_non_equivalence_trend():
    ns = [4, 16, 256, 65536]
    start = time.perf_counter()
    rep = equivalence_diagnostics(lambda n: counterexample_channel(n, F(1, int(math.log2(n)))), ns, TAU)
    elapsed = time.perf_counter() - start
    eps5 = rep.column("eps5")
    info = rep.column("I_uniform")
    ba = rep.column("eps1_lo")
    print("eps5:", [str(v) for v in eps5], "I(uniform):", [f"{v:.6f}" for v in info])
    verdict(3, [
        ("eps5 decreases toward 0", all(b < a for a, b in zip(eps5, eps5[1:])) and eps5[-1] <= F(1, 16)),
        ("I(uniform) monotonically increasing", all(b > a + TAU for a, b in zip(info, info[1:]))),
        (f"I(uniform) > 0.9 at n = 65536 (measured {info[-1]:.6f})", info[-1] > 0.9),
        ("capacity lower end >= I(uniform) at each n", all(c >= i - TAU for c, i in zip(ba, info))),
        (f"runtime < 30 s (took {elapsed:.1f} s)", elapsed < 30),
    ])


def test_posterior_gap_witness():
    clauses = []
    for n in (4, 8, 16):
        s, _, _ = counterexample_scheme(n, F(1, n))
        pm = [F(1, 3), F(1, 3)] + [F(1, 3) / (n - 2)] * (n - 2)
        d, _ = posterior_pair_distance(channel_rows(s), pm)
        target = 1 / (4 - F(3, n))
        e4 = eps_posterior(s)
        r = security_report(s)
        clauses += [
            (f"n={n}: posterior-pair distance = {target}", d == target),
            (f"n={n}: eps_posterior.lo >= {target} (reported {float(e4.lo):.6f})", e4.lo >= target),
            (f"n={n}: eps5 = 1/{n}", r.eps[5].value == F(1, n)),
        ]
    verdict(4, clauses)


def test_random_scheme_relations():
    start = time.perf_counter()
    rep = run_campaign("cipher", 1000, seed=1)
    elapsed = time.perf_counter() - start
    bad = [t.index for t in rep.trials if t.violated]
    verdict(5, [
        ("1000 trials ran", len(rep.trials) == 1000),
        ("every trial logs its seed", all(isinstance(t.seed, int) for t in rep.trials)),
        (f"zero violated relation or bound checks ({len(bad)} trials)", not bad),
        ("no trial crashed", not any(t.error for t in rep.trials)),
        (f"runtime < 5 min (took {elapsed:.0f} s)", elapsed < 300),
    ])


def test_birkhoff_round_trip():
    rng = SplitMix64(2024)
    ok_terms = ok_rebuild = ok_channel = ok_delta = True
    for _ in range(200):
        n = rng.randint(1, 8)
        A = random_doubly_stochastic(n, rng.randint(1, 2 * n), rng.next())
        dec = birkhoff_decompose(A)
        ok_terms &= len(dec.terms) <= (n - 1) ** 2 + 1
        ok_rebuild &= dec.reconstruct(n) == A
        s = scheme_from_matrix(A)
        ok_channel &= channel_matrix(s).matrix() == A
        ok_delta &= max(per_message_error(s)) == 0
    verdict(6, [
        ("at most (n-1)^2 + 1 terms", ok_terms),
        ("exact reconstruction", ok_rebuild),
        ("scheme channel matrix equals the input", ok_channel),
        ("decryption error 0", ok_delta),
    ])


def test_key_size_tightness():
    s = dodis_schemes("zero-eps", 8, F(1, 4))
    r = security_report(s)
    nk = len(s.keys)
    shift = shift_cipher(4, [0, 1])
    rs = security_report(shift)
    total = rs.delta.value + rs.eps[5].value
    verdict(7, [
        ("zero-eps frontier: eps5 = 0", r.eps[5].value == 0),
        ("zero-eps frontier: delta = 1/4", r.delta.value == F(1, 4)),
        ("zero-eps frontier: |K| = 6 = (1 - delta)|M|", nk == 6 == (1 - r.delta.value) * 8),
        ("key-size bound met with equality", nk == (1 - (r.delta.value + r.eps[5].value)) * 8),
        ("pope_bound(2, 4) = 1/2", pope_bound(2, 4) == F(1, 2)),
        (f"2-key shift cipher on 4 messages: delta + eps5 = 1/2 (measured {total})", total == F(1, 2)),
    ])


def test_key_agreement():
    psk = ka_metrics(pre_shared_key(4))
    zero = all(m.lo == m.hi == 0 for m in (psk.delta1, psk.delta2, psk.eps1, psk.eps2, psk.eps3))
    rep = run_campaign("keyagreement", 500, seed=1)
    bad = [t.index for t in rep.trials if t.violated]
    ex = expansion_protocol(1, 2)
    lb = ka_lower_bound(ex, Dist.uniform(range(4)))
    lo, hi = ka_simulator_interval(ka_metrics(ex))
    verdict(8, [
        ("pre-shared key reports all-zero metrics", zero),
        (f"500 random protocols, zero violations ({len(bad)} trials)", not bad and len(rep.trials) == 500),
        ("1-bit to 2-bit expansion lower bound = 1/2", lb == F(1, 2)),
        ("expansion simulator interval reaches the bound", hi >= lb),
        ("impossible at (0, 0)", ka_impossible(0, 0, 1, 2, (1, 1))),
    ])


def _rand_dist(rng: SplitMix64, n: int) -> list:
    w = [rng.randint(0, 64) for _ in range(n)]
    if not any(w):
        w[0] = 1
    return [F(v, sum(w)) for v in w]


def test_inequality_suite():
    rng = SplitMix64(99)
    checks = []
    for _ in range(3000):
        n = rng.randint(2, 6)
        p, q = Dist(range(n), _rand_dist(rng, n)), Dist(range(n), _rand_dist(rng, n))
        checks.append(check_pinsker(p, q))
        checks.append(check_fannes(p, q))
    for _ in range(1000):
        nx, ny = rng.randint(1, 3), rng.randint(1, 3)
        cells = [(a, b) for a in range(nx) for b in range(ny)]
        j1 = Joint(("X", "Y"), (range(nx), range(ny)), dict(zip(cells, _rand_dist(rng, len(cells)))))
        j2 = Joint(("X", "Y"), (range(nx), range(ny)), dict(zip(cells, _rand_dist(rng, len(cells)))))
        checks += check_mutual_information_sandwich(j1)
        checks += check_marginal_contraction(j1, j2)
        trip = [(a, b, y) for a in range(nx) for b in range(nx) for y in range(ny)]
        c = Joint(("X", "X2", "Y"), (range(nx), range(nx), range(ny)), dict(zip(trip, _rand_dist(rng, len(trip)))))
        checks += check_coupling(c)
    for _ in range(200):
        n, m = rng.randint(1, 3), rng.randint(2, 4)
        checks += check_row_distance_sup([_rand_dist(rng, m) for _ in range(n)],
                                         [_rand_dist(rng, m) for _ in range(n)], gap=1e-3)
    binary = binary_table_checks(F(1, 20))
    cases = len(checks) + 37191
    violated = [c.name for c in checks + binary if c.status == VIOLATED]
    fannes_skips = sum(1 for c in checks if c.name == "Fannes" and c.status == SKIPPED)
    print(f"{cases} cases, {fannes_skips} Fannes draws outside the 1/4 guard")
    verdict(9, [
        (f"no violations ({len(violated)})", not violated),
        ("binary table exhaustive at step 1/20", all(c.status == HOLDS for c in binary)
         and "37191" in binary[0].note),
        (f">= 10^4 cases ({cases})", cases >= 10_000),
    ])


def test_oracle_containment():
    worst = {"eps2": 0.0, "eps4": 0.0}
    outside = {"eps2": 0, "eps4": 0}
    specs = 0
    for seed in (trial_seed(1, i) for i in range(1000)):
        s = random_cipher(seed)
        if len(s.messages) > 3:
            continue
        specs += 1
        r = security_report(s, seed=seed & 0xFFFF)
        for name, j in (("eps2", 2), ("eps4", 4)):
            o = grid_oracle(s, name, 100)
            m = r.eps[j]
            if not float(m.lo) - TAU <= o.value <= float(m.hi) + TAU:
                outside[name] += 1
                worst[name] = max(worst[name], float(m.lo) - o.value, o.value - float(m.hi))
    verdict(10, [
        (f"grid eps2 inside reported interval for all {specs} schemes "
         f"({outside['eps2']} outside, worst by {worst['eps2']:.3g})", outside["eps2"] == 0),
        (f"grid eps4 inside reported interval for all {specs} schemes "
         f"({outside['eps4']} outside, worst by {worst['eps4']:.3g})", outside["eps4"] == 0),
    ])
