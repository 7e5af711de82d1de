"""Independent reference computations used to cross-check the package.

Nothing here imports the evaluators under test; everything is brute force or
goes through scipy.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import chain, combinations, product

import numpy as np
from scipy.optimize import linprog


def tv(p, q):
    return sum(abs(a - b) for a, b in zip(p, q)) / 2


def tv_by_events(p, q):
    """max over all events A of P(A) - Q(A)."""
    idx = range(len(p))
    events = chain.from_iterable(combinations(idx, k) for k in range(len(p) + 1))
    return max(sum(p[i] - q[i] for i in a) for a in events)


def entropy(p):
    return -sum(float(x) * math.log2(float(x)) for x in p if x > 0)


def mutual_information(rows, pm):
    """I(M;C) for channel rows[m][c] and prior pm."""
    q = [sum(pm[m] * rows[m][c] for m in range(len(pm))) for c in range(len(rows[0]))]
    total = 0.0
    for m, c in product(range(len(pm)), range(len(q))):
        pmc = float(pm[m] * rows[m][c])
        if pmc > 0:
            total += pmc * math.log2(float(rows[m][c]) / float(q[c]))
    return total


def cipher_rows(s):
    """P_{C|M} by direct summation over keys."""
    nm, nc = len(s.messages), len(s.ciphertexts)
    return [[sum(s.p_k[k] * s.enc[k][m][c] for k in range(len(s.keys))) for c in range(nc)] for m in range(nm)]


def worst_decryption_error(s):
    out = []
    for m, msg in enumerate(s.messages):
        ok = 0
        for k, c in product(range(len(s.keys)), range(len(s.ciphertexts))):
            for o, d in enumerate(s.dec[k][c]):
                if s.outputs[o] == msg:
                    ok += s.p_k[k] * s.enc[k][m][c] * d
        out.append(1 - ok)
    return max(out)


def max_row_distance(rows):
    return max((tv(a, b) for a, b in combinations(rows, 2)), default=0)


def chebyshev_radius_scipy(rows):
    """min_Q max_m TV(row_m, Q) as a float LP solved by HiGHS."""
    nm, nc = len(rows), len(rows[0])
    # variables: q (nc), s (nm*nc) with s >= |row - q|, t
    nv = nc + nm * nc + 1
    c = np.zeros(nv)
    c[-1] = 1
    A, b = [], []
    for m in range(nm):
        for j in range(nc):
            sidx = nc + m * nc + j
            r1 = np.zeros(nv); r1[j] = -1; r1[sidx] = -1
            A.append(r1); b.append(-float(rows[m][j]))
            r2 = np.zeros(nv); r2[j] = 1; r2[sidx] = -1
            A.append(r2); b.append(float(rows[m][j]))
        r = np.zeros(nv)
        r[nc + m * nc: nc + (m + 1) * nc] = 0.5
        r[-1] = -1
        A.append(r); b.append(0.0)
    eq = np.zeros((1, nv)); eq[0, :nc] = 1
    res = linprog(c, A_ub=np.array(A), b_ub=np.array(b), A_eq=eq, b_eq=[1.0],
                  bounds=[(0, None)] * nv, method="highs")
    return res.fun


def posterior_column_sup(col):
    """sup over priors of TV(P_M|c, P_M) for one column, by brute force on two-point priors.

    The optimum sits on a prior supported on the argmax and argmin of the
    column, so a fine scan over that segment is an independent estimate.
    """
    hi, lo = float(max(col)), float(min(col))
    if hi == lo:
        return 0.0
    edge = np.geomspace(1e-13, 1e-2, 2000)
    t = np.concatenate([edge, np.linspace(0, 1, 200_001)[1:-1], 1 - edge])
    z = t * hi + (1 - t) * lo
    return float(np.max(t * (hi / z - 1)))


def simplex_points(n, r):
    """Every prior with coordinates in multiples of 1/r."""
    def rec(k, left):
        if k == 1:
            yield (left,)
            return
        for i in range(left + 1):
            for rest in rec(k - 1, left - i):
                yield (i,) + rest
    for comp in rec(n, r):
        yield [Fraction(i, r) for i in comp]


def joint_independence_tv(rows, pm):
    q = [sum(pm[m] * rows[m][c] for m in range(len(pm))) for c in range(len(rows[0]))]
    return sum(abs(pm[m] * rows[m][c] - pm[m] * q[c]) for m in range(len(pm)) for c in range(len(q))) / 2


def splitmix64(seed, count):
    """Reference SplitMix64 stream written from the published constants."""
    mask = (1 << 64) - 1
    out, x = [], seed & mask
    for _ in range(count):
        x = (x + 0x9E3779B97F4A7C15) & mask
        z = x
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
        out.append(z ^ (z >> 31))
    return out
