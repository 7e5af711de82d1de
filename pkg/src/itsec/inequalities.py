"""Distance and entropy inequalities checked on concrete distributions."""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .checks import RelationCheck, equal, leq, skipped
from .probdist import (DEFAULT_TOL, RATIONAL, Dist, Joint, ProbError, independent_of_marginals,
                       joint_tv, kl_divergence, mutual_information, shannon_entropy, tv_distance,
                       tv_rows)

PINSKER = 2 / math.log(2)


def fannes_bound(d, size: int) -> float:
    """-2 d log2(2 d / size), zero at d = 0."""
    d = float(d)
    if d <= 0:
        return 0.0
    return -2 * d * math.log2(2 * d / size)


# ---------------------------------------------------------------- distances

def check_marginal_contraction(j1: Joint, j2: Joint, tol: float = DEFAULT_TOL) -> list[RelationCheck]:
    """Marginal distances never exceed the joint distance."""
    if not j1.same_shape(j2):
        raise ProbError("joints have different axes or alphabets")
    whole = joint_tv(j1, j2)
    return [leq(f"marginal {a} contracts", tv_distance(j1.marginal_dist(a), j2.marginal_dist(a)), whole, tol)
            for a in j1.axes]


def duplicate_first_axis(coupling: Joint) -> Joint:
    """From P over (X, X', Y) build the law of (X, X, Y)."""
    if len(coupling.axes) != 3:
        raise ProbError("coupling must have axes (X, X', Y)")
    xs, xs2, ys = coupling.alphabets
    if tuple(xs) != tuple(xs2):
        raise ProbError("the two copies must share an alphabet")
    table = {}
    for (x, _, y), p in coupling.items():
        table[(x, x, y)] = table.get((x, x, y), 0) + p
    return Joint(coupling.axes, coupling.alphabets, table, coupling.mode, coupling.tol)


def disagreement(coupling: Joint):
    zero = Fraction(0) if coupling.mode == RATIONAL else 0.0
    return sum((p for (x, x2, _), p in coupling.items() if x != x2), zero)


def check_coupling(coupling: Joint, tol: float = DEFAULT_TOL) -> list[RelationCheck]:
    """Distance to the duplicated law equals the disagreement probability, which bounds the marginal distance."""
    miss = disagreement(coupling)
    dup = duplicate_first_axis(coupling)
    a, a2, _ = coupling.axes
    return [
        equal("duplicate-copy distance = Pr{X != X'}", joint_tv(dup, coupling), miss, tol),
        leq("marginal distance <= Pr{X != X'}",
            tv_distance(coupling.marginal_dist(a), coupling.marginal_dist(a2)), miss, tol),
    ]


def _interior_grid(n: int, r: int) -> np.ndarray:
    """All priors with denominators r and every coordinate at least 1/r (n <= 3)."""
    if n == 1:
        return np.ones((1, 1))
    if n == 2:
        k = np.arange(1, r)
        return np.stack([k, r - k], axis=1) / r
    if n == 3:
        i, j = np.meshgrid(np.arange(1, r), np.arange(1, r), indexing="ij")
        keep = i + j < r
        i, j = i[keep], j[keep]
        return np.stack([i, j, r - i - j], axis=1) / r
    raise ProbError("interior grid search supports at most 3 inputs")


def check_row_distance_sup(rows_y: Sequence[Sequence], rows_z: Sequence[Sequence],
                           gap: float = 1e-3, tol: float = DEFAULT_TOL) -> list[RelationCheck]:
    """sup over full-support priors of Delta(P_XY, P_XZ) equals the worst row distance.

    The supremum is searched over an interior grid fine enough that the best
    grid point loses at most ``gap`` to the worst row, and both directions are
    checked against that certified gap.
    """
    n = len(rows_y)
    if n != len(rows_z):
        raise ProbError("row families differ in size")
    d = [tv_rows(a, b) for a, b in zip(rows_y, rows_z)]
    beta = max(d)
    if n == 1:
        alpha = d[0]
        lost = 0.0
    else:
        # the best interior point puts 1 - (n-1)/r on the worst row
        r = max(2 * (n - 1), math.ceil((n - 1) / gap))
        grid = _interior_grid(n, r)
        alpha = float((grid @ np.asarray([float(v) for v in d])).max())
        lost = float(beta) * (n - 1) / r
    return [
        leq("grid sup <= worst row distance", alpha, beta, tol),
        leq("worst row distance <= grid sup + certified gap", beta, alpha + lost, tol,
            note=f"gap {lost:.3g}"),
    ]


def binary_table_checks(step: Fraction = Fraction(1, 20)) -> list[RelationCheck]:
    """For every 2x2 joint on the grid and every eps on the grid, the summed and per-symbol forms agree.

    With table (a, b; c, d) the summed deviation is 2|ad - bc| and each
    per-symbol deviation is |ad - bc|, so both statements flip at the same eps.
    """
    r = int(1 / step)
    if Fraction(1, r) != step:
        raise ProbError("step must be 1/r")
    eps_grid = [Fraction(k, r) for k in range(r + 1)]
    sum_fail = resp_fail = mismatched = cases = 0
    worst = Fraction(0)
    for ia, ib, ic in product(range(r + 1), repeat=3):
        id_ = r - ia - ib - ic
        if id_ < 0:
            continue
        a, b, c, d = (Fraction(v, r) for v in (ia, ib, ic, id_))
        px0, py0 = a + b, a + c
        summed = abs(a + d - px0 * py0 - (1 - px0) * (1 - py0))
        per = max(abs(a - px0 * py0), abs(d - (1 - px0) * (1 - py0)))
        worst = max(worst, abs(per - summed / 2))
        for e in eps_grid:
            cases += 1
            s_ok, r_ok = summed <= e, per <= e / 2
            sum_fail += not s_ok
            resp_fail += not r_ok
            mismatched += s_ok != r_ok
    return [equal("binary: summed and per-symbol forms agree", mismatched, 0,
                  note=f"{cases} (table, eps) cases, {sum_fail} outside the eps ball"),
            equal("binary: per-symbol deviation is half the summed one", worst, Fraction(0))]


def verify_distance_identities(pairs: Iterable[tuple[Joint, Joint]] = (),
                               couplings: Iterable[Joint] = (),
                               row_pairs: Iterable[tuple[Sequence, Sequence]] = (),
                               binary_step: Fraction | None = None,
                               gap: float = 1e-3, tol: float = DEFAULT_TOL) -> list[RelationCheck]:
    out: list[RelationCheck] = []
    for j1, j2 in pairs:
        out.extend(check_marginal_contraction(j1, j2, tol))
    for cp in couplings:
        out.extend(check_coupling(cp, tol))
    for ry, rz in row_pairs:
        out.extend(check_row_distance_sup(ry, rz, gap, tol))
    if binary_step is not None:
        out.extend(binary_table_checks(binary_step))
    return out


# ---------------------------------------------------------------- entropies

def check_pinsker(p: Dist, q: Dist, tol: float = DEFAULT_TOL) -> RelationCheck:
    d = tv_distance(p, q)
    return leq("Pinsker", PINSKER * float(d) ** 2, kl_divergence(p, q), tol)


def check_fannes(p: Dist, q: Dist, tol: float = DEFAULT_TOL) -> RelationCheck:
    d = tv_distance(p, q)
    if d > Fraction(1, 4):
        return skipped("Fannes", f"precondition unmet: distance {float(d):.4g} > 1/4")
    gap = abs(shannon_entropy(p.probs) - shannon_entropy(q.probs))
    return leq("Fannes", gap, fannes_bound(d, len(p.alphabet)), tol)


def check_mutual_information_sandwich(j: Joint, tol: float = DEFAULT_TOL) -> list[RelationCheck]:
    """(2/ln 2) D^2 <= I <= -2 D log(2 D / |X||Y|), D the distance to the product of marginals."""
    d = joint_tv(j, independent_of_marginals(j))
    info = mutual_information(j)
    out = [leq("information >= squared distance", PINSKER * float(d) ** 2, info, tol)]
    if d > Fraction(1, 4):
        out.append(skipped("information <= Fannes bound", f"precondition unmet: distance {float(d):.4g} > 1/4"))
    else:
        size = len(j.alphabets[0]) * len(j.alphabets[1])
        out.append(leq("information <= Fannes bound", info, fannes_bound(d, size), tol))
    return out


def verify_entropy_distance_bounds(pairs: Iterable[tuple[Dist, Dist]] = (),
                                   joints: Iterable[Joint] = (),
                                   tol: float = DEFAULT_TOL) -> list[RelationCheck]:
    out: list[RelationCheck] = []
    for p, q in pairs:
        out.append(check_pinsker(p, q, tol))
        out.append(check_fannes(p, q, tol))
    for j in joints:
        out.extend(check_mutual_information_sandwich(j, tol))
    return out
