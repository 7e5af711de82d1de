"""Linear programs in the form min c.x, A_ub x <= b_ub, A_eq x = b_eq, x >= 0.

The exact path is a dense two-phase tableau simplex over ``Fraction`` using
Bland's rule, so it terminates and its optimum is exact. Both paths return a
dual vector which ``verify_certificate`` checks independently: primal
feasibility, dual feasibility and equal objective values together prove
optimality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

Matrix = Sequence[Sequence]


class LPError(RuntimeError):
    pass


@dataclass(frozen=True)
class LPResult:
    x: tuple
    value: object
    y_ub: tuple  # duals of the inequality rows, all <= 0
    y_eq: tuple
    exact: bool
    iterations: int


def solve_lp(c, A_ub: Matrix = (), b_ub=(), A_eq: Matrix = (), b_eq=(), *,
             exact: bool = True, max_iter: int = 100_000) -> LPResult:
    if exact:
        return _solve_exact(c, A_ub, b_ub, A_eq, b_eq, max_iter)
    return _solve_highs(c, A_ub, b_ub, A_eq, b_eq)


def _solve_exact(c, A_ub, b_ub, A_eq, b_eq, max_iter) -> LPResult:
    Q = _rational_type()
    n = len(c)
    m_ub, m_eq = len(A_ub), len(A_eq)
    m = m_ub + m_eq
    zero = Q(0)
    # columns: structural | slacks of <= rows | one identity column per row
    width = n + m_ub
    total = width + m
    tab: list[list] = []
    sign: list[int] = []
    for i in range(m):
        src, b = (A_ub[i], b_ub[i]) if i < m_ub else (A_eq[i - m_ub], b_eq[i - m_ub])
        row = [Q(v) for v in src] + [zero] * (m_ub + m) + [Q(b)]
        if i < m_ub:
            row[n + i] = Q(1)
        s = -1 if row[-1] < 0 else 1
        if s < 0:
            row = [-v for v in row]
        row[width + i] = Q(1)
        sign.append(s)
        tab.append(row)
    # a <= row with nonnegative rhs can start from its own slack
    basis = []
    for i in range(m):
        basis.append(n + i if i < m_ub and sign[i] > 0 else width + i)
    art = [width + i for i in range(m) if basis[i] == width + i]
    barred = set(range(width, total)) - set(art)  # identity columns duplicating slacks

    iters = 0
    if art:
        cost1 = [zero] * total
        for j in art:
            cost1[j] = Q(1)
        iters += _run_simplex(tab, basis, cost1, barred, max_iter)
        if any(tab[i][-1] > 0 for i in range(m) if basis[i] in art):
            raise LPError("linear program is infeasible")
        for i in range(m):
            if basis[i] >= width:
                col = next((j for j in range(width) if tab[i][j] != 0), None)
                if col is not None:
                    _pivot(tab, basis, i, col)
    cost2 = [Q(v) for v in c] + [zero] * (total - n)
    iters += _run_simplex(tab, basis, cost2, set(range(width, total)), max_iter - iters)

    x = [zero] * total
    for i, b in enumerate(basis):
        x[b] = tab[i][-1]
    value = sum((cost2[j] * x[j] for j in range(n)), zero)
    # y = c_B B^-1, and B^-1 sits in the identity columns of the final tableau
    y = []
    for r in range(m):
        col = width + r
        y.append(sum((cost2[basis[k]] * tab[k][col] for k in range(m) if cost2[basis[k]]), zero) * sign[r])
    F = Fraction
    x_out = tuple(F(int(v.numerator), int(v.denominator)) for v in x[:n])
    y_out = [F(int(v.numerator), int(v.denominator)) for v in y]
    return LPResult(x_out, F(int(value.numerator), int(value.denominator)),
                    tuple(y_out[:m_ub]), tuple(y_out[m_ub:]), True, iters)


def _rational_type():
    try:
        import gmpy2

        return gmpy2.mpq
    except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
        return Fraction


def _run_simplex(tab, basis, cost, barred, max_iter) -> int:
    m = len(tab)
    ncols = len(tab[0]) - 1
    red = list(cost)
    for i in range(m):
        cb = cost[basis[i]]
        if cb:
            row = tab[i]
            for j in range(ncols):
                if row[j]:
                    red[j] -= cb * row[j]
    it = 0
    while True:
        enter = next((j for j in range(ncols) if red[j] < 0 and j not in barred), None)
        if enter is None:
            return it
        best = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            raise LPError("linear program is unbounded")
        r = best[1]
        _pivot(tab, basis, r, enter)
        f = red[enter]
        prow = tab[r]
        for j, v in enumerate(prow[:-1]):
            if v:
                red[j] -= f * v
        it += 1
        if it > max_iter:
            raise LPError(f"simplex exceeded {max_iter} pivots")


def _pivot(tab, basis, r, col) -> None:
    prow = tab[r]
    piv = prow[col]
    if piv != 1:
        prow = [v / piv for v in prow]
        tab[r] = prow
    nz = [j for j, v in enumerate(prow) if v]
    for i in range(len(tab)):
        if i == r:
            continue
        row = tab[i]
        f = row[col]
        if f:
            for j in nz:
                row[j] -= f * prow[j]
    basis[r] = col


def _solve_highs(c, A_ub, b_ub, A_eq, b_eq) -> LPResult:
    from scipy.optimize import linprog

    kw = {}
    if len(A_ub):
        kw["A_ub"] = np.asarray(A_ub, dtype=float)
        kw["b_ub"] = np.asarray(b_ub, dtype=float)
    if len(A_eq):
        kw["A_eq"] = np.asarray(A_eq, dtype=float)
        kw["b_eq"] = np.asarray(b_eq, dtype=float)
    res = linprog(np.asarray(c, dtype=float), bounds=(0, None), method="highs", **kw)
    if res.status != 0:
        raise LPError(f"HiGHS failed: {res.message}")
    y_ub = tuple(float(v) for v in res.ineqlin.marginals) if len(A_ub) else ()
    y_eq = tuple(float(v) for v in res.eqlin.marginals) if len(A_eq) else ()
    return LPResult(tuple(float(v) for v in res.x), float(res.fun), y_ub, y_eq, False, int(res.nit))


@dataclass(frozen=True)
class Certificate:
    primal_feasible: bool
    dual_feasible: bool
    gap: object

    @property
    def ok(self) -> bool:
        return self.primal_feasible and self.dual_feasible and self.gap == 0


def verify_certificate(res: LPResult, c, A_ub=(), b_ub=(), A_eq=(), b_eq=(),
                       tol: float = 1e-9) -> Certificate:
    """Check a primal/dual pair without trusting the solver.

    Dual of the program: max b_ub.u + b_eq.v subject to A_ub^T u + A_eq^T v <= c
    and u <= 0. In exact mode the gap must be exactly zero; in float mode it is
    reported as 0 when within ``tol``.
    """
    exact = res.exact
    F = Fraction if exact else float
    zero = F(0)
    x = res.x

    def le(a, b):
        return a <= b if exact else a <= b + tol

    def dot(row, vec):
        return sum((F(a) * v for a, v in zip(row, vec) if a and v), zero)

    pf = all(le(zero, v) for v in x)
    for row, b in zip(A_ub, b_ub):
        pf = pf and le(dot(row, x), F(b))
    for row, b in zip(A_eq, b_eq):
        lhs = dot(row, x)
        pf = pf and ((lhs == F(b)) if exact else abs(lhs - F(b)) <= tol)

    df = all(le(u, zero) for u in res.y_ub)
    acc = [zero] * len(c)
    for rows, duals in ((A_ub, res.y_ub), (A_eq, res.y_eq)):
        for row, u in zip(rows, duals):
            if u:
                for j, a in enumerate(row):
                    if a:
                        acc[j] += F(a) * u
    df = df and all(le(acc[j], F(c[j])) for j in range(len(c)))

    primal = sum((F(a) * v for a, v in zip(c, x)), zero)
    dual = sum((F(b) * u for b, u in zip(b_ub, res.y_ub)), zero)
    dual += sum((F(b) * v for b, v in zip(b_eq, res.y_eq)), zero)
    # the reported optimum must be the value of the reported point
    gap = max(abs(primal - dual), abs(F(res.value) - primal))
    if not exact:
        gap = 0 if gap <= tol else gap
    return Certificate(bool(pf), bool(df), gap)
