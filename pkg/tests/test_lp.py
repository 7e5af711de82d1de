from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import linprog

from itsec.lp import LPError, solve_lp, verify_certificate


def test_small_program_exact():
    # min -x - y  s.t. x + 2y <= 4, 3x + y <= 6
    c, A, b = [-1, -1], [[1, 2], [3, 1]], [4, 6]
    res = solve_lp(c, A, b)
    assert res.value == F(-14, 5)
    assert res.x == (F(8, 5), F(6, 5))
    assert verify_certificate(res, c, A, b).ok


def test_equality_constraints():
    res = solve_lp([1, 2, 3], A_eq=[[1, 1, 1]], b_eq=[1])
    assert res.value == 1 and res.x[0] == 1


def test_infeasible_program_raises():
    with pytest.raises(LPError):
        solve_lp([1], A_eq=[[1]], b_eq=[-1])


def test_float_route_agrees():
    c, A, b = [-1, -1], [[1, 2], [3, 1]], [4, 6]
    assert float(solve_lp(c, A, b, exact=False).value) == pytest.approx(-2.8)


def test_certificate_catches_tampering():
    c, A, b = [-1, -1], [[1, 2], [3, 1]], [4, 6]
    res = solve_lp(c, A, b)
    bad = type(res)(res.x, res.value - 1, res.y_ub, res.y_eq, True, res.iterations)
    assert not verify_certificate(bad, c, A, b).ok


@given(st.integers(2, 4), st.integers(2, 4), st.data())
def test_random_minimax_matches_highs(m, n, data):
    # min t s.t. sum_j a_ij x_j <= t for every i, x in the simplex; written with t = t+ >= 0
    a = [[data.draw(st.integers(0, 9)) for _ in range(n)] for _ in range(m)]
    c = [0] * n + [1]
    A = [row + [-1] for row in a]
    res = solve_lp(c, A, [0] * m, A_eq=[[1] * n + [0]], b_eq=[1])
    assert verify_certificate(res, c, A, [0] * m, [[1] * n + [0]], [1]).ok
    ref = linprog(c, A_ub=np.array(A, float), b_ub=np.zeros(m), A_eq=np.array([[1] * n + [0]], float),
                  b_eq=[1.0], bounds=[(0, None)] * (n + 1), method="highs")
    assert float(res.value) == pytest.approx(ref.fun, abs=1e-9)
