from fractions import Fraction as F

import pytest

import oracles
from itsec.structured import CirculantChannel, counterexample_channel
from itsec.synth import counterexample_matrix


@pytest.mark.parametrize("n,eps", [(4, F(1, 2)), (8, F(1, 3)), (16, F(1, 4))])
def test_agrees_with_dense_matrix(n, eps):
    ch = counterexample_channel(n, eps)
    A = counterexample_matrix(n, eps)
    assert [[ch.entry(j - i) for j in range(n)] for i in range(n)] == A
    d, _ = ch.max_pair_distance()
    assert d == oracles.max_row_distance(A)
    assert ch.mutual_information_uniform() == pytest.approx(oracles.mutual_information(A, [F(1, n)] * n),
                                                           abs=1e-12)


def test_pair_distance_is_eps_at_scale():
    ch = counterexample_channel(65536, F(1, 16))
    d, _ = ch.max_pair_distance()
    assert d == F(1, 16)


def test_capacity_brackets_uniform_information():
    ch = counterexample_channel(256, F(1, 8))
    cap = ch.capacity()
    assert cap.lo >= ch.mutual_information_uniform() - 1e-9
    assert cap.lo <= cap.hi


def test_make_validates_rows():
    with pytest.raises(ValueError):
        CirculantChannel.make(4, F(1, 2), {0: F(1, 2)})
