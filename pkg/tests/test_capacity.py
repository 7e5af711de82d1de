import math
from fractions import Fraction as F

import numpy as np
import pytest

import oracles
from itsec.capacity import CirculantKernel, DenseKernel, blahut_arimoto, capacity, rationalize
from itsec.probdist import binary_entropy


@pytest.mark.parametrize("p", [0.0, 0.1, 0.25, 0.5])
def test_binary_symmetric_channel(p):
    res = capacity([[1 - p, p], [p, 1 - p]])
    assert res.lo <= res.hi
    assert res.lo == pytest.approx(1 - binary_entropy(p), abs=1e-9)


def test_z_channel_capacity():
    # Z channel with crossover 1/2 has capacity log2(5/4)
    res = capacity([[1, 0], [0.5, 0.5]])
    assert res.lo == pytest.approx(math.log2(5 / 4), abs=1e-9)


def test_lower_end_is_an_achieved_rate():
    rows = [[0.7, 0.2, 0.1], [0.1, 0.8, 0.1], [0.3, 0.3, 0.4]]
    res = capacity(rows)
    assert res.lo == pytest.approx(oracles.mutual_information(rows, list(res.p)), abs=1e-12)
    for _ in range(20):
        p = np.random.default_rng(_).dirichlet(np.ones(3))
        assert oracles.mutual_information(rows, list(p)) <= res.hi + 1e-12


def test_circulant_matches_dense():
    first = np.array([0.5, 0.2, 0.2, 0.1])
    rows = [np.roll(first, i) for i in range(4)]
    a = blahut_arimoto(DenseKernel(rows))
    b = blahut_arimoto(CirculantKernel(first))
    assert a.lo == pytest.approx(b.lo, abs=1e-12)


def test_rationalize_is_a_distribution():
    fr = rationalize(np.array([0.3333333, 0.3333333, 0.3333334]))
    assert sum(fr) == 1 and all(isinstance(v, F) for v in fr)
