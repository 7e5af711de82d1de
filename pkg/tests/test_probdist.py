import math
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from itsec.probdist import (FLOAT, RATIONAL, Channel, Dist, Joint, ModeError, ProbError, binary_entropy,
                            entropies, independent_of_marginals, joint_tv, kl_divergence,
                            mutual_information, product_joint, to_num, tv_distance, tv_rows, xlog2)


def rational_dist(n_max=6):
    return st.lists(st.integers(0, 64), min_size=1, max_size=n_max).filter(any).map(
        lambda w: [F(v, sum(w)) for v in w])


@st.composite
def dist_pair(draw, n_max=6):
    n = draw(st.integers(1, n_max))
    w1 = draw(st.lists(st.integers(0, 64), min_size=n, max_size=n).filter(any))
    w2 = draw(st.lists(st.integers(0, 64), min_size=n, max_size=n).filter(any))
    return [F(v, sum(w1)) for v in w1], [F(v, sum(w2)) for v in w2]


def test_to_num_reads_fraction_strings():
    assert to_num("3/8", RATIONAL) == F(3, 8)
    assert to_num("0.25", RATIONAL) == F(1, 4)
    assert to_num("1/3", FLOAT) == pytest.approx(1 / 3)


def test_rational_dist_must_sum_to_one_exactly():
    with pytest.raises(ProbError):
        Dist("ab", [F(1, 3), F(1, 3)])
    Dist("ab", [F(1, 3), F(2, 3)])


def test_float_dist_uses_tolerance():
    Dist("ab", [0.5, 0.5 + 1e-12], FLOAT)
    with pytest.raises(ProbError):
        Dist("ab", [0.5, 0.6], FLOAT)


def test_negative_probability_rejected():
    with pytest.raises(ProbError):
        Dist("ab", [F(3, 2), F(-1, 2)])


def test_mixed_modes_raise():
    p = Dist("ab", [F(1, 2), F(1, 2)])
    q = Dist("ab", [0.5, 0.5], FLOAT)
    with pytest.raises(ModeError):
        tv_distance(p, q)


def test_tv_known_value():
    p = Dist("abc", [F(1, 2), F(1, 4), F(1, 4)])
    q = Dist("abc", [F(1, 4), F(1, 4), F(1, 2)])
    assert tv_distance(p, q) == F(1, 4)


def test_xlog2_convention():
    assert xlog2(0) == 0.0
    assert xlog2(F(1, 2)) == pytest.approx(-0.5)


def test_entropies_of_uniform():
    e = entropies(Dist.uniform(range(8)))
    assert e.H == pytest.approx(3.0)
    assert e.H_min == pytest.approx(3.0)
    assert e.H_0 == pytest.approx(3.0)
    assert binary_entropy(F(1, 2)) == pytest.approx(1.0)
    assert binary_entropy(0) == 0.0


def test_kl_infinite_off_support():
    p = Dist("ab", [F(1, 2), F(1, 2)])
    q = Dist("ab", [F(1), F(0)])
    assert kl_divergence(p, q) == math.inf
    assert kl_divergence(q, p) == pytest.approx(1.0)


def test_mutual_information_of_identity_and_product():
    px = Dist.uniform("abcd")
    ident = Joint(("X", "Y"), ("abcd", "abcd"), {(a, a): F(1, 4) for a in "abcd"})
    assert mutual_information(ident) == pytest.approx(2.0)
    prod = product_joint(("X", "Y"), (px, px))
    assert mutual_information(prod) == 0.0
    assert joint_tv(independent_of_marginals(ident), prod) == 0


def test_channel_output_and_joint():
    ch = Channel.from_rows("01", "01", [[F(3, 4), F(1, 4)], [F(1, 4), F(3, 4)]])
    out = ch.output_dist(Dist("01", [F(1, 2), F(1, 2)]))
    assert out.probs == (F(1, 2), F(1, 2))


@given(dist_pair())
def test_tv_equals_best_event(pq):
    p, q = pq
    assert tv_rows(p, q) == oracles.tv_by_events(p, q)


@given(dist_pair())
def test_tv_symmetric_and_bounded(pq):
    p, q = pq
    d = tv_rows(p, q)
    assert d == tv_rows(q, p)
    assert 0 <= d <= 1


@given(dist_pair(), rational_dist())
def test_tv_triangle(pq, r):
    p, q = pq
    r = (r + [F(0)] * len(p))[:len(p)]
    if sum(r) != 1:
        r = [F(1, len(p))] * len(p)
    assert tv_rows(p, r) <= tv_rows(p, q) + tv_rows(q, r)


@given(rational_dist())
def test_entropy_matches_reference(p):
    d = Dist(range(len(p)), p)
    e = entropies(d)
    assert e.H == pytest.approx(oracles.entropy(p), abs=1e-12)
    assert e.H_min <= e.H + 1e-12 <= e.H_0 + 2e-12
