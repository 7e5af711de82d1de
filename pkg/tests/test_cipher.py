from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from itsec.cipher import (SpecError, channel_matrix, channel_rows, decryption_output, deterministic_spec,
                          execute, is_doubly_stochastic, make_spec, per_message_error, validate_spec)
from itsec.fuzz import random_cipher
from itsec.probdist import Dist
from itsec.synth import one_time_pad

H = F(1, 2)


def constant_decryption(n=4):
    return deterministic_spec(range(n), range(n), range(n), [F(1, n)] * n,
                              lambda k, m: (m + k) % n, lambda k, c: 0)


def test_problems_name_their_location():
    with pytest.raises(SpecError) as err:
        make_spec([0], [0, 1], [0], [1], [[[1], [H]]], [[[1, 0]]])
    where = [p.where for p in err.value.problems]
    assert "enc[0][1]" in where


def test_validate_collects_every_problem():
    probs = validate_spec([0, 1], [0], [0], [H, H], [[[H]], [[H]]], [[[1]], [[1]]])
    assert len([p for p in probs if p.level == "error"]) == 2


def test_otp_channel_is_uniform_and_doubly_stochastic():
    s = one_time_pad(5)
    ch = channel_matrix(s)
    assert all(v == F(1, 5) for row in ch.rows() for v in row)
    assert is_doubly_stochastic(ch)
    assert max(per_message_error(s)) == 0


def test_constant_decryption_errors():
    s = constant_decryption()
    assert per_message_error(s) == [0, 1, 1, 1]


def test_randomized_decryption_error():
    # correct with probability 3/4 under every key
    dec = [[[F(3, 4), F(1, 4)], [F(1, 4), F(3, 4)]]]
    s = make_spec([0], [0, 1], [0, 1], [1], [[[1, 0], [0, 1]]], dec)
    assert per_message_error(s) == [F(1, 4), F(1, 4)]
    assert decryption_output(s, 0) == [F(3, 4), F(1, 4)]


def test_execute_is_a_joint_with_the_right_marginals():
    s = one_time_pad(3)
    j = execute(s, Dist(range(3), [H, F(1, 4), F(1, 4)]))
    assert sum(p for _, p in j.items()) == 1
    assert j.marginal_dist("M").probs == (H, F(1, 4), F(1, 4))


@given(st.integers(0, 2**64 - 1))
def test_channel_rows_match_direct_sum(seed):
    s = random_cipher(seed)
    assert channel_rows(s) == oracles.cipher_rows(s)
    assert max(per_message_error(s)) == oracles.worst_decryption_error(s)


@given(st.integers(2, 6), st.integers(0, 2**32))
def test_error_free_bijective_scheme_is_doubly_stochastic(n, seed):
    import random
    rnd = random.Random(seed)
    perms = [rnd.sample(range(n), n) for _ in range(3)]
    w = [F(rnd.randint(1, 9)) for _ in perms]
    w = [v / sum(w) for v in w]
    s = deterministic_spec(range(3), range(n), range(n), w, lambda k, m: perms[k][m],
                           lambda k, c: perms[k].index(c))
    assert max(per_message_error(s)) == 0
    assert is_doubly_stochastic(channel_matrix(s))
