import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from itsec.bounds import (INDETERMINATE, ROOT_HALF_LN2, SATISFIED, VIOLATED, check_bound103,
                          decryption_fanout, distinguisher_advantage, fanout_bound,
                          has_deterministic_decryption, impossibility, judge, key_size_bound, pope_bound)
from itsec.cipher import deterministic_spec, make_spec
from itsec.fuzz import random_cipher
from itsec.metrics import security_report
from itsec.probdist import Dist
from itsec.synth import counterexample_scheme, dodis_schemes, one_time_pad, shift_cipher


def test_pope_values():
    assert pope_bound(2, 4) == F(1, 2)
    assert pope_bound(4, 4) == 0
    assert pope_bound(8, 4) == 0


def test_judge_three_ways():
    assert judge("x", F(1, 2), F(1, 2), F(1, 2)).status == SATISFIED
    assert judge("x", 0.1, 0.2, 0.5).status == VIOLATED
    assert judge("x", 0.1, 0.6, 0.5).status == INDETERMINATE


def test_key_size_bound_branches():
    assert key_size_bound(0, 0, 5) == 1
    assert key_size_bound(F(1, 8), F(1, 16), (1, 2)) == F(3, 4)
    assert key_size_bound(0.01, 0.1, (1, 1)) == pytest.approx(1 - (0.01 + math.sqrt(2 * math.log(2)) * math.sqrt(0.1)))
    assert key_size_bound(F(1, 2), F(1, 4), 7) == 0


def test_key_size_bound_rejects_bad_input():
    with pytest.raises(ValueError):
        key_size_bound(2, 0, 3)
    with pytest.raises(ValueError):
        key_size_bound(0, 0, 11)


def test_impossibility():
    assert impossibility(0, 0, 2, 4, 5)
    assert not impossibility(F(1, 4), 0, 6, 8, 5)


def test_otp_bounds_satisfied():
    assert all(b.status == SATISFIED for b in check_bound103(security_report(one_time_pad(4))))


def test_shift_cipher_meets_bound_with_equality():
    s = dodis_schemes("zero-eps", 4, F(1, 2))
    r = security_report(s)
    assert r.delta.value + r.eps[5].value == pope_bound(2, 4)


def test_distinguisher_two_key_shift():
    s = shift_cipher(4, [0, 1])
    q = [F(1, 4)] * 4
    assert distinguisher_advantage(s, Dist.uniform(range(4)), q) == F(1, 2)


def test_distinguisher_identity_cipher():
    s = deterministic_spec([0], range(4), range(4), [1], lambda k, m: m, lambda k, c: c)
    assert distinguisher_advantage(s, Dist.uniform(range(4)), [F(1, 4)] * 4) == F(3, 4)


def test_randomized_decryption_escapes_the_key_count_floor():
    # one key, four messages, decryption of ciphertext 1 spreads over every output
    enc = [[[0, 1], [F(2, 59), F(57, 59)], [F(13, 29), F(16, 29)], [1, 0]]]
    dec = [[[0, 0, 0, 1], [F(23, 109), F(22, 109), F(22, 109), F(42, 109)]]]
    s = make_spec([0], range(4), range(2), [1], enc, dec)
    adv = distinguisher_advantage(s, Dist.uniform(range(4)), [F(1, 2), F(1, 2)])
    assert adv < pope_bound(1, 4)
    assert decryption_fanout(s) == 4
    assert adv >= fanout_bound(s)
    # the supremum over priors still clears the floor
    assert security_report(s).eps[8].lo >= pope_bound(1, 4)


@settings(max_examples=80)
@given(st.integers(0, 2**64 - 1), st.data())
def test_pope_distinguisher_for_deterministic_decryption(seed, data):
    s = random_cipher(seed)
    if not has_deterministic_decryption(s):
        s = make_spec(s.keys, s.messages, s.ciphertexts, s.p_k, s.enc,
                      [[[F(int(o == 0)) for o in range(len(s.outputs))] for _ in b] for b in s.dec])
    n = len(s.ciphertexts)
    w = data.draw(st.lists(st.integers(0, 9), min_size=n, max_size=n).filter(any))
    q = [F(v, sum(w)) for v in w]
    assert distinguisher_advantage(s, Dist.uniform(s.messages), q) >= pope_bound(len(s.keys), len(s.messages))


@settings(max_examples=40)
@given(st.integers(0, 2**64 - 1))
def test_weighted_key_size_bound_never_violated(seed):
    r = security_report(random_cipher(seed))
    assert not [b.name for b in check_bound103(r) if b.status == VIOLATED]


def test_capacity_branch_uses_root_half_ln2():
    s, _, _ = counterexample_scheme(4, F(1, 2))
    r = security_report(s)
    iv = check_bound103(r)[-1]
    assert iv.lhs_lo == pytest.approx(ROOT_HALF_LN2 * math.sqrt(float(r.eps[1].lo)))
