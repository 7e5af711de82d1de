from itsec.fuzz import random_cipher, random_ka, run_campaign, run_trial
from itsec.specio import to_text


def test_generators_are_deterministic():
    assert to_text(random_cipher(17)) == to_text(random_cipher(17))
    assert to_text(random_ka(17)) == to_text(random_ka(17))


def test_generator_size_limits():
    for seed in range(200):
        s = random_cipher(seed, 5)
        assert all(1 <= v <= 5 for v in s.sizes.values())
        assert all(p.denominator <= 64 * 5 for p in s.p_k)
        k = random_ka(seed)
        assert max(len(k.xs), len(k.ys), len(k.ts), len(k.ks)) <= 3
        assert k.n_rounds in (1, 3)


def test_trial_replays_from_seed():
    a = run_trial(("cipher", 3, 9, 5, None, True))
    b = run_trial(("cipher", 3, 9, 5, None, True))
    assert a == b and a.seed == b.seed


def test_pool_merge_matches_serial():
    serial = run_campaign("cipher", 12, seed=4, jobs=1).as_dict()
    pooled = run_campaign("cipher", 12, seed=4, jobs=3).as_dict()
    assert serial == pooled


def test_corruption_caught_in_every_trial():
    rep = run_campaign("cipher", 4, seed=2, jobs=1, corrupt="eps10")
    assert rep.violations == 4
