"""SplitMix64, the fixed generator behind every fuzz campaign.

State is a 64-bit integer. Each call adds 0x9E3779B97F4A7C15 to the state and
returns mix(state), where mix xors with a right shift by 30, multiplies by
0xBF58476D1CE4E5B9, xors with a shift by 27, multiplies by 0x94D049BB133111EB
and xors with a shift by 31, all modulo 2**64. Bounded integers use rejection
sampling on the top of the 64-bit range, so streams are reproducible in any
language.
"""

from __future__ import annotations

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & MASK
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & MASK
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK

    def next(self) -> int:
        self.state = (self.state + GOLDEN) & MASK
        return mix64(self.state)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        if n <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next()
            if x < limit:
                return x % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi]."""
        return lo + self.below(hi - lo + 1)

    def chance(self, num: int, den: int) -> bool:
        return self.below(den) < num

    def permutation(self, n: int) -> list[int]:
        """Fisher-Yates from the last position down."""
        p = list(range(n))
        for i in range(n - 1, 0, -1):
            j = self.below(i + 1)
            p[i], p[j] = p[j], p[i]
        return p


def trial_seed(campaign_seed: int, index: int) -> int:
    """Seed of trial ``index``: mix64 of campaign seed plus (index + 1) * GOLDEN."""
    return mix64((campaign_seed + (index + 1) * GOLDEN) & MASK)
