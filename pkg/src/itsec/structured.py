"""Circulant channels stored as a constant plus a few deviations.

Rows are cyclic shifts of one row w = base + sparse deviations, so channels
with 65536 inputs stay cheap: pairwise row distances only depend on the shift
and are nontrivial for shifts inside the difference set of the deviation
support.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from .capacity import CapacityResult, CirculantKernel, blahut_arimoto
from .probdist import xlog2


@dataclass(frozen=True)
class CirculantChannel:
    n: int
    base: Fraction
    deviations: tuple  # sorted (position, delta) pairs

    @classmethod
    def make(cls, n: int, base, deviations: Mapping[int, object]) -> "CirculantChannel":
        base = Fraction(base)
        dev = tuple(sorted((int(i) % n, Fraction(d)) for i, d in deviations.items() if d != 0))
        total = base * n + sum(d for _, d in dev)
        if total != 1:
            raise ValueError(f"row sums to {total}")
        if base < 0 or any(base + d < 0 for _, d in dev):
            raise ValueError("negative entry")
        return cls(n, base, dev)

    def entry(self, j: int) -> Fraction:
        j %= self.n
        for i, d in self.deviations:
            if i == j:
                return self.base + d
        return self.base

    def first_row(self) -> np.ndarray:
        w = np.full(self.n, float(self.base))
        for i, d in self.deviations:
            w[i] = float(self.base + d)
        return w

    def shift_distance(self, shift: int) -> Fraction:
        """Distance between row 0 and the row shifted by ``shift``."""
        shift %= self.n
        diff: dict[int, Fraction] = {}
        for i, d in self.deviations:
            diff[i] = diff.get(i, Fraction(0)) + d
            j = (i + shift) % self.n
            diff[j] = diff.get(j, Fraction(0)) - d
        return sum((v for v in diff.values() if v > 0), Fraction(0))

    def max_pair_distance(self) -> tuple[Fraction, int]:
        if self.n == 1:
            return Fraction(0), 0
        pos = [i for i, _ in self.deviations]
        shifts = {(b - a) % self.n for a in pos for b in pos} - {0}
        # any shift outside the difference set makes the supports disjoint
        generic = next((s for s in range(1, self.n) if s not in shifts), None)
        if generic is not None:
            shifts.add(generic)
        best = max(shifts, key=lambda s: (self.shift_distance(s), -s))
        return self.shift_distance(best), best

    def row_entropy(self) -> float:
        k = len(self.deviations)
        h = -(self.n - k) * xlog2(self.base)
        h -= math.fsum(xlog2(self.base + d) for _, d in self.deviations)
        return h

    def mutual_information_uniform(self) -> float:
        """H(C) - H(C|M) at the uniform prior; the output is uniform for a circulant."""
        return max(math.log2(self.n) - self.row_entropy(), 0.0)

    def capacity(self, tol: float = 1e-9, max_iter: int = 100_000) -> CapacityResult:
        return blahut_arimoto(CirculantKernel(self.first_row()), tol, max_iter)


def counterexample_channel(n: int, eps) -> CirculantChannel:
    """Diagonal-plus-uniform channel: eps + (1-eps)/n on the diagonal, (1-eps)/n elsewhere."""
    eps = Fraction(eps)
    return CirculantChannel.make(n, (1 - eps) / n, {0: eps})
