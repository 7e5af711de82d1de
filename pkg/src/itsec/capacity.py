"""Channel capacity by Blahut-Arimoto with a duality-gap stopping rule.

At every iterate p the mutual information I(p) is a lower bound on capacity
and max_m D(W_m || pW) is an upper bound, so the pair is a certified interval.
Kernels hide how p -> pW and q -> (D(W_m || q))_m are evaluated, which lets a
circulant channel of size 65536 run through FFTs instead of a dense matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Protocol, Sequence

import numpy as np


class Kernel(Protocol):
    n_inputs: int

    def output(self, p: np.ndarray) -> np.ndarray: ...

    def divergences(self, q: np.ndarray) -> np.ndarray: ...


class DenseKernel:
    def __init__(self, rows: Sequence[Sequence]):
        self.W = np.asarray([[float(v) for v in r] for r in rows], dtype=float)
        self.n_inputs = self.W.shape[0]
        with np.errstate(divide="ignore"):
            self._wlogw = np.where(self.W > 0, self.W * np.log2(np.where(self.W > 0, self.W, 1.0)), 0.0).sum(axis=1)

    def output(self, p):
        return p @ self.W

    def divergences(self, q):
        logq = np.log2(np.where(q > 0, q, 1.0))
        # terms with W > 0 and q = 0 cannot occur when q = pW with p > 0
        return self._wlogw - (self.W * np.where(self.W > 0, logq, 0.0)).sum(axis=1)


class CirculantKernel:
    """W[m, c] = w[(c - m) mod n], evaluated with FFTs."""

    def __init__(self, first_row: Sequence):
        self.w = np.asarray([float(v) for v in first_row], dtype=float)
        self.n_inputs = len(self.w)
        self._fw = np.fft.rfft(self.w)
        pos = self.w > 0
        self._wlogw = float(np.sum(self.w[pos] * np.log2(self.w[pos])))

    def output(self, p):
        q = np.fft.irfft(np.fft.rfft(p) * self._fw, n=self.n_inputs)
        return np.clip(q, 0.0, None)

    def divergences(self, q):
        logq = np.log2(np.where(q > 0, q, 1.0))
        # sum_j w[j] log q[m + j] is a circular cross-correlation
        corr = np.fft.irfft(np.conj(self._fw) * np.fft.rfft(logq), n=self.n_inputs)
        return self._wlogw - corr


@dataclass(frozen=True)
class CapacityResult:
    lo: float
    hi: float
    p: np.ndarray
    iterations: int
    converged: bool


def blahut_arimoto(kernel: Kernel, tol: float = 1e-9, max_iter: int = 100_000,
                   p0: np.ndarray | None = None) -> CapacityResult:
    n = kernel.n_inputs
    p = np.full(n, 1.0 / n) if p0 is None else np.asarray(p0, dtype=float)
    lo, hi = 0.0, math.inf
    best_lo, best_p = 0.0, p
    for it in range(max_iter + 1):
        q = kernel.output(p)
        d = np.maximum(kernel.divergences(q), 0.0)
        lo = max(float(p @ d), 0.0)
        hi = min(hi, float(d.max()))
        if lo > best_lo:
            best_lo, best_p = lo, p
        if hi - best_lo <= tol:
            return CapacityResult(best_lo, max(hi, best_lo), best_p, it, True)
        p = p * np.exp2(d - d.max())
        p /= p.sum()
    return CapacityResult(best_lo, max(hi, best_lo), best_p, max_iter, False)


def capacity(rows: Sequence[Sequence], tol: float = 1e-9, max_iter: int = 100_000) -> CapacityResult:
    return blahut_arimoto(DenseKernel(rows), tol, max_iter)


def rationalize(p: np.ndarray, max_den: int = 10**6) -> list[Fraction]:
    """Nearby exact distribution: bounded denominators, exact unit sum."""
    fr = [Fraction(float(v)).limit_denominator(max_den) if v > 0 else Fraction(0) for v in p]
    fr = [max(v, Fraction(0)) for v in fr]
    total = sum(fr)
    if total == 0:
        return [Fraction(1, len(fr))] * len(fr)
    return [v / total for v in fr]
