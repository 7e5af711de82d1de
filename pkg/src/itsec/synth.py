"""Scheme constructors: pads, Birkhoff synthesis and small extremal families."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cipher import CipherSpec, deterministic_spec, is_doubly_stochastic_matrix, make_spec
from .prng import SplitMix64
from .probdist import DEFAULT_TOL


class SynthError(ValueError):
    pass


@dataclass(frozen=True)
class BirkhoffDecomposition:
    """Terms (weight, perm) with perm[i] the column matched to row i."""

    terms: tuple

    def reconstruct(self, n: int) -> list[list]:
        zero = self.terms[0][0] * 0
        A = [[zero] * n for _ in range(n)]
        for w, perm in self.terms:
            for i, j in enumerate(perm):
                A[i][j] += w
        return A


def one_time_pad(n: int) -> CipherSpec:
    if n < 1:
        raise SynthError("pad size must be at least 1")
    zn = tuple(range(n))
    return deterministic_spec(zn, zn, zn, [Fraction(1, n)] * n,
                              lambda k, m: (m + k) % n, lambda k, c: (c - k) % n)


def shift_cipher(n: int, shifts: Sequence[int], weights: Sequence | None = None) -> CipherSpec:
    """c = m + k mod n with k drawn from ``shifts``; decryption subtracts k."""
    shifts = tuple(shifts)
    if weights is None:
        weights = [Fraction(1, len(shifts))] * len(shifts)
    return deterministic_spec(shifts, tuple(range(n)), tuple(range(n)), list(weights),
                              lambda k, m: (m + k) % n, lambda k, c: (c - k) % n)


def counterexample_matrix(n: int, eps: Fraction) -> list[list[Fraction]]:
    diag = eps + (1 - eps) / n
    off = (1 - eps) / n
    return [[diag if i == j else off for j in range(n)] for i in range(n)]


def counterexample_formula(n: int, eps) -> float:
    """I(M;C) at the uniform prior for the diagonal-plus-uniform channel.

    Equals log n - H(row) written out term by term.
    """
    e = float(eps)
    a = e + (1 - e) / n
    b = (1 - e) / n
    val = math.log2(n)
    if a > 0:
        val += a * math.log2(a)
    if b > 0:
        val += (n - 1) * b * math.log2(b)
    return val


def counterexample_scheme(n: int, eps) -> tuple[CipherSpec, list[list[Fraction]], float]:
    """Lazy pad: the identity shift gets extra weight eps, every shift shares the rest."""
    if n < 2:
        raise SynthError("counterexample needs n >= 2")
    eps = Fraction(eps)
    if not 0 < eps <= 1:
        raise SynthError("eps must lie in (0, 1]")
    weights = [eps + (1 - eps) / n] + [(1 - eps) / n] * (n - 1)
    spec = shift_cipher(n, range(n), weights)
    return spec, counterexample_matrix(n, eps), counterexample_formula(n, eps)


# ---------------------------------------------------------------- Birkhoff

def _has_perfect_matching(adj: list[list[int]], n: int, fixed: dict[int, int]) -> bool:
    """Kuhn's augmenting paths on rows not in ``fixed``, avoiding fixed columns."""
    used_cols = set(fixed.values())
    match_col: dict[int, int] = {}

    def try_row(r: int, seen: set) -> bool:
        for c in adj[r]:
            if c in used_cols or c in seen:
                continue
            seen.add(c)
            if c not in match_col or try_row(match_col[c], seen):
                match_col[c] = r
                return True
        return False

    for r in range(n):
        if r in fixed:
            continue
        if not try_row(r, set()):
            return False
    return True


def _smallest_matching(A, n: int, positive) -> tuple[int, ...] | None:
    adj = [[j for j in range(n) if positive(A[i][j])] for i in range(n)]
    fixed: dict[int, int] = {}
    for i in range(n):
        for j in adj[i]:
            if j in fixed.values():
                continue
            fixed[i] = j
            if _has_perfect_matching(adj, n, fixed):
                break
            del fixed[i]
        else:
            return None
    return tuple(fixed[i] for i in range(n))


def birkhoff_decompose(A: Sequence[Sequence], tol: float = DEFAULT_TOL) -> BirkhoffDecomposition:
    """Greedy extraction of lexicographically smallest supported permutations."""
    n = len(A)
    if not is_doubly_stochastic_matrix(A, tol):
        raise SynthError("matrix is not doubly stochastic")
    exact = all(isinstance(v, (Fraction, int)) for r in A for v in r)
    M = [[Fraction(v) if exact else float(v) for v in r] for r in A]

    def positive(v):
        return v > 0 if exact else v > tol

    terms = []
    remaining = Fraction(1) if exact else 1.0
    while positive(remaining):
        perm = _smallest_matching(M, n, positive)
        if perm is None:
            if exact:
                raise AssertionError("doubly stochastic matrix without a supported permutation")
            break
        w = min(M[i][perm[i]] for i in range(n))
        for i in range(n):
            M[i][perm[i]] -= w
        terms.append((w, perm))
        remaining -= w
    if not exact:
        total = sum(w for w, _ in terms)
        terms = [(w / total, p) for w, p in terms]
    return BirkhoffDecomposition(tuple(terms))


def scheme_from_matrix(A: Sequence[Sequence], tol: float = DEFAULT_TOL) -> CipherSpec:
    """Cipher whose channel matrix is A, with entry [c][m] = P(c | m).

    One key per decomposition term; encryption applies the permutation and
    decryption its inverse, so decryption never errs.
    """
    n = len(A)
    dec = birkhoff_decompose(A, tol)
    # A[c][m]: term perm maps row c to column m, so encryption sends m to perm^-1(m)
    enc_of = []
    for _, perm in dec.terms:
        inv = [0] * n
        for c, m in enumerate(perm):
            inv[m] = c
        enc_of.append(inv)
    keys = tuple(range(len(dec.terms)))
    zn = tuple(range(n))
    return deterministic_spec(keys, zn, zn, [w for w, _ in dec.terms],
                              lambda k, m: enc_of[k][m], lambda k, c: dec.terms[k][1][c])


def random_doubly_stochastic(n: int, term_count: int, seed: int) -> list[list[Fraction]]:
    """Convex combination of random permutations with weights of denominator <= 64."""
    if n < 1 or term_count < 1:
        raise SynthError("need n >= 1 and term_count >= 1")
    rng = SplitMix64(seed)
    raw = [rng.randint(1, 64) for _ in range(term_count)]
    total = sum(raw)
    A = [[Fraction(0)] * n for _ in range(n)]
    for r in raw:
        perm = rng.permutation(n)
        for i in range(n):
            A[i][perm[i]] += Fraction(r, total)
    return A


# ---------------------------------------------------------------- tight constructions

def dodis_schemes(kind: str, n: int, param) -> CipherSpec:
    """Schemes on the key-size frontier.

    zero-eps: k = (1 - delta) n keys. Encryption outputs m + key with
    probability k/n and otherwise a uniform ciphertext outside m + {0..k-1};
    every ciphertext row is uniform and each message decrypts correctly with
    probability exactly k/n.

    zero-delta: k = (1 - eps/2) n keys, plain shifts by 0..k-1. Decryption is
    exact and two rows differ on at most n - k symbols, so eps5 = (n-k)/k <= eps.
    """
    param = Fraction(param)
    if not 0 <= param <= 1:
        raise SynthError("parameter must lie in [0, 1]")
    if kind == "zero-eps":
        k = (1 - param) * n
        if k.denominator != 1:
            raise SynthError("delta * |M| must be an integer")
        k = int(k)
        if k < 1:
            raise SynthError("delta = 1 leaves no keys")
        if k == n:
            return one_time_pad(n)
        zn = tuple(range(n))
        enc = []
        for key in range(k):
            block = []
            for m in zn:
                row = [Fraction(0)] * n
                row[(m + key) % n] = Fraction(k, n)
                for j in range(k, n):
                    row[(m + j) % n] = Fraction(1, n)
                block.append(row)
            enc.append(block)
        dec = [[[Fraction(int(o == (c - key) % n)) for o in zn] for c in zn] for key in range(k)]
        return make_spec(tuple(range(k)), zn, zn, [Fraction(1, k)] * k, enc, dec)
    if kind == "zero-delta":
        d = param * n / 2
        if d.denominator != 1:
            raise SynthError("eps * |M| / 2 must be an integer")
        k = n - int(d)
        if k < 1:
            raise SynthError("no keys left")
        return shift_cipher(n, range(k))
    raise SynthError(f"unknown construction {kind!r}")
