"""Finite distributions in exact-rational or float mode, with distances and entropies.

Rational mode stores ``fractions.Fraction`` probabilities and keeps every
distance exact. Float mode stores Python floats and compares with an absolute
tolerance. A single value never mixes the two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Any, Hashable, Iterable, Mapping, Sequence, Union

Num = Union[Fraction, float]

DEFAULT_TOL = 1e-9
RATIONAL = "rational"
FLOAT = "float"


class ProbError(ValueError):
    """Malformed distribution, alphabet mismatch or mixed numeric modes."""


class ModeError(ProbError):
    """Rational and float values were combined in one computation."""


def to_num(x: Any, mode: str) -> Num:
    """Coerce ``x`` into the given numeric mode.

    Strings like ``"3/8"`` are accepted in both modes. Floats are refused in
    rational mode because converting them silently would invent precision.
    """
    if mode == RATIONAL:
        if isinstance(x, bool):
            raise ProbError(f"boolean is not a probability: {x!r}")
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            try:
                return Fraction(x.strip())
            except (ValueError, ZeroDivisionError) as exc:
                raise ProbError(f"not a rational number: {x!r}") from exc
        if isinstance(x, float):
            raise ModeError(f"float {x!r} given in rational mode")
        raise ProbError(f"unsupported number {x!r}")
    if mode == FLOAT:
        if isinstance(x, str):
            try:
                return float(Fraction(x.strip()))
            except (ValueError, ZeroDivisionError) as exc:
                raise ProbError(f"not a number: {x!r}") from exc
        if isinstance(x, (int, float, Fraction)) and not isinstance(x, bool):
            return float(x)
        raise ProbError(f"unsupported number {x!r}")
    raise ProbError(f"unknown numeric mode {mode!r}")


def infer_mode(values: Iterable[Any]) -> str:
    kinds = set()
    for v in values:
        if isinstance(v, float):
            kinds.add(FLOAT)
        elif isinstance(v, (Fraction, int)) and not isinstance(v, bool):
            kinds.add(RATIONAL)
        else:
            raise ProbError(f"unsupported number {v!r}")
    if kinds == {FLOAT, RATIONAL}:
        raise ModeError("mixed rational and float probabilities")
    return FLOAT if kinds == {FLOAT} else RATIONAL


def _same_mode(*modes: str) -> str:
    if len(set(modes)) != 1:
        raise ModeError(f"mixed numeric modes: {sorted(set(modes))}")
    return modes[0]


def xlog2(p: Num) -> float:
    """p * log2(p) with the convention 0 log 0 = 0."""
    if p <= 0:
        return 0.0
    return float(p) * math.log2(p)


@dataclass(frozen=True)
class Dist:
    alphabet: tuple
    probs: tuple
    mode: str = RATIONAL
    tol: float = DEFAULT_TOL

    def __init__(self, alphabet: Sequence[Hashable], probs: Sequence[Any],
                 mode: str | None = None, tol: float = DEFAULT_TOL):
        alphabet = tuple(alphabet)
        probs = list(probs)
        if len(alphabet) != len(probs):
            raise ProbError(f"alphabet has {len(alphabet)} symbols but {len(probs)} probabilities")
        if len(set(alphabet)) != len(alphabet):
            raise ProbError("alphabet has repeated symbols")
        if not alphabet:
            raise ProbError("empty alphabet")
        if mode is None:
            mode = infer_mode(p for p in probs if not isinstance(p, str)) if any(
                not isinstance(p, str) for p in probs) else RATIONAL
        vals = tuple(to_num(p, mode) for p in probs)
        if mode == RATIONAL:
            if any(v < 0 for v in vals):
                raise ProbError("negative probability")
            if sum(vals) != 1:
                raise ProbError(f"probabilities sum to {sum(vals)}, not 1")
        else:
            if any(v < -tol or math.isnan(v) for v in vals):
                raise ProbError("negative probability")
            if abs(math.fsum(vals) - 1.0) > tol:
                raise ProbError(f"probabilities sum to {math.fsum(vals)!r}, not 1")
            vals = tuple(max(v, 0.0) for v in vals)
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "probs", vals)
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "tol", tol)

    @classmethod
    def uniform(cls, alphabet: Sequence[Hashable], mode: str = RATIONAL) -> "Dist":
        n = len(alphabet)
        p = Fraction(1, n) if mode == RATIONAL else 1.0 / n
        return cls(alphabet, [p] * n, mode)

    @classmethod
    def point(cls, alphabet: Sequence[Hashable], symbol: Hashable, mode: str = RATIONAL) -> "Dist":
        one, zero = (Fraction(1), Fraction(0)) if mode == RATIONAL else (1.0, 0.0)
        if symbol not in alphabet:
            raise ProbError(f"{symbol!r} not in alphabet")
        return cls(alphabet, [one if a == symbol else zero for a in alphabet], mode)

    @classmethod
    def from_mapping(cls, alphabet: Sequence[Hashable], m: Mapping[Hashable, Any],
                     mode: str | None = None) -> "Dist":
        if set(m) - set(alphabet):
            raise ProbError(f"symbols outside alphabet: {sorted(map(repr, set(m) - set(alphabet)))}")
        if mode is None:
            mode = infer_mode(v for v in m.values() if not isinstance(v, str))
        zero = 0.0 if mode == FLOAT else 0
        return cls(alphabet, [m.get(a, zero) for a in alphabet], mode)

    def __len__(self) -> int:
        return len(self.alphabet)

    def __getitem__(self, symbol: Hashable) -> Num:
        return self.probs[self.index(symbol)]

    def index(self, symbol: Hashable) -> int:
        try:
            return self.alphabet.index(symbol)
        except ValueError:
            raise ProbError(f"{symbol!r} not in alphabet") from None

    def as_dict(self) -> dict:
        return dict(zip(self.alphabet, self.probs))

    @property
    def support(self) -> tuple:
        return tuple(a for a, p in zip(self.alphabet, self.probs) if self._pos(p))

    @property
    def full_support(self) -> bool:
        return all(self._pos(p) for p in self.probs)

    def _pos(self, p: Num) -> bool:
        return p > 0 if self.mode == RATIONAL else p > self.tol

    def to_float(self) -> "Dist":
        return self if self.mode == FLOAT else Dist(self.alphabet, [float(p) for p in self.probs], FLOAT, self.tol)

    def equals(self, other: "Dist") -> bool:
        _check_alphabet(self, other)
        if _same_mode(self.mode, other.mode) == RATIONAL:
            return self.probs == other.probs
        return all(abs(a - b) <= self.tol for a, b in zip(self.probs, other.probs))


def _check_alphabet(p: Dist, q: Dist) -> None:
    if p.alphabet != q.alphabet:
        raise ProbError(f"alphabet mismatch: {p.alphabet!r} vs {q.alphabet!r}")


def tv_distance(p: Dist, q: Dist) -> Num:
    """Statistical distance, half the L1 norm of the difference."""
    _check_alphabet(p, q)
    mode = _same_mode(p.mode, q.mode)
    if mode == RATIONAL:
        return sum((a - b for a, b in zip(p.probs, q.probs) if a > b), Fraction(0))
    return 0.5 * math.fsum(abs(a - b) for a, b in zip(p.probs, q.probs))


def tv_rows(p: Sequence[Num], q: Sequence[Num]) -> Num:
    """Statistical distance of two raw probability vectors of one mode."""
    if p and isinstance(p[0], Fraction):
        return sum((a - b for a, b in zip(p, q) if a > b), Fraction(0))
    return 0.5 * math.fsum(abs(a - b) for a, b in zip(p, q))


@dataclass(frozen=True)
class Entropies:
    H: float
    H_min: float
    H_0: float


def shannon_entropy(probs: Iterable[Num]) -> float:
    return -math.fsum(xlog2(p) for p in probs)


def entropies(p: Dist) -> Entropies:
    h = shannon_entropy(p.probs)
    pmax = max(p.probs)
    return Entropies(H=max(h, 0.0), H_min=-math.log2(pmax), H_0=math.log2(len(p.support)))


def binary_entropy(d: Num) -> float:
    if d < 0 or d > 1:
        raise ProbError(f"binary entropy argument {d!r} outside [0, 1]")
    return -(xlog2(d) + xlog2(1 - d))


def kl_divergence(p: Dist, q: Dist) -> float:
    """Relative entropy in bits; ``math.inf`` when p is not dominated by q."""
    _check_alphabet(p, q)
    _same_mode(p.mode, q.mode)
    total = []
    for a, b in zip(p.probs, q.probs):
        if a <= 0:
            continue
        if b <= 0:
            return math.inf
        total.append(float(a) * math.log2(a / b) if isinstance(a, Fraction) else a * math.log2(a / b))
    return max(math.fsum(total), 0.0)


class Joint:
    """Joint distribution over named axes stored densely in row-major order."""

    def __init__(self, axes: Sequence[str], alphabets: Sequence[Sequence[Hashable]],
                 table: Mapping[tuple, Any] | Sequence[Any], mode: str | None = None,
                 tol: float = DEFAULT_TOL):
        self.axes = tuple(axes)
        self.alphabets = tuple(tuple(a) for a in alphabets)
        if len(self.axes) != len(self.alphabets) or not self.axes:
            raise ProbError("axes and alphabets disagree")
        if len(set(self.axes)) != len(self.axes):
            raise ProbError("repeated axis name")
        cells = list(product(*self.alphabets))
        if isinstance(table, Mapping):
            unknown = set(table) - set(cells)
            if unknown:
                raise ProbError(f"cells outside alphabets: {sorted(map(repr, unknown))[:3]}")
            if mode is None:
                mode = infer_mode(v for v in table.values() if not isinstance(v, str))
            zero = 0.0 if mode == FLOAT else 0
            raw = [table.get(c, zero) for c in cells]
        else:
            raw = list(table)
        self._dist = Dist(cells, raw, mode, tol)
        self.mode = self._dist.mode
        self.tol = tol

    @property
    def dist(self) -> Dist:
        """The joint as a flat Dist over tuples of symbols."""
        return self._dist

    def items(self):
        return zip(self._dist.alphabet, self._dist.probs)

    def prob(self, cell: tuple) -> Num:
        return self._dist[cell]

    def _axis(self, name: str) -> int:
        try:
            return self.axes.index(name)
        except ValueError:
            raise ProbError(f"no axis {name!r}") from None

    def marginal(self, *names: str) -> "Joint":
        idx = [self._axis(n) for n in names]
        acc: dict = {}
        for cell, p in self.items():
            key = tuple(cell[i] for i in idx)
            acc[key] = acc.get(key, 0) + p
        return Joint(names, [self.alphabets[i] for i in idx], acc, self.mode, self.tol)

    def marginal_dist(self, name: str) -> Dist:
        i = self._axis(name)
        acc: dict = {a: 0 for a in self.alphabets[i]}
        for cell, p in self.items():
            acc[cell[i]] += p
        return Dist(self.alphabets[i], [acc[a] for a in self.alphabets[i]], self.mode, self.tol)

    def same_shape(self, other: "Joint") -> bool:
        return self.axes == other.axes and self.alphabets == other.alphabets

    def __repr__(self) -> str:
        return f"Joint(axes={self.axes}, sizes={[len(a) for a in self.alphabets]}, mode={self.mode})"


def product_joint(axes: Sequence[str], dists: Sequence[Dist]) -> Joint:
    mode = _same_mode(*(d.mode for d in dists))
    table = {}
    for combo in product(*(list(zip(d.alphabet, d.probs)) for d in dists)):
        p = Fraction(1) if mode == RATIONAL else 1.0
        for _, q in combo:
            p *= q
        table[tuple(a for a, _ in combo)] = p
    return Joint(axes, [d.alphabet for d in dists], table, mode)


def joint_tv(j1: Joint, j2: Joint) -> Num:
    if not j1.same_shape(j2):
        raise ProbError("joints have different axes or alphabets")
    return tv_distance(j1.dist, j2.dist)


def mutual_information(j: Joint) -> float:
    """I(X;Y) in bits for a two-axis joint, as H(X) + H(Y) - H(X,Y)."""
    if len(j.axes) != 2:
        raise ProbError("mutual information needs a two-axis joint")
    px = j.marginal_dist(j.axes[0])
    py = j.marginal_dist(j.axes[1])
    if j.mode == RATIONAL and _is_product(j, px, py):
        return 0.0
    val = shannon_entropy(px.probs) + shannon_entropy(py.probs) - shannon_entropy(j.dist.probs)
    return max(val, 0.0)


def _is_product(j: Joint, px: Dist, py: Dist) -> bool:
    ix = {a: p for a, p in zip(px.alphabet, px.probs)}
    iy = {a: p for a, p in zip(py.alphabet, py.probs)}
    return all(p == ix[x] * iy[y] for (x, y), p in j.items())


def independent_of_marginals(j: Joint) -> Joint:
    """Product of the two marginals of a two-axis joint."""
    return product_joint(j.axes, [j.marginal_dist(a) for a in j.axes])


def conditional_tv(j1: Joint, j2: Joint) -> Num:
    """Average over the first axis of the conditional distances.

    Both joints must have identical first-axis marginals; the result then
    equals the joint distance.
    """
    if len(j1.axes) != 2 or len(j2.axes) != 2:
        raise ProbError("conditional distance needs two-axis joints")
    if j1.alphabets != j2.alphabets:
        raise ProbError("joints have different alphabets")
    pz1 = j1.marginal_dist(j1.axes[0])
    pz2 = j2.marginal_dist(j2.axes[0])
    if not pz1.equals(pz2):
        raise ProbError("conditioning marginals differ")
    xs = j1.alphabets[1]
    parts = []
    for z, pz in zip(pz1.alphabet, pz1.probs):
        if pz <= 0:
            continue
        r1 = [j1.prob((z, x)) / pz for x in xs]
        r2 = [j2.prob((z, x)) / pz for x in xs]
        parts.append(pz * tv_rows(r1, r2))
    if j1.mode == RATIONAL:
        return sum(parts, Fraction(0))
    return math.fsum(parts)


class Channel:
    """Stochastic matrix given as one output Dist per input symbol."""

    def __init__(self, inputs: Sequence[Hashable], outputs: Sequence[Hashable],
                 columns: Sequence[Dist]):
        self.inputs = tuple(inputs)
        self.outputs = tuple(outputs)
        self.columns = tuple(columns)
        if len(self.columns) != len(self.inputs):
            raise ProbError("one column per input symbol required")
        for col in self.columns:
            if col.alphabet != self.outputs:
                raise ProbError("column alphabet differs from channel outputs")
        self.mode = _same_mode(*(c.mode for c in self.columns))

    @classmethod
    def from_rows(cls, inputs, outputs, rows: Sequence[Sequence[Any]], mode: str | None = None) -> "Channel":
        return cls(inputs, outputs, [Dist(outputs, r, mode) for r in rows])

    def rows(self) -> list[list[Num]]:
        """Row m holds the output probabilities given input m."""
        return [list(c.probs) for c in self.columns]

    def matrix(self) -> list[list[Num]]:
        """Entry [c][m] is the probability of output c given input m."""
        return [[col.probs[i] for col in self.columns] for i in range(len(self.outputs))]

    def column(self, m: Hashable) -> Dist:
        return self.columns[self.inputs.index(m)]

    def output_dist(self, pm: Dist) -> Dist:
        if pm.alphabet != self.inputs:
            raise ProbError("input distribution alphabet mismatch")
        _same_mode(pm.mode, self.mode)
        zero = Fraction(0) if self.mode == RATIONAL else 0.0
        out = [zero] * len(self.outputs)
        for w, col in zip(pm.probs, self.columns):
            if w:
                out = [o + w * p for o, p in zip(out, col.probs)]
        return Dist(self.outputs, out, self.mode)

    def joint(self, pm: Dist, axes: tuple[str, str] = ("M", "C")) -> Joint:
        table = {}
        for m, w, col in zip(self.inputs, pm.probs, self.columns):
            for c, p in zip(self.outputs, col.probs):
                table[(m, c)] = w * p
        return Joint(axes, [self.inputs, self.outputs], table, self.mode)
