"""One-shot symmetric-key encryption with randomized encryption and decryption tables."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Hashable, Sequence

from .probdist import (DEFAULT_TOL, FLOAT, RATIONAL, Channel, Dist, Joint, ProbError,
                       infer_mode, to_num)


class SpecError(ValueError):
    def __init__(self, problems: Sequence["Diagnostic"]):
        self.problems = list(problems)
        super().__init__("; ".join(str(p) for p in self.problems))


@dataclass(frozen=True)
class Diagnostic:
    level: str  # "error" or "notice"
    where: str
    message: str

    def __str__(self) -> str:
        return f"{self.level} at {self.where}: {self.message}"


@dataclass(frozen=True)
class CipherSpec:
    """Validated scheme. ``enc[k][m]`` and ``dec[k][c]`` are probability rows.

    ``dec[k][c]`` is ``None`` when ciphertext c never occurs under key k.
    Keys with zero probability have already been removed.
    """

    keys: tuple
    messages: tuple
    ciphertexts: tuple
    outputs: tuple
    p_k: tuple
    enc: tuple
    dec: tuple
    mode: str = RATIONAL
    tol: float = DEFAULT_TOL
    notices: tuple = field(default=(), compare=False)

    @property
    def sizes(self) -> dict:
        return {"keys": len(self.keys), "messages": len(self.messages),
                "ciphertexts": len(self.ciphertexts)}

    def key_dist(self) -> Dist:
        return Dist(self.keys, self.p_k, self.mode, self.tol)

    def zero(self):
        return Fraction(0) if self.mode == RATIONAL else 0.0

    def one(self):
        return Fraction(1) if self.mode == RATIONAL else 1.0


def _row_problem(row, size, mode, tol, where) -> tuple[Diagnostic | None, tuple | None]:
    if not isinstance(row, (list, tuple)):
        return Diagnostic("error", where, "expected a list of probabilities"), None
    if len(row) != size:
        return Diagnostic("error", where, f"expected {size} entries, got {len(row)}"), None
    try:
        vals = tuple(to_num(v, mode) for v in row)
    except ProbError as exc:
        return Diagnostic("error", where, str(exc)), None
    if any(v < (0 if mode == RATIONAL else -tol) for v in vals):
        return Diagnostic("error", where, "negative probability"), None
    total = sum(vals)
    if (mode == RATIONAL and total != 1) or (mode == FLOAT and abs(total - 1) > tol):
        return Diagnostic("error", where, f"row sums to {total}, not 1"), None
    return None, vals


def _guess_mode(p_k, enc, dec) -> str:
    vals = []

    def walk(x):
        if isinstance(x, (list, tuple)):
            for y in x:
                walk(y)
        elif isinstance(x, Dist):
            vals.extend(x.probs)
        elif x is not None and not isinstance(x, str):
            vals.append(x)

    walk([p_k, enc, dec])
    try:
        return infer_mode(vals)
    except ProbError:
        return RATIONAL


def validate_spec(keys, messages, ciphertexts, p_k, enc, dec, outputs=None,
                  mode: str | None = None, tol: float = DEFAULT_TOL) -> list[Diagnostic]:
    """Diagnostics for a raw scheme description; no errors means it loads."""
    return _load(keys, messages, ciphertexts, p_k, enc, dec, outputs, mode, tol)[0]


def make_spec(keys, messages, ciphertexts, p_k, enc, dec, outputs=None,
              mode: str | None = None, tol: float = DEFAULT_TOL) -> CipherSpec:
    """Build a CipherSpec from nested tables, raising SpecError on any error.

    ``enc[k][m]`` is a row over ciphertexts, ``dec[k][c]`` a row over outputs
    (or None where unreachable). Rows may also be Dist objects.
    """
    diags, spec = _load(keys, messages, ciphertexts, p_k, enc, dec, outputs, mode, tol)
    if spec is None:
        raise SpecError([d for d in diags if d.level == "error"])
    return spec


def _plain(row):
    return list(row.probs) if isinstance(row, Dist) else row


def _load(keys, messages, ciphertexts, p_k, enc, dec, outputs, mode, tol):
    diags: list[Diagnostic] = []
    keys, messages, ciphertexts = tuple(keys), tuple(messages), tuple(ciphertexts)
    outputs = tuple(messages if outputs is None else outputs)
    if mode is None:
        mode = _guess_mode(p_k, enc, dec)
    for name, alph in (("keys", keys), ("messages", messages),
                       ("ciphertexts", ciphertexts), ("outputs", outputs)):
        if not alph:
            diags.append(Diagnostic("error", f"alphabets.{name}", "empty alphabet"))
        elif len(set(alph)) != len(alph):
            diags.append(Diagnostic("error", f"alphabets.{name}", "repeated symbol"))
    if diags:
        return diags, None

    prob, pk = _row_problem(_plain(p_k), len(keys), mode, tol, "p_k")
    if prob:
        return [prob], None
    nk, nm, nc, no = len(keys), len(messages), len(ciphertexts), len(outputs)
    if not isinstance(enc, (list, tuple)) or len(enc) != nk:
        return [Diagnostic("error", "enc", f"expected {nk} key blocks")], None
    if not isinstance(dec, (list, tuple)) or len(dec) != nk:
        return [Diagnostic("error", "dec", f"expected {nk} key blocks")], None

    enc_rows: list[list] = []
    dec_rows: list[list] = []
    for k in range(nk):
        if not isinstance(enc[k], (list, tuple)) or len(enc[k]) != nm:
            diags.append(Diagnostic("error", f"enc[{k}]", f"expected {nm} message rows"))
            enc_rows.append([None] * nm)
            continue
        block = []
        for m in range(nm):
            prob, row = _row_problem(_plain(enc[k][m]), nc, mode, tol, f"enc[{k}][{m}]")
            if prob:
                diags.append(prob)
            block.append(row)
        enc_rows.append(block)
    for k in range(nk):
        if not isinstance(dec[k], (list, tuple)) or len(dec[k]) != nc:
            diags.append(Diagnostic("error", f"dec[{k}]", f"expected {nc} ciphertext rows"))
            dec_rows.append([None] * nc)
            continue
        block = []
        for c in range(nc):
            raw = dec[k][c]
            if raw is None:
                block.append(None)
                continue
            prob, row = _row_problem(_plain(raw), no, mode, tol, f"dec[{k}][{c}]")
            if prob:
                diags.append(prob)
            block.append(row)
        dec_rows.append(block)
    if any(d.level == "error" for d in diags):
        return diags, None

    for k in range(nk):
        for c in range(nc):
            if dec_rows[k][c] is None and any(enc_rows[k][m][c] > 0 for m in range(nm)):
                diags.append(Diagnostic("error", f"dec[{k}][{c}]",
                                        "ciphertext is reachable under this key but has no decryption row"))
    if any(d.level == "error" for d in diags):
        return diags, None

    positive = [k for k in range(nk) if pk[k] > (0 if mode == RATIONAL else tol)]
    for k in range(nk):
        if k not in positive:
            diags.append(Diagnostic("notice", f"p_k[{k}]", f"key {keys[k]!r} has zero probability and was pruned"))
    if mode == FLOAT:
        total = sum(pk[k] for k in positive)
        kept_p = tuple(pk[k] / total for k in positive)
    else:
        kept_p = tuple(pk[k] for k in positive)
    spec = CipherSpec(
        keys=tuple(keys[k] for k in positive), messages=messages, ciphertexts=ciphertexts,
        outputs=outputs, p_k=kept_p,
        enc=tuple(tuple(enc_rows[k]) for k in positive),
        dec=tuple(tuple(dec_rows[k]) for k in positive),
        mode=mode, tol=tol, notices=tuple(diags))
    return diags, spec


def _check_pm(s: CipherSpec, pm: Dist) -> None:
    if pm.alphabet != s.messages:
        raise ProbError("message distribution alphabet differs from the scheme's messages")
    if pm.mode != s.mode:
        raise ProbError(f"message distribution is {pm.mode} but scheme is {s.mode}")


def channel_rows(s: CipherSpec) -> list[list]:
    """Row m is the ciphertext distribution given message m, averaged over keys."""
    zero = s.zero()
    rows = []
    for m in range(len(s.messages)):
        acc = [zero] * len(s.ciphertexts)
        for k, pk in enumerate(s.p_k):
            acc = [a + pk * e for a, e in zip(acc, s.enc[k][m])]
        rows.append(acc)
    return rows


def channel_matrix(s: CipherSpec) -> Channel:
    return Channel.from_rows(s.messages, s.ciphertexts, channel_rows(s), s.mode)


def _correct_index(s: CipherSpec, m: int) -> int | None:
    label = s.messages[m]
    return s.outputs.index(label) if label in s.outputs else None


def per_message_error(s: CipherSpec) -> list:
    """Probability that decryption misses the sent message, per message."""
    out = []
    for m in range(len(s.messages)):
        j = _correct_index(s, m)
        ok = s.zero()
        if j is not None:
            for k, pk in enumerate(s.p_k):
                for c, e in enumerate(s.enc[k][m]):
                    if e:
                        ok += pk * e * s.dec[k][c][j]
        out.append(s.one() - ok)
    return out


def decryption_output(s: CipherSpec, m: int) -> list:
    """Law of the decrypted output when message index m is sent."""
    out = [s.zero()] * len(s.outputs)
    for k, pk in enumerate(s.p_k):
        for c, e in enumerate(s.enc[k][m]):
            if e:
                w = pk * e
                out = [o + w * d for o, d in zip(out, s.dec[k][c])]
    return out


def execute(s: CipherSpec, pm: Dist) -> Joint:
    """Exact joint of (message, decrypted output, ciphertext)."""
    _check_pm(s, pm)
    table: dict[tuple, Any] = {}
    for m, w in enumerate(pm.probs):
        if not w:
            continue
        for k, pk in enumerate(s.p_k):
            for c, e in enumerate(s.enc[k][m]):
                if not e:
                    continue
                base = w * pk * e
                for o, d in enumerate(s.dec[k][c]):
                    if d:
                        key = (s.messages[m], s.outputs[o], s.ciphertexts[c])
                        table[key] = table.get(key, 0) + base * d
    return Joint(("M", "Mt", "C"), (s.messages, s.outputs, s.ciphertexts), table, s.mode, s.tol)


def is_doubly_stochastic(ch: Channel, tol: float = DEFAULT_TOL) -> bool:
    if len(ch.inputs) != len(ch.outputs):
        raise ProbError("doubly stochastic needs a square channel")
    return is_doubly_stochastic_matrix(ch.matrix(), tol)


def is_doubly_stochastic_matrix(A: Sequence[Sequence], tol: float = DEFAULT_TOL) -> bool:
    n = len(A)
    if any(len(r) != n for r in A):
        raise ProbError("matrix is not square")
    exact = all(isinstance(v, (Fraction, int)) for r in A for v in r)

    def one(x):
        return x == 1 if exact else abs(x - 1) <= tol

    if any((v < 0) if exact else v < -tol for r in A for v in r):
        return False
    return all(one(sum(r)) for r in A) and all(one(sum(A[i][j] for i in range(n))) for j in range(n))


def deterministic_spec(keys: Sequence[Hashable], messages: Sequence[Hashable],
                       ciphertexts: Sequence[Hashable], p_k: Sequence[Any],
                       enc_map, dec_map, outputs=None) -> CipherSpec:
    """Scheme whose encryption and decryption are functions.

    ``enc_map(k, m)`` returns a ciphertext, ``dec_map(k, c)`` an output symbol.
    """
    outputs = tuple(messages if outputs is None else outputs)
    one, zero = Fraction(1), Fraction(0)
    mode = infer_mode([p for p in p_k if not isinstance(p, str)]) if any(
        not isinstance(p, str) for p in p_k) else RATIONAL
    if mode == FLOAT:
        one, zero = 1.0, 0.0
    enc = [[[one if c == enc_map(k, m) else zero for c in ciphertexts] for m in messages] for k in keys]
    dec = [[[one if o == dec_map(k, c) else zero for o in outputs] for c in ciphertexts] for k in keys]
    return make_spec(keys, messages, ciphertexts, p_k, enc, dec, outputs, mode)
