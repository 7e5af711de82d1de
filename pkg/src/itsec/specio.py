"""JSON documents for schemes and protocols, with exact rationals as "num/den" strings.

A cipher document::

    {"type": "cipher", "numbers": "rational",
     "alphabets": {"keys": [...], "messages": [...], "ciphertexts": [...], "outputs": [...]},
     "p_k": [...], "enc": [[[row over ciphertexts] per message] per key],
     "dec": [[[row over outputs] or null per ciphertext] per key]}

A key agreement document::

    {"type": "keyagreement", "numbers": "rational",
     "alphabets": {"X": [...], "Y": [...], "T": [...], "K": [...]},
     "p_xy": [[...] per x],
     "rounds": [{"party": "A", "rows": [[input, [t, ...], [row]], ...], "default": row or null}, ...],
     "g_a": {"rows": [...], "default": ...}, "g_b": {...}}

Table rows name the sender's input and the transcript prefix by index.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .cipher import CipherSpec, SpecError, make_spec
from .keyagree import ALICE, BOB, KAError, KASpec, Table, make_ka
from .probdist import DEFAULT_TOL, FLOAT, RATIONAL


class DocumentError(ValueError):
    """Unreadable document; carries either a text position or a JSON path."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None,
                 path: str | None = None):
        self.message, self.line, self.column, self.path = message, line, column, path
        if line is not None:
            where = f"line {line}, column {column}"
        elif path is not None:
            where = path
        else:
            where = "document"
        super().__init__(f"{where}: {message}")


def _path(where: str) -> str:
    return "$" if not where else "$." + where


def _num(v: Any, mode: str) -> Any:
    if mode == RATIONAL:
        return str(Fraction(v))
    return float(v)


def _row(r, mode: str):
    return None if r is None else [_num(v, mode) for v in r]


def _label(x: Any) -> Any:
    if isinstance(x, (str, int)) and not isinstance(x, bool):
        return x
    raise DocumentError(f"symbol {x!r} is not a JSON string or integer")


# ---------------------------------------------------------------- writing

def cipher_to_doc(s: CipherSpec) -> dict:
    return {
        "type": "cipher",
        "numbers": s.mode,
        "tolerance": s.tol,
        "alphabets": {"keys": [_label(k) for k in s.keys],
                      "messages": [_label(m) for m in s.messages],
                      "ciphertexts": [_label(c) for c in s.ciphertexts],
                      "outputs": [_label(o) for o in s.outputs]},
        "p_k": _row(s.p_k, s.mode),
        "enc": [[_row(r, s.mode) for r in block] for block in s.enc],
        "dec": [[_row(r, s.mode) for r in block] for block in s.dec],
    }


def _table_doc(t: Table, mode: str) -> dict:
    rows = [[inp, list(prefix), _row(r, mode)] for (inp, prefix), r in sorted(t.rows.items())]
    return {"party": t.party, "rows": rows, "default": _row(t.default, mode)}


def ka_to_doc(s: KASpec) -> dict:
    return {
        "type": "keyagreement",
        "numbers": s.mode,
        "tolerance": s.tol,
        "alphabets": {"X": [_label(v) for v in s.xs], "Y": [_label(v) for v in s.ys],
                      "T": [_label(v) for v in s.ts], "K": [_label(v) for v in s.ks]},
        "p_xy": [_row(r, s.mode) for r in s.p_xy],
        "rounds": [_table_doc(t, s.mode) for t in s.rounds],
        "g_a": _table_doc(s.g_a, s.mode),
        "g_b": _table_doc(s.g_b, s.mode),
    }


def _is_leaf_list(x) -> bool:
    return isinstance(x, list) and all(not isinstance(v, (list, dict)) for v in x)


def dumps(doc: Any, indent: int = 0) -> str:
    """Stable JSON: objects one key per line, lists of scalars on one line."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(doc, dict):
        if not doc:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {dumps(v, indent + 1)}" for k, v in doc.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(doc, list):
        if _is_leaf_list(doc):
            return "[" + ", ".join(json.dumps(v) for v in doc) + "]"
        if isinstance(doc[0], int) and all(not isinstance(v, list) or _is_leaf_list(v) for v in doc):
            # table entry [input, [prefix], [row]]
            return "[" + ", ".join(dumps(v) for v in doc) + "]"
        items = [inner + dumps(v, indent + 1) for v in doc]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(doc)


def to_text(spec) -> str:
    doc = cipher_to_doc(spec) if isinstance(spec, CipherSpec) else ka_to_doc(spec)
    return dumps(doc) + "\n"


# ---------------------------------------------------------------- reading

def _require(doc: dict, key: str, where: str) -> Any:
    if key not in doc:
        raise DocumentError(f"missing field {key!r}", path=_path(where))
    return doc[key]


def _mode(doc: dict, override: str | None) -> str:
    mode = override or doc.get("numbers", RATIONAL)
    if mode not in (RATIONAL, FLOAT):
        raise DocumentError(f"numbers must be 'rational' or 'float', not {mode!r}", path="$.numbers")
    return mode


def _alphabet(doc: dict, name: str, where: str) -> list:
    a = _require(doc, name, where)
    if not isinstance(a, list) or any(isinstance(v, (list, dict, bool)) or v is None for v in a):
        raise DocumentError("alphabet must be a list of strings or integers", path=_path(f"{where}.{name}"))
    return a


def cipher_from_doc(doc: dict, mode: str | None = None, tol: float | None = None) -> CipherSpec:
    m = _mode(doc, mode)
    t = tol if tol is not None else float(doc.get("tolerance", DEFAULT_TOL))
    al = _require(doc, "alphabets", "")
    if not isinstance(al, dict):
        raise DocumentError("alphabets must be an object", path="$.alphabets")
    keys = _alphabet(al, "keys", "alphabets")
    msgs = _alphabet(al, "messages", "alphabets")
    cts = _alphabet(al, "ciphertexts", "alphabets")
    outs = _alphabet(al, "outputs", "alphabets") if "outputs" in al else None
    try:
        return make_spec(keys, msgs, cts, _require(doc, "p_k", ""), _require(doc, "enc", ""),
                         _require(doc, "dec", ""), outs, m, t)
    except SpecError as exc:
        first = exc.problems[0]
        raise DocumentError(first.message, path=_path(first.where)) from None


def _table_from_doc(raw: Any, where: str) -> dict:
    if not isinstance(raw, dict):
        raise DocumentError("table must be an object", path=_path(where))
    rows = {}
    for i, entry in enumerate(raw.get("rows", [])):
        if not (isinstance(entry, list) and len(entry) == 3 and isinstance(entry[0], int)
                and isinstance(entry[1], list)):
            raise DocumentError("row entries are [input, [transcript...], [probabilities]]",
                                path=_path(f"{where}.rows[{i}]"))
        key = (entry[0], tuple(entry[1]))
        if key in rows:
            raise DocumentError("duplicate row", path=_path(f"{where}.rows[{i}]"))
        rows[key] = entry[2]
    return {"rows": rows, "default": raw.get("default")}


def ka_from_doc(doc: dict, mode: str | None = None, tol: float | None = None) -> KASpec:
    m = _mode(doc, mode)
    t = tol if tol is not None else float(doc.get("tolerance", DEFAULT_TOL))
    al = _require(doc, "alphabets", "")
    if not isinstance(al, dict):
        raise DocumentError("alphabets must be an object", path="$.alphabets")
    xs, ys, ts, ks = (_alphabet(al, n, "alphabets") for n in ("X", "Y", "T", "K"))
    rounds_raw = _require(doc, "rounds", "")
    if not isinstance(rounds_raw, list):
        raise DocumentError("rounds must be a list", path="$.rounds")
    rounds = []
    for i, r in enumerate(rounds_raw):
        expected = ALICE if i % 2 == 0 else BOB
        if isinstance(r, dict) and r.get("party", expected) != expected:
            raise DocumentError(f"round {i + 1} is sent by {expected}", path=_path(f"rounds[{i}].party"))
        rounds.append(_table_from_doc(r, f"rounds[{i}]"))
    ga = _table_from_doc(_require(doc, "g_a", ""), "g_a")
    gb = _table_from_doc(_require(doc, "g_b", ""), "g_b")
    try:
        return make_ka(xs, ys, ts, ks, _require(doc, "p_xy", ""), rounds, ga, gb, m, t)
    except KAError as exc:
        raise DocumentError(str(exc).split(": ", 1)[-1], path=_path(exc.where)) from None


def loads(text: str, mode: str | None = None, tol: float | None = None):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise DocumentError("top level must be an object", path="$")
    kind = doc.get("type")
    if kind == "cipher":
        return cipher_from_doc(doc, mode, tol)
    if kind == "keyagreement":
        return ka_from_doc(doc, mode, tol)
    raise DocumentError(f"type must be 'cipher' or 'keyagreement', not {kind!r}", path="$.type")


def load(path: str, mode: str | None = None, tol: float | None = None):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text, mode, tol)
