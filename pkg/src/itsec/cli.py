"""Command-line front end: analyze, ka-analyze, synth and fuzz.

Exit codes are 0 for success, 1 for unreadable input or bad parameters and 2
when a relation or bound check comes out violated.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from .bounds import VIOLATED as BOUND_VIOLATED
from .bounds import check_bound103
from .checks import VIOLATED
from .cipher import CipherSpec, SpecError
from .fuzz import run_campaign
from .keyagree import (KAError, KASpec, check_bound303, check_relation_ka, ka_metrics, support_entropy,
                       support_size)
from .metrics import MetricValue, security_report
from .probdist import DEFAULT_TOL, FLOAT, RATIONAL, ProbError, to_num
from .relations import check_theorem1
from .specio import DocumentError, load, to_text
from .synth import (SynthError, counterexample_scheme, dodis_schemes, one_time_pad,
                    random_doubly_stochastic, scheme_from_matrix)

OK, INPUT_ERROR, VIOLATION = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- rendering

def plain(x: Any) -> Any:
    """JSON-ready copy: rationals become "num/den" strings, tuples become lists."""
    if isinstance(x, bool) or x is None or isinstance(x, (str, int)):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (float, np.floating)):
        v = float(x)
        return v if math.isfinite(v) else str(v)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.ndarray):
        return [plain(v) for v in x.tolist()]
    if isinstance(x, dict):
        return {str(k): plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [plain(v) for v in x]
    if isinstance(x, MetricValue):
        return metric_doc(x)
    return str(x)


def metric_doc(m: MetricValue) -> dict:
    return {"kind": m.kind, "lo": plain(m.lo), "hi": plain(m.hi), "witness": plain(m.witness), "note": m.note}


def _short(x: Any) -> str:
    if isinstance(x, Fraction):
        return str(x) if x.denominator <= 10**6 else f"{float(x):.10g}"
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.10g}"
    return str(x)


def table(headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    cells = [[str(h) for h in headers]] + [[_short(v) for v in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _metric_rows(named: Sequence[tuple[str, MetricValue]]) -> list:
    return [(n, m.kind, m.lo, m.hi) for n, m in named]


def _check_rows(checks) -> list:
    return [(c.status, c.name, c.lhs, c.rhs) for c in checks]


def _bound_rows(bounds) -> list:
    return [(b.status, b.name, b.lhs_lo, b.lhs_hi, b.rhs) for b in bounds]


def _emit(doc: dict, text: str, fmt: str, out: str | None) -> None:
    body = json.dumps(plain(doc), indent=2) + "\n" if fmt == "json" else text + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)


def _verdict(checks, bounds) -> int:
    bad = any(c.status == VIOLATED for c in checks) or any(b.status == BOUND_VIOLATED for b in bounds)
    return VIOLATION if bad else OK


# ---------------------------------------------------------------- verbs

def analyze_cipher(s: CipherSpec, tol: float, seed: int) -> tuple[dict, str, int]:
    r = security_report(s, tol, seed=seed)
    checks = check_theorem1(s, r, tol)
    bounds = check_bound103(r, tol)
    named = [("delta", r.delta)] + [(f"eps{j}", r.eps[j]) for j in range(1, 11)]
    doc = {"type": "cipher", "mode": r.mode, "tolerance": tol, "sizes": r.sizes,
           "metrics": {n: metric_doc(m) for n, m in named},
           "checks": [c.as_dict() for c in checks],
           "bounds": [b.as_dict() for b in bounds]}
    text = "\n\n".join([
        f"cipher  keys={r.sizes['keys']}  messages={r.sizes['messages']}  "
        f"ciphertexts={r.sizes['ciphertexts']}  mode={r.mode}",
        table(("metric", "kind", "lo", "hi"), _metric_rows(named)),
        table(("status", "relation", "lhs", "rhs"), _check_rows(checks)),
        table(("status", "bound", "lhs lo", "lhs hi", "rhs"), _bound_rows(bounds)),
    ])
    return doc, text, _verdict(checks, bounds)


def analyze_ka(s: KASpec, tol: float, cap: int) -> tuple[dict, str, int]:
    r = ka_metrics(s, cap)
    checks = check_relation_ka(r, tol=tol)
    supp = support_size(s)
    h0 = support_entropy(s)
    bounds = check_bound303(r, h0, tol=tol)
    named = [("delta1", r.delta1), ("delta2", r.delta2), ("eps1", r.eps1), ("eps2", r.eps2), ("eps3", r.eps3)]
    doc = {"type": "keyagreement", "mode": r.mode, "tolerance": tol, "sizes": r.sizes,
           "metrics": {n: metric_doc(m) for n, m in named},
           "simulator": {"lo": r.simulator[0], "hi": r.simulator[1]},
           "h0": h0,
           "checks": [c.as_dict() for c in checks],
           "bounds": [b.as_dict() for b in bounds]}
    text = "\n\n".join([
        f"key agreement  keys={r.sizes['keys']}  transcripts={r.sizes['transcripts']}  "
        f"rounds={r.sizes['rounds']}  support={supp}  mode={r.mode}",
        table(("metric", "kind", "lo", "hi"), _metric_rows(named)
              + [("simulator", "interval", r.simulator[0], r.simulator[1])]),
        table(("status", "relation", "lhs", "rhs"), _check_rows(checks)),
        table(("status", "bound", "lhs lo", "lhs hi", "rhs"), _bound_rows(bounds)),
    ])
    return doc, text, _verdict(checks, bounds)


def run_analyze(args) -> int:
    spec = load(args.path, args.mode, args.tol)
    tol = args.tol if args.tol is not None else spec.tol
    if isinstance(spec, KASpec):
        doc, text, code = analyze_ka(spec, tol, args.cap)
    elif args.command == "ka-analyze":
        raise UsageError("ka-analyze needs a keyagreement document")
    else:
        doc, text, code = analyze_cipher(spec, tol, args.seed)
    _emit(doc, text, args.format, args.output)
    return code


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}") from None


def _read_matrix(path: str, mode: str | None) -> list[list]:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, exc.lineno, exc.colno) from None
    if isinstance(raw, dict):
        raw = raw.get("matrix")
    if not (isinstance(raw, list) and raw and all(isinstance(r, list) for r in raw)):
        raise DocumentError("expected a list of rows or {\"matrix\": [...]}", path="$")
    m = mode or RATIONAL
    return [[to_num(v, m) for v in r] for r in raw]


def synthesize(args) -> CipherSpec:
    kind = args.kind
    if kind == "otp":
        return one_time_pad(args.n)
    if kind == "counterexample":
        return counterexample_scheme(args.n, _fraction(args.eps))[0]
    if kind == "from-matrix":
        if not args.matrix:
            raise UsageError("from-matrix needs --matrix FILE")
        return scheme_from_matrix(_read_matrix(args.matrix, args.mode), args.tol or DEFAULT_TOL)
    if kind == "dodis":
        return dodis_schemes(args.construction, args.n, _fraction(args.param))
    if kind == "random-ds":
        return scheme_from_matrix(random_doubly_stochastic(args.n, args.terms, args.seed))
    raise UsageError(f"unknown synthesis kind {kind!r}")


def run_synth(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    text = to_text(synthesize(args))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return OK


def run_fuzz(args) -> int:
    if args.trials < 0:
        raise UsageError("--trials must be non-negative")
    rep = run_campaign(args.kind, args.trials, args.seed, args.jobs, args.max_size, args.corrupt,
                       not args.no_oracle)
    doc = rep.as_dict()
    rows = [(t.index, t.seed, t.checks, t.skipped, ", ".join(t.violated) or "-") for t in rep.trials
            if t.violated or args.verbose]
    text = (f"campaign {rep.kind}  seed={rep.seed}  trials={doc['trials']}  checks={doc['checks']}  "
            f"skipped={doc['skipped_checks']}  violating trials={doc['violating_trials']}")
    if rows:
        text += "\n\n" + table(("trial", "seed", "checks", "skipped", "violated"), rows)
    _emit(doc, text, args.format, args.output)
    return VIOLATION if rep.violations else OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--tol", type=float, default=None, help="float-mode tolerance")
    common.add_argument("--mode", choices=(RATIONAL, FLOAT), default=None,
                        help="override the document's number mode")
    common.add_argument("--seed", type=int, default=1, help="64-bit seed")
    common.add_argument("-o", "--output", default=None, help="write to a file instead of stdout")

    p = argparse.ArgumentParser(prog="itsec", description="Security parameters of finite encryption "
                                "schemes and key agreement protocols.")
    sub = p.add_subparsers(dest="command", required=True)

    for verb in ("analyze", "ka-analyze"):
        a = sub.add_parser(verb, parents=[common], help="report metrics, relation checks and bounds")
        a.add_argument("path")
        a.add_argument("--cap", type=int, default=10**6, help="transcript state cap")

    s = sub.add_parser("synth", parents=[common], help="write a scheme document")
    s.add_argument("kind", choices=("otp", "counterexample", "from-matrix", "dodis", "random-ds"))
    s.add_argument("--n", type=int, default=4)
    s.add_argument("--eps", default="1/2")
    s.add_argument("--matrix", default=None, help="JSON file with a doubly stochastic matrix")
    s.add_argument("--construction", choices=("zero-eps", "zero-delta"), default="zero-eps")
    s.add_argument("--param", default="1/4", help="delta for zero-eps, eps for zero-delta")
    s.add_argument("--terms", type=int, default=3)

    f = sub.add_parser("fuzz", parents=[common], help="random relation and bound campaigns")
    f.add_argument("--kind", choices=("cipher", "keyagreement"), default="cipher")
    f.add_argument("--trials", type=int, default=1000)
    f.add_argument("--jobs", type=int, default=None, help="worker processes (default: all cores)")
    f.add_argument("--max-size", type=int, default=None)
    f.add_argument("--no-oracle", action="store_true", help="skip grid oracle containment checks")
    f.add_argument("--verbose", action="store_true", help="list every trial in text output")
    f.add_argument("--corrupt", default=None, help=argparse.SUPPRESS)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"analyze": run_analyze, "ka-analyze": run_analyze, "synth": run_synth, "fuzz": run_fuzz}
    try:
        return handlers[args.command](args)
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except (UsageError, SpecError, SynthError, KAError, ProbError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
