"""Command-line interface: ``lbz <command> [options]``.

Every command supports ``--format text|json|csv``.  JSON output carries a
top-level ``"schema": 1`` and is rendered with sorted keys so repeated runs
are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence

from . import heisenberg, symfunc, term, v3basis, variety
from .errors import LbzError, ParseError, ResourceBoundError

HARD_MAX_N = 7
DEFAULT_MAX_N = 6


def _frac(c: Fraction) -> str:
    return str(Fraction(c))


def _dump_json(payload: dict) -> str:
    return json.dumps({"schema": 1, **payload}, indent=2, sort_keys=True, ensure_ascii=True)


def _dump_csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue().rstrip("\n")


def _lambda_str(lam) -> str:
    return "(" + ",".join(str(p) for p in lam) + ")"


def _variety(args) -> variety.VarietySpec:
    if getattr(args, "variety_file", None):
        path = Path(args.variety_file)
        if not path.is_file():
            raise ParseError(f"identity file {path} not found")
        return variety.load_variety(path)
    return variety.resolve_variety(args.variety)


def _max_n(args) -> int:
    if args.max_n > HARD_MAX_N:
        raise ResourceBoundError(f"--max-n {args.max_n} exceeds the hard cap {HARD_MAX_N}")
    if args.max_n < 1:
        raise ResourceBoundError("--max-n must be at least 1")
    return args.max_n


def _check_n(n: int, args) -> int:
    bound = _max_n(args)
    if n < 1:
        raise ParseError("--n must be at least 1")
    if n > bound:
        raise ResourceBoundError(f"n={n} exceeds --max-n {bound}")
    return n


# --------------------------------------------------------------------------
# commands


def cmd_reduce(args) -> str:
    t = term.parse_term(args.term)
    result = term.leibniz_reduce(t, args.strategy)
    if args.format == "json":
        return _dump_json({
            "input": term.format_term(t),
            "result": [{"word": term.format_word(w), "coeff": _frac(c)} for w, c in result],
        })
    if args.format == "csv":
        return _dump_csv(["word", "coeff"], [(term.format_word(w), _frac(c)) for w, c in result])
    return str(result)


def cmd_dim(args) -> str:
    v = _variety(args)
    n = _check_n(args.n, args)
    d = variety.multilinear_dimension(v, n, args.max_n)
    if args.format == "json":
        return _dump_json({"variety": v.name, "n": n, "dimension": d})
    if args.format == "csv":
        return _dump_csv(["variety", "n", "dimension"], [(v.name, n, d)])
    return str(d)


def cmd_basis(args) -> str:
    n = _check_n(args.n, args)
    thetas = v3basis.enumerate_theta(n)
    if args.format == "json":
        return _dump_json({"n": n, "count": len(thetas), "basis": [str(t) for t in thetas]})
    if args.format == "csv":
        return _dump_csv(["index", "theta", "m"], [(k, str(t), t.m) for k, t in enumerate(thetas)])
    return "\n".join([str(t) for t in thetas] + [f"count: {len(thetas)}"])


def cmd_theta_reduce(args) -> str:
    e = term.parse_lincomb(args.term)
    n = args.n if args.n is not None else len(e.variables())
    _check_n(n, args)
    coords = v3basis.reduce_to_theta(e, n)
    if args.format == "json":
        return _dump_json({"n": n, "coordinates": [{"theta": str(t), "coeff": _frac(c)} for t, c in coords.items()]})
    if args.format == "csv":
        return _dump_csv(["theta", "coeff"], [(str(t), _frac(c)) for t, c in coords.items()])
    if not coords:
        return "0"
    return "\n".join(f"{_frac(c)} * {t}" for t, c in coords.items())


def cmd_check(args) -> str:
    v = _variety(args)
    bound = _max_n(args)
    if args.identity_file:
        _, idents = variety.load_identities(args.identity_file)
    elif args.identity:
        idents = [variety.identity(args.identity, "f1")]
    else:
        raise ParseError("check needs --identity or --identity-file")
    results = [(i.name, variety.is_identity(v, i, bound)) for i in idents]
    if args.format == "json":
        return _dump_json({"variety": v.name, "results": [{"identity": n, "holds": ok} for n, ok in results],
                           "all_hold": all(ok for _, ok in results)})
    if args.format == "csv":
        return _dump_csv(["identity", "holds"], [(n, str(ok).lower()) for n, ok in results])
    return "\n".join(f"{n}: {'holds' if ok else 'does not hold'}" for n, ok in results)


def _decomposition_rows(v, n: int, bound: int):
    d = symfunc.decompose(symfunc.module_character(v, n, bound))
    dim = variety.multilinear_dimension(v, n, bound)
    if sum(m * symfunc.dimension(lam) for lam, m in d.items()) != dim:
        from .errors import InvariantViolation

        raise InvariantViolation(f"character degree does not match dim P_{n} = {dim}")
    return d


def cmd_colength(args) -> str:
    v = _variety(args)
    bound = _max_n(args)
    if not 1 <= args.nmax <= bound:
        raise ResourceBoundError(f"--nmax {args.nmax} must lie in 1..{bound}")
    table = [(n, _decomposition_rows(v, n, bound)) for n in range(1, args.nmax + 1)]
    if args.format == "json":
        return _dump_json({"variety": v.name, "profile": [
            {"n": n, "colength": symfunc.colength(d),
             "decomposition": [{"lambda": list(lam), "multiplicity": m} for lam, m in d.items() if m]}
            for n, d in table]})
    if args.format == "csv":
        rows = [(n, _lambda_str(lam), m, symfunc.colength(d)) for n, d in table for lam, m in d.items() if m]
        return _dump_csv(["n", "lambda", "m_lambda", "l_n"], rows)
    return "\n".join(f"l_{n} = {symfunc.colength(d)}" for n, d in table)


def cmd_character(args) -> str:
    v = _variety(args)
    n = _check_n(args.n, args)
    d = _decomposition_rows(v, n, args.max_n)
    ln = symfunc.colength(d)
    if args.format == "json":
        return _dump_json({"variety": v.name, "n": n, "colength": ln,
                           "decomposition": [{"lambda": list(lam), "multiplicity": m} for lam, m in d.items()]})
    if args.format == "csv":
        return _dump_csv(["n", "lambda", "m_lambda", "l_n"], [(n, _lambda_str(lam), m, ln) for lam, m in d.items()])
    lines = [f"m_{_lambda_str(lam)} = {m}" for lam, m in d.items() if m]
    return "\n".join(lines + [f"l_{n} = {ln}"])


def cmd_verify_theorem2(args) -> str:
    n = _check_n(args.n, args)
    fdeg = args.fdeg if args.fdeg is not None else n
    if fdeg < n:
        raise ParseError(f"--fdeg must be at least n={n}")
    report = v3basis.verify_theorem2(n, samples=args.samples, seed=args.seed, fdeg=fdeg, max_n=args.max_n)
    args._exit = 0 if report.passed else 1
    if args.format == "json":
        return _dump_json({"report": report.as_dict(), "fdeg": fdeg, "seed": args.seed})
    if args.format == "csv":
        d = report.as_dict()
        return _dump_csv(list(d), [[str(x).lower() if isinstance(x, bool) else x for x in d.values()]])
    return f"{report.summary()}\nruntime: {report.seconds:.2f} s"


def _parse_alphas(text: str, k: int) -> List[Fraction]:
    try:
        alphas = [Fraction(a.strip()) for a in text.split(",") if a.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad --alphas: {exc}") from None
    if len(alphas) != k:
        raise ParseError(f"--alphas needs {k} values, got {len(alphas)}")
    return alphas


def cmd_condition3(args) -> str:
    v = _variety(args)
    bound = _max_n(args)
    k, m = args.k, args.m
    if not 1 <= k <= m:
        raise ParseError(f"need 1 <= k <= m, got k={k}, m={m}")
    if m + 2 > bound:
        raise ResourceBoundError(f"degree m+2={m + 2} exceeds --max-n {bound}")
    payload = {"variety": v.name, "k": k, "m": m}
    if args.alphas is not None:
        alphas = _parse_alphas(args.alphas, k)
        holds = variety.check_condition_3(v, k, m, alphas, bound)
        payload.update(mode="check", alphas=[_frac(a) for a in alphas], holds=holds)
        text = f"condition holds for alphas {', '.join(map(_frac, alphas))}: {str(holds).lower()}"
    else:
        sol = variety.solve_condition_3(v, k, m, bound)
        payload.update(mode="solve", solvable=sol is not None,
                       alphas=None if sol is None else [_frac(a) for a in sol])
        text = "no solution" if sol is None else "solution: alphas = " + ", ".join(map(_frac, sol))
    if args.format == "json":
        return _dump_json(payload)
    if args.format == "csv":
        return _dump_csv(list(payload), [[_csv_cell(x) for x in payload.values()]])
    return text


def _csv_cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, list):
        return ";".join(str(i) for i in x)
    return str(x)


def _load_assignment(path: str):
    p = Path(path)
    if not p.is_file():
        raise ParseError(f"assignment file {p} not found")
    try:
        raw = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{p}: invalid JSON ({exc})") from None
    if not isinstance(raw, dict):
        raise ParseError(f"{p}: expected a JSON object mapping generators to elements")
    out = {}
    for key, value in raw.items():
        name = str(key).strip()
        digits = name[1:] if name[:1] in ("x", "X") else name
        if not digits.isdigit() or int(digits) < 1:
            raise ParseError(f"bad generator name {key!r} in {p}")
        out[int(digits)] = heisenberg.parse_helement(str(value))
    return out


def cmd_eval(args) -> str:
    e = term.parse_lincomb(args.term)
    value = heisenberg.evaluate(e, _load_assignment(args.assignment))
    text = heisenberg.format_helement(value)
    if args.format == "json":
        return _dump_json({"input": args.term, "value": text,
                           "coordinates": {"a": _frac(value.ca), "b": _frac(value.cb), "c": _frac(value.cc),
                                           "poly": [_frac(c) for c in value.f]}})
    if args.format == "csv":
        return _dump_csv(["input", "value"], [(args.term, text)])
    return text


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--max-n", type=int, default=DEFAULT_MAX_N,
                        help=f"largest degree allowed (default {DEFAULT_MAX_N}, hard cap {HARD_MAX_N})")

    var = argparse.ArgumentParser(add_help=False)
    group = var.add_mutually_exclusive_group()
    group.add_argument("--variety", default="free", help="built-in name or identity file path")
    group.add_argument("--variety-file", help="JSON identity file")

    parser = argparse.ArgumentParser(prog="lbz", description="Multilinear computations in Leibniz varieties.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", parents=[common], help="left-normed form of a term")
    p.add_argument("term")
    p.add_argument("--strategy", choices=("bottom-up", "rewrite"), default="bottom-up")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("dim", parents=[common, var], help="dim P_n(V)")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("basis", parents=[common], help="theta basis of P_n(V3tilde)")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("theta-reduce", parents=[common], help="theta coordinates of a multilinear element")
    p.add_argument("term")
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_theta_reduce)

    p = sub.add_parser("check", parents=[common, var], help="is an identity satisfied by V")
    p.add_argument("--identity-file")
    p.add_argument("--identity", help="identity as a combination of terms")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("colength", parents=[common, var], help="colength profile l_1..l_nmax")
    p.add_argument("--nmax", type=int, required=True)
    p.set_defaults(func=cmd_colength)

    p = sub.add_parser("character", parents=[common, var], help="S_n decomposition of P_n(V)")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_character)

    p = sub.add_parser("verify-theorem2", parents=[common], help="span, independence and normal-form checks")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--fdeg", type=int)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify_theorem2)

    p = sub.add_parser("condition3", parents=[common, var], help="check or solve the xY^kzY^(m-k) condition")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--alphas", help="comma separated rationals; omit to solve for them")
    p.set_defaults(func=cmd_condition3)

    p = sub.add_parser("eval", parents=[common], help="evaluate in H~")
    p.add_argument("term")
    p.add_argument("--assignment", required=True, help="JSON map generator -> H~ element text")
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args._exit = 0
    try:
        out = args.func(args)
    except LbzError as exc:
        print(f"lbz: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"lbz: error: {exc}", file=sys.stderr)
        return 2
    print(out)
    return args._exit


if __name__ == "__main__":
    sys.exit(main())
