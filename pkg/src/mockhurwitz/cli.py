"""Command-line front end.

Every command prints one JSON document (or CSV with ``--format csv``) that
contains at least ``command``, ``params`` and ``status``.  Exit codes: 0 on
success, 1 when a verification finds a mismatch, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, TextIO

from .arith import Cyc8
from .classnumbers import gen_hurwitz, hurwitz
from .kloosterman import (
    c_frak,
    kloosterman_numeric,
    kz_factored,
    kz_tail_bound,
    kz_truncated_oracle,
    local_density_A,
    verify_kohnen,
    verify_local_product,
    verify_zeta_factorization,
)
from .qseries import (
    Q5,
    Q7,
    SUM_OF_SQUARES,
    TernaryForm,
    hurwitz_series,
    ternary_theta,
    theta_series,
    verify_example,
    verify_shadow,
    verify_theorem_1_1,
    verify_theta_cubed,
)
from .report import VerificationReport, jsonable
from .special import alpha, alpha_via_gamma

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2

FORMS = {"Q5": Q5, "Q7": Q7, "squares": SUM_OF_SQUARES}


@dataclass
class CommandResult:
    exit_code: int
    payload: dict
    text: str = ""


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so :func:`run` stays callable."""

    def error(self, message):
        raise _UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


# ---------------------------------------------------------------------------
# rendering

def _cyc8_json(x: Cyc8) -> dict:
    if x.is_gaussian():
        re, im = x.to_gaussian()
        return {"re": str(re), "im": str(im)}
    return {"zeta8_basis": [str(c) for c in x.c]}


def _flatten(prefix: str, obj, out: list) -> None:
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flatten(f"{prefix}.{k}" if prefix else str(k), obj[k], out)
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}.{i}", v, out)
    else:
        out.append((prefix, "" if obj is None else obj))


def render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=True) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if "columns" in payload and "rows" in payload:
        w.writerow(payload["columns"])
        w.writerows(payload["rows"])
    else:
        w.writerow(["key", "value"])
        rows: list = []
        _flatten("", payload, rows)
        w.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# commands

def _fraction(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {s!r}")


def _cmd_hurwitz(a) -> dict:
    return {"value": hurwitz(a.n)}


def _cmd_gen_hurwitz(a) -> dict:
    return {"value": gen_hurwitz(ell=a.ell, N=a.N, n=a.n)}


def _series_payload(series) -> dict:
    out = series.to_json_dict()
    out["columns"] = ["n", "numerator", "denominator"]
    out["rows"] = [list(r) for r in series.to_csv_rows()]
    return out


def _parse_form(a) -> TernaryForm:
    if a.gram:
        vals = [int(x) for x in a.gram.split(",")]
        if len(vals) != 9:
            raise ValueError("--gram needs 9 comma-separated integers")
        return TernaryForm(tuple(tuple(vals[3 * i:3 * i + 3]) for i in range(3)))
    return FORMS[a.form]


def _cmd_series(a) -> dict:
    if a.kind == "theta":
        s = theta_series(a.prec)
    elif a.kind == "hurwitz":
        if a.N is None:
            raise ValueError("series --kind hurwitz needs --N (and optionally --ell)")
        s = hurwitz_series(a.ell if a.ell is not None else a.N, a.N, a.prec)
    else:
        s = ternary_theta(_parse_form(a), a.prec)
    return _series_payload(s)


def _cmd_kloosterman(a) -> dict:
    return {"value": kloosterman_numeric(a.k, a.m, a.n, a.c)}


def _cmd_local_A(a) -> dict:
    return {"value": _cyc8_json(local_density_A(a.p, a.n))}


def _cmd_cfrak(a) -> dict:
    val = c_frak(a.n, a.N)
    out = {"tag": val.tag, "approx": val.approx}
    if val.exact is not None:
        out["exact"] = val.exact.to_dict()
    return out


def _cmd_zeta_check(a) -> dict:
    exact = kz_factored(a.n, a.N, a.s)
    approx = kz_truncated_oracle(a.n, a.N, a.s, a.cutoff)
    rel = abs(exact - approx) / abs(exact)
    return {
        "factored": exact,
        "truncated": approx,
        "rel_error": rel,
        "tail_bound": kz_tail_bound(a.N, a.s, a.cutoff),
        "tolerance": a.tol,
        "status": "ok" if rel < a.tol else "mismatch",
    }


def _cmd_alpha(a) -> dict:
    x, y = alpha(a.y), alpha_via_gamma(a.y)
    return {"alpha": x, "alpha_via_gamma": y, "difference": abs(x - y)}


def _levels(a, default) -> list[int]:
    return a.N if a.N else list(default)


def _run_verify(a) -> list[VerificationReport]:
    name = a.name
    if name == "thm11":
        return [verify_theorem_1_1(N, a.prec or 201) for N in _levels(a, (5, 7, 15))]
    if name == "example":
        return [verify_example(N, a.prec or 101) for N in _levels(a, (5, 7))]
    if name == "shadow":
        return [verify_shadow(N, a.prec or 201) for N in _levels(a, (1, 5, 7, 15))]
    if name == "theta3":
        return [verify_theta_cubed(a.prec or 501)]
    if name == "lemma52":
        return [verify_local_product(tuple(_levels(a, (1, 5, 7, 15))), a.prec or 201)]
    if name == "kohnen":
        return [verify_kohnen(tuple(_levels(a, (1, 5, 7, 15))), a.cmax or 25, a.mmax or 12, a.tol or 1e-9)]
    if name == "prop33":
        return [verify_zeta_factorization(s_param=a.s or 2.0, cutoff=a.cutoff or 10_000, tol=a.tol or 1e-2)]
    raise ValueError(f"unknown verification {name!r}")


def _cmd_verify(a) -> dict:
    reports = _run_verify(a)
    ok = all(reports)
    return {
        "status": "ok" if ok else "mismatch",
        "reports": [r.to_dict() for r in reports],
    }


TABLE_KINDS = ("hurwitz", "gen-hurwitz", "cfrak", "theta")


def emit_table(kind: str, start: int, stop: int, params: dict | None = None) -> CommandResult:
    """Coefficient table for start <= n <= stop as a payload with rows."""
    params = dict(params or {})
    base = {"command": "table", "params": {"kind": kind, "start": start, "stop": stop, **params}}
    if kind not in TABLE_KINDS:
        return CommandResult(EXIT_USAGE, {**base, "status": "usage-error",
                                          "error": f"unknown table kind {kind!r}"})
    if start > stop or (kind != "cfrak" and start < 0):
        return CommandResult(EXIT_USAGE, {**base, "status": "usage-error",
                                          "error": f"invalid range {start}..{stop}"})
    rows: list[list] = []
    if kind == "hurwitz":
        rows = [[n, str(hurwitz(n))] for n in range(start, stop + 1)]
        columns = ["n", "value"]
    elif kind == "gen-hurwitz":
        N = params.get("N")
        ell = params.get("ell") or N
        if N is None:
            return CommandResult(EXIT_USAGE, {**base, "status": "usage-error",
                                              "error": "gen-hurwitz table needs N"})
        rows = [[n, str(gen_hurwitz(ell=ell, N=N, n=n))] for n in range(start, stop + 1)]
        columns = ["n", "value"]
    elif kind == "theta":
        th = theta_series(stop + 1)
        rows = [[n, int(th[n])] for n in range(start, stop + 1)]
        columns = ["n", "value"]
    else:
        N = params.get("N", 1)
        columns = ["n", "tag", "approx_re", "approx_im", "exact"]
        for n in range(start, stop + 1):
            if n % 4 not in (0, 1):
                continue
            val = c_frak(n, N)
            rows.append([n, val.tag, jsonable(val.approx.real), jsonable(val.approx.imag),
                         val.exact.to_dict() if val.exact is not None else None])
    return CommandResult(EXIT_OK, {**base, "status": "ok", "columns": columns, "rows": rows})


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mockhurwitz", description="Generalized Hurwitz class numbers and related checks.")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    # also accepted after the subcommand
    fmt = _Parser(add_help=False)
    fmt.add_argument("--format", choices=("json", "csv"), default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[fmt], **kw)

    sub.add_parser = add_parser
    sub.required = True

    c = sub.add_parser("hurwitz", help="classical Hurwitz class number H(n)")
    c.add_argument("--n", type=int, required=True)
    c.set_defaults(func=_cmd_hurwitz)

    c = sub.add_parser("gen-hurwitz", help="generalized class number H_{ell,N}(n)")
    c.add_argument("--ell", type=int, required=True)
    c.add_argument("--N", type=int, required=True)
    c.add_argument("--n", type=int, required=True)
    c.set_defaults(func=_cmd_gen_hurwitz)

    c = sub.add_parser("series", help="q-series coefficients")
    c.add_argument("--kind", choices=("theta", "hurwitz", "ternary"), required=True)
    c.add_argument("--prec", type=int, default=20)
    c.add_argument("--ell", type=int)
    c.add_argument("--N", type=int)
    c.add_argument("--form", choices=sorted(FORMS), default="Q5")
    c.add_argument("--gram", help="nine comma-separated Gram matrix entries")
    c.set_defaults(func=_cmd_series)

    c = sub.add_parser("kloosterman", help="half-integral weight Kloosterman sum K_k(m, n; c)")
    c.add_argument("--k", type=_fraction, required=True)
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--c", type=int, required=True)
    c.set_defaults(func=_cmd_kloosterman)

    c = sub.add_parser("local-A", help="local density A(p, n)")
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--n", type=int, required=True)
    c.set_defaults(func=_cmd_local_A)

    c = sub.add_parser("cfrak", help="constant term c(n) of the Kloosterman zeta function")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--N", type=int, default=1)
    c.set_defaults(func=_cmd_cfrak)

    c = sub.add_parser("zeta-check", help="factored Kloosterman zeta vs truncated double sum")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--N", type=int, default=1)
    c.add_argument("--s", type=float, default=2.0)
    c.add_argument("--cutoff", type=int, default=10_000)
    c.add_argument("--tol", type=float, default=1e-2)
    c.set_defaults(func=_cmd_zeta_check)

    c = sub.add_parser("alpha", help="alpha(y) by two quadratures")
    c.add_argument("--y", type=float, required=True)
    c.set_defaults(func=_cmd_alpha)

    c = sub.add_parser("verify", help="run an identity check")
    c.add_argument("name", choices=("thm11", "example", "shadow", "theta3", "lemma52", "kohnen", "prop33"))
    c.add_argument("--N", type=int, nargs="+")
    c.add_argument("--prec", type=int)
    c.add_argument("--tol", type=float)
    c.add_argument("--cmax", type=int, help="kohnen: largest odd c (default 25)")
    c.add_argument("--mmax", type=int, help="kohnen: largest |m|, |n| (default 12)")
    c.add_argument("--s", type=float, help="prop33: point s (default 2)")
    c.add_argument("--cutoff", type=int, help="prop33: cutoff C (default 10000)")
    c.set_defaults(func=_cmd_verify)

    c = sub.add_parser("table", help="coefficient table")
    c.add_argument("--kind", choices=TABLE_KINDS, required=True)
    c.add_argument("--start", type=int, default=0)
    c.add_argument("--stop", type=int, required=True)
    c.add_argument("--ell", type=int)
    c.add_argument("--N", type=int)
    c.set_defaults(func=None)
    return p


_SKIP = {"func", "format", "command"}


def _params(ns: argparse.Namespace) -> dict:
    return {k: v for k, v in sorted(vars(ns).items()) if k not in _SKIP and v is not None}


def run(argv: Sequence[str], stdout: TextIO | None = None, stderr: TextIO | None = None) -> CommandResult:
    """Parse ``argv``, run the command, write the rendered payload to ``stdout``."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    fmt = "json"
    try:
        ns = parser.parse_args(list(argv))
    except _UsageError as exc:
        print(exc, file=stderr)
        return CommandResult(EXIT_USAGE, {"command": None, "params": {}, "status": "usage-error",
                                          "error": str(exc).splitlines()[-1]})
    fmt = ns.format
    params = _params(ns)
    try:
        if ns.command == "table":
            extra = {k: params[k] for k in ("ell", "N") if k in params}
            result = emit_table(ns.kind, ns.start, ns.stop, extra)
            if result.exit_code == EXIT_USAGE:
                print(f"mockhurwitz table: error: {result.payload['error']}", file=stderr)
        else:
            body = ns.func(ns)
            status = body.pop("status", "ok")
            code = EXIT_OK if status == "ok" else EXIT_MISMATCH
            result = CommandResult(code, {"command": ns.command, "params": params,
                                          "status": status, **body})
    except (ValueError, ArithmeticError) as exc:
        print(f"mockhurwitz {ns.command}: error: {exc}", file=stderr)
        result = CommandResult(EXIT_USAGE, {"command": ns.command, "params": params,
                                            "status": "error", "error": str(exc)})
    result.payload = jsonable(result.payload)
    result.text = render(result.payload, fmt)
    stdout.write(result.text)
    return result


def main(argv: Sequence[str] | None = None) -> int:
    return run(sys.argv[1:] if argv is None else argv).exit_code


if __name__ == "__main__":
    sys.exit(main())
