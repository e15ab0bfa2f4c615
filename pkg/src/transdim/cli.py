"""Command line front end.

Every subcommand prints one JSON document on stdout (sorted keys, compact
separators).  Exit status is 0 on success, 1 on domain errors and 2 on
syntax or usage errors.  Errors are reported as ``{"error": code, "detail": ...}``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

from . import coanalysis as co
from .codim_rank import MAX_SIZE, codim_lower_bound, jacobian_at, minor_rank, strongly_d_independent_at
from .constant_param import (
    ExactDerivative,
    LogDerivative,
    NoCreation,
    build_certificate,
    decide_creation,
    verify_certificate,
)
from .diffpoly import evaluate, order_vector, separant
from .dimension import dim_eval, discreteness_flag, member
from .errors import ParseError, ShapeMismatch, TransdimError, UsageError
from .exact_algebra import RatFunc, UniPoly, fmt_rational
from .parser import parse_descriptor, parse_diffpoly, parse_point, parse_transseries, parse_unipoly, split_top_level
from .transseries import compare, depth, dominant_monomial, height, lambda_member, omega_member, sign

SIGN_NAMES = {-1: "Negative", 0: "Zero", 1: "Positive"}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


# -- JSON shapes -------------------------------------------------------------


def _poly_json(p: UniPoly) -> str:
    return p.render("Y")


def _ratfunc_json(r: RatFunc) -> dict:
    return {"num": _poly_json(r.num), "den": _poly_json(r.den), "text": r.render("Y")}


def verdict_json(v) -> dict:
    out: dict[str, Any] = {"verdict": type(v).__name__, "field": v.field}
    if isinstance(v, ExactDerivative):
        out["R"] = _ratfunc_json(v.R)
    elif isinstance(v, LogDerivative):
        out["c"] = fmt_rational(v.c)
        out["factors"] = [{"factor": _poly_json(p), "exponent": n} for p, n in v.factors]
        out["R"] = _ratfunc_json(v.R)
    else:
        out["reason"] = v.reason
        if isinstance(v, NoCreation):
            out["caveat"] = v.caveat
    return out


def certificate_json(cert) -> dict:
    return {
        "case": cert.case,
        "R": _ratfunc_json(cert.R),
        "c": None if cert.c is None else fmt_rational(cert.c),
        "b_exponent": None if cert.b_exponent is None else cert.b_exponent.render(),
        "fiber_bound": cert.fiber_bound,
        "excluded_locus": cert.excluded_locus,
    }


# -- argument helpers --------------------------------------------------------


def _polys(texts: Sequence[str], arity: int) -> list:
    out = []
    for text in texts:
        out.extend(parse_diffpoly(part, arity) for part in split_top_level(text, ";"))
    return out


def _atom(v: Any) -> Any:
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise ShapeMismatch(f"atoms must be integers or strings, got {v!r}")
    return v


def _tuple(v: Any) -> tuple:
    if not isinstance(v, list):
        raise ShapeMismatch(f"expected a list, got {v!r}")
    return tuple(_atom(a) for a in v)


def _load_structure(path: str) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.pos) from None
    if not isinstance(doc, dict):
        raise ShapeMismatch("structure document must be a JSON object")
    try:
        M = [_atom(a) for a in doc["M"]]
        C = [_atom(a) for a in doc["C"]]
        n = doc.get("n", 1)
        S = [_tuple(p) for p in doc.get("S", [])]
    except KeyError as exc:
        raise ShapeMismatch(f"missing field {exc.args[0]!r}") from None
    except TypeError:
        raise ShapeMismatch("M, C and S must be lists") from None
    if len({type(a) for a in M}) > 1:
        raise ShapeMismatch("atoms of M must all be integers or all strings")
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ShapeMismatch("n must be a natural number")
    return {"struct": co.FiniteStructure.of(M, C), "n": n, "S": S, "doc": doc}


def _load_certificate(doc: dict) -> co.CoAnalysisCertificate:
    raw = doc.get("certificate")
    if not isinstance(raw, dict):
        raise ShapeMismatch("missing certificate object")
    e = raw.get("e")
    rels = raw.get("relations", [])
    arities = raw.get("arities", [])
    if not isinstance(e, int) or isinstance(e, bool):
        raise ShapeMismatch("certificate bound e must be an integer")
    if not isinstance(rels, list) or not all(isinstance(r, list) for r in rels):
        raise ShapeMismatch("relations must be a list of lists of tuples")
    if not isinstance(arities, list) or not all(isinstance(d, int) and not isinstance(d, bool) for d in arities):
        raise ShapeMismatch("arities must be a list of integers")
    return co.CoAnalysisCertificate(e, tuple(frozenset(_tuple(t) for t in r) for r in rels), tuple(arities))


def _natural(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {text!r}")
    return v


# -- subcommands -------------------------------------------------------------


def cmd_ts_eval(a) -> dict:
    f = parse_transseries(a.f)
    return {
        "value": f.render(),
        "sign": SIGN_NAMES[int(sign(f))],
        "dominant": None if f.is_zero() else dominant_monomial(f).render(),
        "depth": depth(f),
        "height": height(f),
    }


def cmd_ts_compare(a) -> dict:
    return {"sign": SIGN_NAMES[int(compare(parse_transseries(a.f), parse_transseries(a.g)))]}


def cmd_ts_lambda(a) -> dict:
    return {"member": lambda_member(parse_transseries(a.f))}


def cmd_ts_omega(a) -> dict:
    return {"member": omega_member(parse_transseries(a.f))}


def cmd_dp_eval(a) -> dict:
    point = parse_point(a.point)
    P = parse_diffpoly(a.P, len(point))
    return {"value": evaluate(P, point).render()}


def cmd_dp_separant(a) -> dict:
    return {"separant": separant(parse_diffpoly(a.P, 1)).render()}


def cmd_codim_rank(a) -> dict:
    point = parse_point(a.point)
    polys = _polys(a.P, len(point))
    orders = order_vector(polys)
    m = jacobian_at(polys, point, orders)
    return {"rank": minor_rank(m, a.max_size), "matrix": m.to_json(), "orders": orders}


def cmd_codim_strong_indep(a) -> dict:
    point = parse_point(a.point)
    polys = _polys(a.P, len(point))
    res = strongly_d_independent_at(polys, point, a.max_size)
    out = {"answer": res.answer, "witness_rank": res.witness_rank, "orders": list(res.orders)}
    if a.lower_bound:
        out["codim_lower_bound"] = codim_lower_bound(polys, point, a.max_size)
    return out


def cmd_dim_eval(a) -> dict:
    s = parse_descriptor(a.set)
    out = dim_eval(s).to_json()
    out["discrete"] = discreteness_flag(s).value
    if a.member is not None:
        out["member"] = member(s, parse_point(a.member))
    return out


def cmd_rosenlicht_decide(a) -> dict:
    return verdict_json(decide_creation(parse_unipoly(a.F), parse_unipoly(a.G)))


def cmd_rosenlicht_certify(a) -> dict:
    return certificate_json(build_certificate(parse_unipoly(a.F), parse_unipoly(a.G)))


def cmd_rosenlicht_verify(a) -> dict:
    F, G = parse_unipoly(a.F), parse_unipoly(a.G)
    texts = list(a.point or [])
    if a.points:
        try:
            lines = Path(a.points).read_text().splitlines()
        except OSError as exc:
            raise UsageError(f"cannot read {a.points}: {exc.strerror}") from None
        texts.extend(line for line in lines if line.strip() and not line.lstrip().startswith("#"))
    if not texts:
        raise UsageError("no points given (use --point or --points)")
    cert = build_certificate(F, G)
    reports = verify_certificate(F, G, cert, [parse_transseries(t) for t in texts])
    return {
        "certificate": certificate_json(cert),
        "reports": [{"point": r.point.render(), "status": r.status, "detail": r.detail} for r in reports],
        "ok": not any(r.status == "fail" for r in reports),
    }


def cmd_coan_check(a) -> dict:
    loaded = _load_structure(a.structure)
    cert = _load_certificate(loaded["doc"])
    ok = co.check_certificate(loaded["struct"], loaded["S"], loaded["n"], cert)
    return {"valid": ok, "steps": cert.steps}


def cmd_coan_decide(a) -> dict:
    loaded = _load_structure(a.structure)
    struct, S = loaded["struct"], loaded["S"]
    ok, fib = co.fiberable_bounded(struct, S, a.r, a.e, max_size=max(a.max_size, 16))
    return {
        "coanalyzable": co.coanalyzable_bounded(struct, S, a.r, a.e),
        "fiberable": ok,
        "witness": fib.to_json() if fib is not None else None,
    }


def cmd_coan_demo(a) -> dict:
    grid = tuple(int(v) for v in a.grid.split(",")) if a.grid else (-2, -1, 0, 1, 2)
    return co.tee_fiberability_demo(grid)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="transdim", description="Exact transseries and differential-algebra toolkit.")
    p.add_argument("--json", action="store_true", help="accepted for compatibility; output is always JSON")
    p.add_argument("--max-size", type=_natural, default=MAX_SIZE, help="cap on minor and subset enumeration")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(name: str, fn: Callable, help_text: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--max-size", type=_natural, default=argparse.SUPPRESS, help=argparse.SUPPRESS)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("ts-eval", cmd_ts_eval, "normalize a transseries")
    sp.add_argument("--f", required=True)
    sp = add("ts-compare", cmd_ts_compare, "sign of f - g")
    sp.add_argument("--f", required=True)
    sp.add_argument("--g", required=True)
    add("ts-lambda", cmd_ts_lambda, "membership in Lambda").add_argument("--f", required=True)
    add("ts-omega", cmd_ts_omega, "membership in Omega").add_argument("--f", required=True)
    sp = add("dp-eval", cmd_dp_eval, "evaluate a differential polynomial at a point")
    sp.add_argument("--P", required=True)
    sp.add_argument("--point", required=True)
    add("dp-separant", cmd_dp_separant, "separant of a one-variable polynomial").add_argument("--P", required=True)
    codim_cmds = (
        ("codim-rank", cmd_codim_rank, "rank of the matrix of top-order partials"),
        ("codim-strong-indep", cmd_codim_strong_indep, "strong d-independence at a point, optional codimension bound"),
    )
    for name, fn, text in codim_cmds:
        sp = add(name, fn, text)
        sp.add_argument("--P", action="append", required=True, help="polynomial (repeatable, or ';'-separated)")
        sp.add_argument("--point", required=True)
        if name == "codim-strong-indep":
            sp.add_argument("--lower-bound", action="store_true")
    sp = add("dim-eval", cmd_dim_eval, "dimension interval of a set descriptor")
    sp.add_argument("--set", required=True)
    sp.add_argument("--member")
    creation_cmds = (
        ("rosenlicht-decide", cmd_rosenlicht_decide, "constant creation for F(Y)Y' - G(Y)"),
        ("rosenlicht-certify", cmd_rosenlicht_certify, "parametrization certificate for F(Y)Y' - G(Y)"),
    )
    for name, fn, text in creation_cmds:
        sp = add(name, fn, text)
        sp.add_argument("--F", required=True)
        sp.add_argument("--G", required=True)
    sp = add("rosenlicht-verify", cmd_rosenlicht_verify, "check a certificate at points")
    sp.add_argument("--F", required=True)
    sp.add_argument("--G", required=True)
    sp.add_argument("--points", help="file with one transseries per line")
    sp.add_argument("--point", action="append")
    add("coan-check", cmd_coan_check, "verify a co-analysis certificate").add_argument("--structure", required=True)
    sp = add("coan-decide", cmd_coan_decide, "bounded co-analyzability and fiberability")
    sp.add_argument("--structure", required=True)
    sp.add_argument("--r", type=_natural, required=True)
    sp.add_argument("--e", type=_natural, required=True)
    add("coan-demo", cmd_coan_demo, "fibration of the zero set of YY'' - Y'^2").add_argument("--grid")
    return p


def run(argv: Sequence[str]) -> tuple[int, str]:
    """Execute one invocation; returns (exit status, JSON text)."""
    try:
        args = build_parser().parse_args(list(argv))
        if args.command is None:
            raise UsageError("missing subcommand")
        return 0, dumps(args.fn(args))
    except TransdimError as exc:
        return exc.exit_status, dumps(_error_doc(exc))
    except RecursionError:
        return 1, dumps({"error": "RecursionLimit", "detail": "input nests too deeply"})
    except (ValueError, ZeroDivisionError) as exc:
        # e.g. a malformed --grid for coan-demo
        return 2, dumps({"error": "UsageError", "detail": str(exc)})
    except Exception as exc:  # noqa: BLE001 - last line of defence, reported not raised
        return 3, dumps({"error": "InternalError", "detail": f"{type(exc).__name__}: {exc}"})


def _error_doc(exc: TransdimError) -> dict:
    doc: dict[str, Any] = {"error": exc.code, "detail": exc.detail}
    position = getattr(exc, "position", None)
    if position is not None:
        doc["position"] = position
    return doc


def main(argv: Sequence[str] | None = None) -> int:
    status, text = run(sys.argv[1:] if argv is None else argv)
    print(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
