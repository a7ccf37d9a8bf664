"""
``ipw``: command-line front end.

Exit codes: 0 success, 1 unreadable or malformed input, 2 bivector is not
Poisson, 3 S is not a Poisson submanifold, 4 internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import sys
from itertools import combinations

from .cohomology import InconsistencyError, exact_sequence_report, theorem1_check
from .infinitesimal import (AffineElement, NotPoissonSubmanifold, affine_bracket,
                            check_poisson_submanifold, extract, verify_pt)
from .multivector import NotPoissonError
from .polyring import ExponentOverflow, ParseError
from .problem import ProblemError, load_problem

EXIT_OK, EXIT_PARSE, EXIT_NOT_POISSON, EXIT_NOT_SUBMANIFOLD, EXIT_INTERNAL = range(5)


class CommandFailure(Exception):
    def __init__(self, code, kind, message, **details):
        super().__init__(message)
        self.code = code
        self.kind = kind
        self.details = details


# ------------------------------------------------------------ serialization

def _nonzero(p):
    return None if p.is_zero() else str(p)


def data_dict(data):
    ctx, m, q = data.ctx, data.m, data.q
    base, fib = ctx.names[:m], ctx.names[m:]
    psi = {f"{base[i]},{base[j]}": str(p) for (i, j), p in sorted(data.psi.items())}

    def block(pairs, coeffs):
        out = {}
        for label, row in zip(pairs, coeffs):
            entry = {fib[b]: str(p) for b, p in enumerate(row) if p}
            if entry:
                out[label] = entry
        return out

    ab = list(combinations(range(q), 2))
    c = block([f"{fib[a]},{fib[b]}" for a, b in ab], [data.c[a][b] for a, b in ab])
    ia = [(i, a) for i in range(m) for a in range(q)]
    gamma = block([f"{base[i]},{fib[a]}" for i, a in ia], [data.gamma[i][a] for i, a in ia])
    ij = list(combinations(range(m), 2))
    kappa = block([f"{base[i]},{base[j]}" for i, j in ij], [data.kappa[i][j] for i, j in ij])
    return {"psi": psi, "c": c, "gamma": gamma, "kappa": kappa}


def _residual_text(res):
    out = {}
    for key, val in res.items():
        if isinstance(val, tuple):
            val = [str(p) for p in val]
        else:
            val = str(val)
        out[",".join(str(k) for k in key)] = val
    return out


def pt_dict(report):
    out = {"pt1": report.pt1, "pt2": report.pt2, "pt3": report.pt3,
           "structure": report.structure}
    if report.residuals:
        out["residuals"] = {name: _residual_text(res) for name, res in report.residuals.items()}
    return out


def _empty_report(problem):
    return {"input_echo": problem.echo(), "data": None, "pt": None,
            "bracket": None, "cohomology": None, "verdict": None}


# ---------------------------------------------------------------- pipeline

def _load(path):
    try:
        return load_problem(path)
    except OSError as exc:
        raise CommandFailure(EXIT_PARSE, "io", str(exc), file=str(path)) from None
    except ParseError as exc:
        raise CommandFailure(EXIT_PARSE, "parse", str(exc), position=exc.position,
                             component=getattr(exc, "component", None)) from None
    except (ProblemError, ExponentOverflow) as exc:
        raise CommandFailure(EXIT_PARSE, "parse", str(exc)) from None


def _validated(problem):
    try:
        ok, offending = check_poisson_submanifold(problem.pi, problem.ctx)
    except NotPoissonError as exc:
        raise CommandFailure(EXIT_NOT_POISSON, "not_poisson", str(exc),
                             residual=str(exc.residual)) from None
    if not ok:
        raise CommandFailure(EXIT_NOT_SUBMANIFOLD, "not_poisson_submanifold",
                             "S is not a Poisson submanifold: components with a normal "
                             "index do not vanish on S",
                             offending=[f"{a},{b}" for a, b in offending])
    return extract(problem.pi, problem.ctx)


def _verified(problem):
    data = _validated(problem)
    pt = verify_pt(data)
    if not pt.ok:
        raise CommandFailure(EXIT_INTERNAL, "internal", "compatibility relations fail",
                             pt=pt_dict(pt))
    return data, pt


def cmd_validate(problem, args):
    _validated(problem)
    out = _empty_report(problem)
    out["status"] = "ok"
    return out


def cmd_extract(problem, args):
    data = _validated(problem)
    out = _empty_report(problem)
    out["data"] = data_dict(data)
    return out


def cmd_verify_pt(problem, args):
    data, pt = _verified(problem)
    out = _empty_report(problem)
    out["data"] = data_dict(data)
    out["pt"] = pt_dict(pt)
    return out


def cmd_bracket(problem, args):
    data, pt = _verified(problem)
    try:
        u = AffineElement.parse(args.u, problem.ctx)
        v = AffineElement.parse(args.v, problem.ctx)
    except ParseError as exc:
        raise CommandFailure(EXIT_PARSE, "parse", str(exc), position=exc.position) from None
    except ValueError as exc:
        raise CommandFailure(EXIT_PARSE, "parse", str(exc)) from None
    out = _empty_report(problem)
    out["data"] = data_dict(data)
    out["pt"] = pt_dict(pt)
    out["bracket"] = {"u": str(u), "v": str(v), "result": str(affine_bracket(data, u, v))}
    return out


def _max_weight(problem, args):
    w = problem.w_max if args.max_weight is None else args.max_weight
    if w < 0:
        raise CommandFailure(EXIT_PARSE, "usage", "--max-weight must be nonnegative")
    return w


def cmd_cohomology(problem, args):
    data, pt = _verified(problem)
    report = exact_sequence_report(data, _max_weight(problem, args))
    out = _empty_report(problem)
    out["data"] = data_dict(data)
    out["pt"] = pt_dict(pt)
    out["cohomology"] = report.as_dict()
    return out


def cmd_theorem1(problem, args):
    data, pt = _verified(problem)
    w = _max_weight(problem, args)
    report = exact_sequence_report(data, w)
    verdict = theorem1_check(data, w)
    out = _empty_report(problem)
    out["data"] = data_dict(data)
    out["pt"] = pt_dict(pt)
    out["cohomology"] = report.as_dict()
    out["verdict"] = verdict.as_dict()
    return out


COMMANDS = {
    "validate": cmd_validate,
    "extract": cmd_extract,
    "verify-pt": cmd_verify_pt,
    "bracket": cmd_bracket,
    "cohomology": cmd_cohomology,
    "theorem1": cmd_theorem1,
}


# ------------------------------------------------------------------ output

def _text_lines(out):
    lines = []
    echo = out["input_echo"]
    if echo:
        lines.append(f"coordinates: {' '.join(echo['coordinates'])}")
        lines.append(f"normal: {' '.join(echo['normal']) or '(none)'}")
    if out.get("status"):
        lines.append(f"status: {out['status']}")
    if out.get("data"):
        for name in ("psi", "c", "gamma", "kappa"):
            block = out["data"][name]
            if not block:
                lines.append(f"{name}: 0")
            for key, val in block.items():
                if isinstance(val, dict):
                    val = ", ".join(f"{k}: {v}" for k, v in val.items())
                lines.append(f"{name}[{key}] = {val}")
    if out.get("pt"):
        pt = out["pt"]
        lines.append("PT1 {} / PT2 {} / PT3 {} / structure {}".format(
            *("ok" if pt[k] else "FAIL" for k in ("pt1", "pt2", "pt3", "structure"))))
    if out.get("bracket"):
        b = out["bracket"]
        lines.append(f"{{{b['u']}, {b['v']}}} = {b['result']}")
    if out.get("cohomology"):
        coh = out["cohomology"]
        lines.append(f"fiber weight {coh['fiber_weight']}, weight shift "
                     f"{coh['weight_shift']}{' (truncated)' if coh['truncated'] else ''}")
        lines.append("weight  center  H1(S)  Der/Inn  H1(dD)  M/(C+Inn)  H1(P)  lemma3  lemma4")
        for w, row in coh["per_weight"].items():
            lines.append("{:>6}  {:>6}  {:>5}  {:>7}  {:>6}  {:>9}  {:>5}  {:>6}  {:>6}".format(
                w, row["center"], row["poisson_h1"]["quotient"],
                row["linear_derivations_mod_inner"]["quotient"],
                row["partialD_h1"]["quotient"], row["m_space"]["M_mod_C_Inn"],
                row["h1_direct"]["quotient"], str(row["lemma3_additivity"]),
                str(row["lemma4_bound"])))
    if out.get("verdict"):
        v = out["verdict"]
        for k, ok in v["conditions"].items():
            lines.append(f"condition {k}: {ok}")
        lines.append(f"verdict: {v['verdict']}")
    return lines


def emit(out, fmt, stream):
    if fmt == "json":
        stream.write(json.dumps(out, indent=2, ensure_ascii=False) + "\n")
    else:
        stream.write("\n".join(_text_lines(out)) + "\n")


def emit_error(exc, fmt):
    if fmt == "json":
        body = {"status": "error", "error": {"kind": exc.kind, "message": str(exc)}}
        body["error"].update({k: v for k, v in exc.details.items() if v is not None})
        sys.stdout.write(json.dumps(body, indent=2, ensure_ascii=False) + "\n")
    else:
        sys.stderr.write(f"ipw: {exc.kind}: {exc}\n")
        for k, v in exc.details.items():
            if v is not None:
                sys.stderr.write(f"  {k}: {v}\n")


# --------------------------------------------------------------------- main

def build_parser():
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS,
                     help="output format (default: the file's [options] format, else json)")
    parser = argparse.ArgumentParser(
        prog="ipw", parents=[fmt],
        description="Infinitesimal Poisson algebra of a coordinate Poisson submanifold.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, help_text):
        p = sub.add_parser(name, parents=[fmt], help=help_text)
        p.add_argument("file", help="problem file")
        return p

    add("validate", "check parsing, Jacobi and the submanifold condition")
    add("extract", "print psi, c, Gamma and K")
    add("verify-pt", "check the compatibility relations of the extracted data")
    p = add("bracket", "affine bracket of two fiberwise affine functions")
    p.add_argument("u")
    p.add_argument("v")
    for name, text in (("cohomology", "per-weight dimensions and exact-sequence checks"),
                       ("theorem1", "vanishing criteria and direct H^1")):
        p = add(name, text)
        p.add_argument("--max-weight", type=int, default=None, metavar="N")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    fmt = getattr(args, "format", None) or "json"
    try:
        problem = _load(args.file)
        fmt = getattr(args, "format", None) or problem.format
        out = COMMANDS[args.command](problem, args)
    except CommandFailure as exc:
        emit_error(exc, fmt)
        return exc.code
    except InconsistencyError as exc:
        emit_error(CommandFailure(EXIT_INTERNAL, "internal", str(exc)), fmt)
        return EXIT_INTERNAL
    except NotPoissonSubmanifold as exc:
        emit_error(CommandFailure(EXIT_NOT_SUBMANIFOLD, "not_poisson_submanifold", str(exc),
                                  offending=[f"{a},{b}" for a, b in exc.offending]), fmt)
        return EXIT_NOT_SUBMANIFOLD
    except ExponentOverflow as exc:
        emit_error(CommandFailure(EXIT_PARSE, "overflow", str(exc)), fmt)
        return EXIT_PARSE
    emit(out, fmt, sys.stdout)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
