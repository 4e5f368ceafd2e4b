"""Command-line front end.

Exit codes: 0 success, 1 invalid input (or an exceeded budget), 2 a
mathematical check failed, 3 an internal assertion fired.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from math import comb

from .errors import (
    BudgetExceeded,
    DependentMatrices,
    InputError,
)
from .gsca import build_presentation, hilbert_dimensions, verify_presentation
from .parsing import InputDocument, parse_form_expression, parse_input, read_source
from .pointcount import count_over, enumerate_gamma, stabilized_count
from .quadforms import embed_poly, factorizations, mu_rank
from .quadsys import validate_system

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_MATH = 2
EXIT_INTERNAL = 3

COMMANDS = ("check", "present", "count", "factor", "hilbert", "oracle")


class CommandFailed(Exception):
    """A mathematical check failed; carries the partial report."""

    def __init__(self, report: dict):
        super().__init__(report.get("failure", "check failed"))
        self.report = report


def _header(command: str, doc: InputDocument) -> dict:
    return {"command": command, "field": doc.field.describe(), "n": doc.n}


def _need_system(doc: InputDocument):
    if doc.system is None:
        raise InputError("this command needs matrices or forms in the input")
    return doc.system


def run_check(doc: InputDocument, args) -> dict:
    sys_ = _need_system(doc)
    verdict = validate_system(sys_, args.max_ext, args.order_policy, budget=args.budget)
    out = _header("check", doc)
    out["result"] = verdict.to_json(doc.field)
    if not verdict.independent:
        out["failure"] = "DependentMatrices"
    elif not verdict.ok:
        out["failure"] = "not-normalizing" if not verdict.normalizing.normalizing else "base-point-found"
    if "failure" in out:
        raise CommandFailed(out)
    return out


def run_present(doc: InputDocument, args) -> dict:
    sys_ = _need_system(doc)
    out = _header("present", doc)
    try:
        pres = build_presentation(sys_)
    except DependentMatrices as exc:
        out["failure"] = "DependentMatrices"
        out["message"] = str(exc)
        raise CommandFailed(out) from None
    out["result"] = pres.to_json()
    out["result"]["verified"] = verify_presentation(pres, sys_)
    if not out["result"]["verified"]:
        out["failure"] = "presentation-audit-failed"
        raise CommandFailed(out)
    return out


def run_count(doc: InputDocument, args) -> dict:
    sys_ = _need_system(doc)
    out = _header("count", doc)
    verdict = validate_system(sys_, args.max_ext, args.order_policy, budget=args.budget)
    out["hypotheses_verified"] = verdict.ok
    if not verdict.ok:
        warnings.warn("the system did not pass validation; counts carry no guarantee", stacklevel=1)
    if args.ext_degree is not None:
        report, _ = count_over(sys_, args.ext_degree, budget=args.budget)
        out["result"] = report.to_json()
        final = report
    else:
        sc = stabilized_count(sys_, args.max_ext, budget=args.budget)
        out["result"] = sc.to_json()
        final = sc.final
    if not final.match:
        out["failure"] = "count-mismatch"
        out["diagnostics"] = final.diagnostics
        raise CommandFailed(out)
    return out


def run_factor(doc: InputDocument, args) -> dict:
    if not args.form:
        raise InputError("factor needs --form")
    m = args.ext_degree or 1
    ring, table = doc.ring.extend(m)
    Q = embed_poly(parse_form_expression(args.form, doc.ring), ring, table)
    out = _header("factor", doc)
    F = ring.field
    fs = factorizations(Q, strict=True)
    out["result"] = {
        "form": str(Q),
        "extension_degree": m,
        "factorizations": [f.to_json(F) for f in fs],
        "mu_rank_here": fs.mu_rank_label,
        "mu_rank": mu_rank(Q, args.max_ext),
        "searched_extensions": args.max_ext,
    }
    return out


def run_hilbert(doc: InputDocument, args) -> dict:
    sys_ = _need_system(doc)
    out = _header("hilbert", doc)
    try:
        pres = build_presentation(sys_)
    except DependentMatrices as exc:
        out["failure"] = "DependentMatrices"
        out["message"] = str(exc)
        raise CommandFailed(out) from None
    dmax = args.dmax if args.dmax is not None else doc.options.hilbert_dmax
    dims = hilbert_dimensions(pres, dmax)
    expected = [comb(doc.n + d - 1, d) for d in range(dmax + 1)]
    out["result"] = {"dimensions": dims, "polynomial_ring": expected, "matches": dims == expected}
    return out


def run_oracle(doc: InputDocument, args) -> dict:
    sys_ = _need_system(doc)
    m = args.ext_degree or 1
    ext = sys_.extend(m)
    out = _header("oracle", doc)
    try:
        pres = build_presentation(ext)
    except DependentMatrices as exc:
        out["failure"] = "DependentMatrices"
        out["message"] = str(exc)
        raise CommandFailed(out) from None
    out["result"] = enumerate_gamma(pres, ext, extension_degree=m, budget=args.budget).to_json()
    return out


RUNNERS = {
    "check": run_check,
    "present": run_present,
    "count": run_count,
    "factor": run_factor,
    "hilbert": run_hilbert,
    "oracle": run_oracle,
}


# -- text rendering -----------------------------------------------------------

def _text(report: dict) -> str:
    fd = report["field"]
    q = f"{fd['p']}" if fd["k"] == 1 else f"{fd['p']}^{fd['k']}"
    lines = [f"{report['command']} over F_{q}, n = {report['n']}"]
    if "failure" in report:
        lines.append(f"FAILED: {report['failure']}")
    res = report.get("result")
    cmd = report["command"]
    if res is None:
        pass
    elif cmd == "check":
        for key in ("independent", "normalizing", "base_point_free", "ok"):
            lines.append(f"  {key}: {res[key]}")
        bp = res["certificates"]["base_points"]
        if bp:
            lines.append(f"  base points: {bp['verdict']}")
    elif cmd == "present":
        lines.append("  relations:")
        lines += [f"    {r['text']} = 0" for r in res["relations"]]
        lines.append("  y:")
        lines += [f"    y{k+1} = {y['text']}" for k, y in enumerate(res["y"])]
        lines.append(f"  verified: {res['verified']}")
    elif cmd == "count":
        rep = res.get("report", res)
        if "history" in res:
            for h in res["history"]:
                lines.append(f"  degree {h['extension_degree']}: N = {h['N']}, |Gamma| = {h['gamma_count']}, match = {h['match']}")
            lines.append(f"  stable: {res['stable']} (N = {res['N']} since degree {res['stabilization_degree']})")
        lines.append(f"  f1 = {rep['f1']}, f2 = {rep['f2']}, N = {rep['N']}, |Gamma| = {rep['gamma_count']}")
        for s in rep["strata"]:
            tag = "unique" if s["delta_mu"] else f"{len(s['factorizations'])} ways"
            lines.append(f"    {s['form']}  [{tag}]")
    elif cmd == "factor":
        lines.append(f"  {res['form']}")
        for f in res["factorizations"]:
            lines.append(f"    ({f['left']}) * ({f['right']})")
        lines.append(f"  mu-rank: {res['mu_rank']}")
    elif cmd == "hilbert":
        lines.append(f"  dims: {res['dimensions']} (polynomial ring: {res['polynomial_ring']})")
    elif cmd == "oracle":
        lines.append(f"  |Gamma| = {res['gamma_count']}")
        for p in res["pairs"]:
            lines.append(f"    a = {p['a']}, b = {p['b']}")
    if "diagnostics" in report:
        lines.append(f"  diagnostics: {json.dumps(report['diagnostics'])}")
    return "\n".join(lines)


def emit(report: dict, fmt: str, stream=None) -> None:
    stream = stream or sys.stdout
    if fmt == "json":
        stream.write(json.dumps(report, indent=2) + "\n")
    else:
        stream.write(_text(report) + "\n")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="skewclifford", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--input", required=True, help="JSON document path, '-' for stdin, or fixture:NAME")
    ap.add_argument("--ext-degree", type=int, default=None, help="work over the degree-M extension only")
    ap.add_argument("--max-ext", type=int, default=None, help="largest extension degree searched")
    ap.add_argument("--order-policy", choices=("given", "search"), default=None)
    ap.add_argument("--format", choices=("text", "json"), default="text")
    ap.add_argument("--budget", type=int, default=None, help="cap on enumerated points")
    ap.add_argument("--form", default=None, help="form expression for the factor command")
    ap.add_argument("--dmax", type=int, default=None, help="top degree for the hilbert command")
    return ap


def _resolve(args, doc: InputDocument) -> None:
    o = doc.options
    args.max_ext = args.max_ext if args.max_ext is not None else o.max_ext
    args.order_policy = args.order_policy or o.order_policy
    args.budget = args.budget if args.budget is not None else o.budget
    if args.ext_degree is None:
        args.ext_degree = o.ext_degree
    for name in ("max_ext", "ext_degree", "budget"):
        v = getattr(args, name)
        if v is not None and v < 1:
            raise InputError(f"--{name.replace('_', '-')} must be >= 1")


def _error(command: str, exc: BaseException, fmt: str) -> None:
    payload = {"command": command, "error": {"type": type(exc).__name__, "message": str(exc)}}
    pointer = getattr(exc, "pointer", None)
    if pointer is not None:
        payload["error"]["pointer"] = pointer
    found = getattr(exc, "factorizations", None)
    if found is not None:
        payload["error"]["factorizations"] = [
            {"left": list(f.left), "right": list(f.right)} for f in found
        ]
    if fmt == "json":
        emit(payload, "json")
    print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = read_source(args.input)
        doc = parse_input(text, require_system=args.command != "factor")
        _resolve(args, doc)
        report = RUNNERS[args.command](doc, args)
    except CommandFailed as exc:
        emit(exc.report, args.format)
        return EXIT_MATH
    except (InputError, BudgetExceeded) as exc:
        _error(args.command, exc, args.format)
        return EXIT_INPUT
    except AssertionError as exc:
        _error(args.command, exc, args.format)
        return EXIT_INTERNAL
    emit(report, args.format)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
