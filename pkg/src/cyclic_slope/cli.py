"""Command-line front end: JSON in, exact reports out.

Exit codes: 0 success, 1 invalid input, 2 an internal identity failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from importlib import resources

from jsonschema import Draft202012Validator
from referencing import Registry, Resource

from .bounds import lower_bound_certificate
from .cluster import FiberGerm, validate_germ
from .core import FibrationParams, format_rational, genus_hypothesis_holds, lambda_lower, lambda_upper
from .errors import CyclicSlopeError, IdentityViolation, InvalidInput
from .examples import (
    EnumerationBudget,
    ProductExampleParams,
    enumerate_germs,
    product_example,
    product_surface_data,
    write_ndjson,
)
from .invariants import GlobalModel, invariant_report
from .resolution import euler_local, resolve_germ, vertical_ledger
from .verify import fixed_point_suite, sweep_params, verify_suite

EXIT_OK, EXIT_INVALID, EXIT_IDENTITY = 0, 1, 2
_SAFE_INT = 2**53


def _schema(name: str) -> dict:
    return json.loads(resources.files("cyclic_slope").joinpath("schemas", name).read_text())


def _validator(name: str) -> Draft202012Validator:
    germ, model = _schema("germ.schema.json"), _schema("model.schema.json")
    registry = Registry().with_resources(
        [(s["$id"], Resource.from_contents(s)) for s in (germ, model)]
    )
    return Draft202012Validator(_schema(name), registry=registry)


def json_path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def check_schema(doc, name: str) -> None:
    errors = sorted(_validator(name).iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        raise InvalidInput(f"{json_path(e.absolute_path)}: {e.message}")


def load_json(path: str):
    try:
        with open(path) if path != "-" else sys.stdin as fh:
            text = fh.read()
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as first:
        # fall back to NDJSON
        docs = []
        for i, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            try:
                docs.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise InvalidInput(f"{path}: line {i} col {exc.colno}: {exc.msg}") from None
        if not docs:
            raise InvalidInput(f"{path}: line {first.lineno} col {first.colno}: {first.msg}") from None
        return docs


def _jsonable(x):
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, int):
        return str(x) if abs(x) > _SAFE_INT else x
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _flatten(prefix: str, x, rows: list) -> None:
    if isinstance(x, dict):
        if not x and prefix:
            rows.append((prefix, "{}"))
        for k, v in x.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, rows)
    elif isinstance(x, list) and x and all(isinstance(v, (dict, list)) for v in x):
        for i, v in enumerate(x):
            _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, json.dumps(x) if isinstance(x, list) else str(x)))


def report_format(report) -> str:
    """Two-column text table; keys keep the report's order, rationals print as p/q."""
    rows: list[tuple[str, str]] = []
    _flatten("", _jsonable(report), rows)
    if not rows:
        return ""
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def _emit(report, args) -> None:
    if getattr(args, "table", False):
        print(report_format(report))
    else:
        print(json.dumps(_jsonable(report), indent=2))


def _germ_from_doc(doc) -> FiberGerm:
    check_schema(doc, "germ.schema.json")
    if "n" not in doc or "r" not in doc:
        raise InvalidInput("$: a stand-alone germ needs 'n' and 'r'")
    return FiberGerm.from_dict(doc)


def _is_model(doc) -> bool:
    return isinstance(doc, dict) and "g" in doc


def cmd_validate(args) -> int:
    doc = load_json(args.file)
    if _is_model(doc):
        check_schema(doc, "model.schema.json")
        params = FibrationParams(n=doc["n"], g=doc["g"], h=doc.get("h", 0))
        problems = []
        for i, gd in enumerate(doc.get("germs", [])):
            g = FiberGerm.from_dict(gd, n=params.n, r=params.r)
            for v in validate_germ(g):
                problems.append({"path": f"$.germs[{i}]", "rule": v.rule, "node": v.node, "message": v.message})
        if not problems:
            try:
                GlobalModel.from_dict(doc)
            except InvalidInput as exc:
                problems.append({"path": "$", "rule": "Model", "node": None, "message": str(exc)})
    else:
        docs = doc if isinstance(doc, list) else [doc]
        problems = []
        for i, d in enumerate(docs):
            g = _germ_from_doc(d)
            prefix = f"$[{i}]" if isinstance(doc, list) else "$"
            for v in validate_germ(g):
                problems.append({"path": prefix, "rule": v.rule, "node": v.node, "message": v.message})
    _emit({"valid": not problems, "violations": problems}, args)
    return EXIT_OK if not problems else EXIT_INVALID


def cmd_invariants(args) -> int:
    doc = load_json(args.file)
    check_schema(doc, "model.schema.json")
    model = GlobalModel.from_dict(doc)
    _emit(invariant_report(model).to_dict(), args)
    return EXIT_OK


def cmd_resolve(args) -> int:
    doc = load_json(args.file)
    docs = doc if isinstance(doc, list) else [doc]
    out = []
    for d in docs:
        rg = resolve_germ(_germ_from_doc(d))
        rep = rg.to_dict()
        rep["euler_local"] = euler_local(rg)
        rep["families"] = vertical_ledger(rg)
        out.append(rep)
    _emit(out if isinstance(doc, list) else out[0], args)
    return EXIT_OK


def cmd_bounds(args) -> int:
    n, g, h = args.n, args.g, args.h
    rep = {
        "n": n,
        "g": g,
        "h": h,
        "r": FibrationParams(n=n, g=g, h=h).r,
        "lambda_lower": lambda_lower(g, h, n),
        "genus_hypothesis": genus_hypothesis_holds(g, h, n),
    }
    if h == 0 and n >= 4:
        try:
            rep["lambda_upper"] = lambda_upper(g, n)
        except InvalidInput as exc:
            rep["lambda_upper"] = None
            rep["upper_note"] = str(exc)
    else:
        rep["lambda_upper"] = None
        rep["upper_note"] = "upper bound needs h = 0 and n >= 4"
    _emit(rep, args)
    return EXIT_OK


def cmd_sharp_example(args) -> int:
    p = ProductExampleParams(n=args.n, h=args.h, N=args.N, M=args.M)
    ex = product_example(p)
    rep = {"g": ex.g, "Kf2": ex.Kf2, "chif": ex.chif, "slope": ex.slope, "lambda": lambda_lower(ex.g, p.h, p.n)}
    if p.h >= 1:
        rep["certificate"] = lower_bound_certificate(product_surface_data(p)).to_dict()
    _emit(rep, args)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    budget = EnumerationBudget(
        max_nodes=args.max_nodes, max_mult=args.max_mult, max_depth=args.max_depth, max_contact=args.max_contact
    )
    write_ndjson(enumerate_germs(args.n, args.r, budget), sys.stdout)
    return EXIT_OK


def cmd_verify_suite(args) -> int:
    if args.n is not None and args.r is not None:
        params = [(args.n, args.r)]
    elif args.n is not None:
        params = list(sweep_params(ns=(args.n,)))
    else:
        params = list(sweep_params())
    results = verify_suite(params, max_nodes=args.budget) + [fixed_point_suite()]
    for res in results:
        print(res.line())
        for f in res.failures[:20]:
            print(f"  {f}")
    if all(r.ok for r in results):
        return EXIT_OK
    print("IDENTITY FAILURE: at least one exact check failed", file=sys.stderr)
    return EXIT_IDENTITY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyclic-slope",
        description="Exact invariants and slope bounds for cyclic covering fibrations.",
    )
    parser.add_argument("--table", action="store_true", help="print a text table instead of JSON")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a model or germ file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("invariants", help="K_f^2, chi_f, e_f, indices and signature of a model")
    p.add_argument("file")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("resolve", help="resolve a germ (JSON or NDJSON) and print its ledger")
    p.add_argument("file")
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("bounds", help="lower and upper slope bounds for (g, h, n)")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--h", type=int, default=0)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("sharp-example", help="product example attaining the lower bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--M", type=int, required=True)
    p.set_defaults(func=cmd_sharp_example)

    p = sub.add_parser("enumerate", help="stream every valid germ within a budget as NDJSON")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--max-nodes", type=int, required=True)
    p.add_argument("--max-mult", type=int, required=True)
    p.add_argument("--max-depth", type=int, default=None)
    p.add_argument("--max-contact", type=int, default=None)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify-suite", help="run every identity suite over the enumeration")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--budget", type=int, default=4, help="maximum number of singular points per germ")
    p.set_defaults(func=cmd_verify_suite)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except IdentityViolation as exc:
        print(f"IDENTITY VIOLATION: {exc}", file=sys.stderr)
        return EXIT_IDENTITY
    except (CyclicSlopeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
