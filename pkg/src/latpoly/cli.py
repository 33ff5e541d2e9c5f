"""``latpoly`` command-line interface.

Exit status: 0 on success or pass, 1 when a checked property fails (a
witness is printed), 2 on usage or validation errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import assoc, expr, io, poly, theorems
from .assoc import AssocParams
from .errors import LatpolyError, NotALattice, NotAssociative, NotDistributive, NotPolynomial

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class Failure(Exception):
    """Carry a property-failure payload up to ``main``."""

    def __init__(self, payload):
        self.payload = payload


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--lattice", help="lattice file or shorthand chain:<k>, boolean:<k>, product:<a>,<b>")
    p.add_argument("--format", choices=["text", "json"], default=None)
    p.add_argument("--budget", type=int, default=assoc.DEFAULT_BUDGET, help="evaluation budget for associativity checks")
    p.add_argument("--maxlen", type=int, default=theorems.DEFAULT_MAXLEN, help="longest string checked for variadic properties")
    p.add_argument("--seed", type=int, default=theorems.DEFAULT_SEED)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    return p


def _function_source(p: argparse.ArgumentParser, table: bool = False):
    p.add_argument("--expr", help="term expression, e.g. \"x1 /\\ 'a' \\/ x2\"")
    p.add_argument("--arity", type=int, help="arity for --expr (default: highest variable)")
    p.add_argument("--poly", help="polynomial JSON file")
    if table:
        p.add_argument("--table", help="function table JSON file")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="latpoly", description=__doc__.splitlines()[0])
    groups = parser.add_subparsers(dest="group", required=True)

    def leaf(sub, name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    lat = groups.add_parser("lattice", help="construct and inspect lattices").add_subparsers(dest="cmd", required=True)
    p = leaf(lat, "new", "write a lattice file from a shorthand")
    p.add_argument("shorthand", help="chain:<k>, boolean:<k> or product:<a>,<b>")
    p.add_argument("-o", "--output", help="write to this file instead of stdout")
    leaf(lat, "show", "describe a lattice")
    leaf(lat, "check", "validate a lattice file")

    pol = groups.add_parser("poly", help="polynomial functions").add_subparsers(dest="cmd", required=True)
    p = leaf(pol, "parse", "parse and pretty-print a term expression")
    p.add_argument("--expr", required=True)
    p.add_argument("--arity", type=int)
    p = leaf(pol, "eval", "evaluate at one tuple")
    _function_source(p)
    p.add_argument("--args", required=True, help="comma-separated element names")
    for name, text in [("canon", "canonical coefficients"), ("minimize", "minimal DNF coefficients")]:
        _function_source(leaf(pol, name, text))
    _function_source(leaf(pol, "is-poly", "decide whether a table is polynomial"), table=True)

    asc = groups.add_parser("assoc", help="associativity").add_subparsers(dest="cmd", required=True)
    p = leaf(asc, "check", "n-ary or variadic associativity check")
    _function_source(p, table=True)
    p.add_argument("--variadic", help="variadic JSON file (checked up to --maxlen)")
    p = leaf(asc, "construct", "build the four-parameter associative form")
    p.add_argument("--arity", type=int, required=True)
    p.add_argument("--params", required=True, help="a,b,c,d element names")
    _function_source(leaf(asc, "classify", "four parameters of an associative polynomial"))
    p = leaf(asc, "enumerate", "all associative polynomial functions of one arity")
    p.add_argument("--arity", type=int, required=True)
    _function_source(leaf(asc, "extend", "extend to an associative variadic function"))

    p = groups.add_parser("verify", parents=[common], help="verify the structural results")
    p.add_argument("tag", choices=["all"] + [t.value for t in theorems.Tag])
    p.add_argument("--max-arity", type=int, default=theorems.DEFAULT_MAX_ARITY)
    p.add_argument("--samples", type=int, help="size of random populations")
    p.add_argument("--exhaustive", action="store_true", help="lift population caps")
    p.add_argument("--timing", action="store_true", help="include elapsed times")
    return parser


# -- helpers ------------------------------------------------------------


def _lattice(args, required: bool = True):
    if args.lattice is None:
        if required:
            raise LatpolyError("--lattice is required")
        return None
    return io.load_lattice(args.lattice)


def _function(args, lat):
    """The polynomial function named by --expr or --poly."""
    if args.expr is not None:
        if lat is None:
            raise LatpolyError("--lattice is required with --expr")
        e = expr.parse(args.expr, args.arity)
        n = args.arity or max(expr.max_variable(e), 1)
        return expr.lower(e, lat, n)
    if args.poly is not None:
        obj = io.read_json_file(args.poly)
        return io.poly_from_json(obj, lat, base_dir=os.path.dirname(args.poly))
    raise LatpolyError("give --expr or --poly")


def _table(args, lat):
    if getattr(args, "table", None) is not None:
        obj = io.read_json_file(args.table)
        return io.table_from_json(obj, lat, base_dir=os.path.dirname(args.table))
    return _function(args, lat).table()


def _elements(lat, text: str) -> list[int]:
    return [io.element(lat, s.strip()) for s in io.split_top_level(text or "")]


def _emit(args, payload, default: str = "json", text=None):
    fmt = args.format or default
    if fmt == "json":
        print(json.dumps(payload))
    else:
        print(text(payload) if text else _plain(payload))


def _plain(payload) -> str:
    if isinstance(payload, dict):
        return "\n".join(f"{k}: {json.dumps(v) if not isinstance(v, str) else v}" for k, v in payload.items())
    return str(payload)


def _names(lat, xs):
    return [lat.names[x] for x in xs]


# -- commands -----------------------------------------------------------


def cmd_lattice(args):
    if args.cmd == "new":
        lat = io.load_lattice(args.shorthand)
        text = json.dumps(io.lattice_to_json(lat))
        if args.output:
            with open(args.output, "w") as fh:
                fh.write(text + "\n")
        else:
            print(text)
        return
    if args.cmd == "check":
        try:
            lat = _lattice(args)
        except (NotALattice, NotDistributive) as exc:
            raise Failure({"valid": False, "error": str(exc), "witness": list(exc.witness or [])}) from None
        _emit(args, {"valid": True, "lattice": lat.label, "size": lat.size})
        return
    lat = _lattice(args)
    payload = {
        "lattice": lat.label,
        "size": lat.size,
        "elements": list(lat.names),
        "bottom": lat.names[lat.bottom],
        "top": lat.names[lat.top],
        "covers": [[lat.names[x], lat.names[y]] for x, y in lat.covers()],
        "chain": lat.is_chain(),
    }
    _emit(args, payload, default="text")


def cmd_poly(args):
    if args.cmd == "parse":
        e = expr.parse(args.expr, args.arity)
        _emit(args, {"expr": expr.pretty(e), "ast": _ast_json(e)}, default="text",
              text=lambda p: p["expr"])
        return
    lat = _lattice(args, required=False)
    if args.cmd == "eval":
        f = _function(args, lat)
        lat = f.lattice
        value = lat.names[f(*_elements(lat, args.args))]
        _emit(args, {"value": value}, default="text", text=lambda p: p["value"])
    elif args.cmd == "canon":
        f = _function(args, lat)
        _emit(args, io.poly_to_json(f, f.canonical_alpha))
    elif args.cmd == "minimize":
        f = _function(args, lat)
        _emit(args, io.poly_to_json(f, poly.minimal_alpha(f).alpha))
    elif args.cmd == "is-poly":
        t = _table(args, lat)
        lat = t.lattice
        try:
            poly.from_table(t)
        except NotPolynomial as exc:
            med = poly.median_violation(t)
            raise Failure({
                "polynomial": False,
                "witness": _names(lat, exc.witness),
                "median_witness": {"tuple": _names(lat, med[0]), "slot": med[1] + 1} if med else None,
            }) from None
        _emit(args, {"polynomial": True})


def _ast_json(e):
    if isinstance(e, expr.Var):
        return {"var": e.index}
    if isinstance(e, expr.Const):
        return {"const": e.name}
    if isinstance(e, expr.Med):
        return {"med": [_ast_json(e.first), _ast_json(e.second), _ast_json(e.third)]}
    op = "meet" if isinstance(e, expr.Meet) else "join"
    return {op: [_ast_json(e.left), _ast_json(e.right)]}


def _params_json(lat, p: AssocParams) -> dict:
    return {"a": lat.names[p.a], "b": lat.names[p.b], "c": lat.names[p.c], "d": lat.names[p.d]}


def _dornte_failure(lat, w) -> dict:
    return {"associative": False, "witness": {"string": _names(lat, w.string), "i": w.i, "j": w.j}}


def cmd_assoc(args):
    if args.cmd == "check" and args.variadic:
        lat = _lattice(args, required=False)
        g = io.variadic_from_json(io.read_json_file(args.variadic), lat, os.path.dirname(args.variadic))
        w = assoc.variadic_associativity_witness(g, args.maxlen)
        if w is not None:
            raise Failure({"associative": False, "maxlen": args.maxlen,
                           "witness": {"string": _names(g.lattice, w.string), "split": w.split}})
        _emit(args, {"associative": True, "maxlen": args.maxlen})
        return
    lat = _lattice(args, required=args.cmd in ("construct", "enumerate"))
    if args.cmd == "check":
        t = _table(args, lat)
        w = assoc.nary_associativity_witness(t, args.budget, args.threads)
        if w is not None:
            raise Failure(_dornte_failure(t.lattice, w))
        _emit(args, {"associative": True, "arity": t.arity})
    elif args.cmd == "construct":
        names = io.split_top_level(args.params)
        if len(names) != 4:
            raise LatpolyError("--params needs four elements a,b,c,d")
        p = AssocParams(*(io.element(lat, s.strip()) for s in names))
        f = assoc.construct_nary(lat, args.arity, p)
        _emit(args, io.poly_to_json(f))
    elif args.cmd == "classify":
        f = _function(args, lat)
        try:
            p = assoc.classify_nary(f, args.budget, args.threads)
        except NotAssociative as exc:
            raise Failure(_dornte_failure(f.lattice, exc.witness)) from None
        _emit(args, {"associative": True, **_params_json(f.lattice, p)})
    elif args.cmd == "enumerate":
        members = assoc.enumerate_associative_nary(lat, args.arity, args.budget)
        out = [
            {"params": _params_json(lat, p), "alpha": io.poly_to_json(f)["alpha"]}
            for f, p in members.items()
        ]
        _emit(args, out)
    elif args.cmd == "extend":
        f = _function(args, lat)
        try:
            g = assoc.extend_to_variadic(f, args.budget)
        except NotAssociative as exc:
            raise Failure(_dornte_failure(f.lattice, exc.witness)) from None
        _emit(args, io.variadic_to_json(g))


def cmd_verify(args):
    lats = [_lattice(args)] if args.lattice else theorems.bundled_lattices()
    options = dict(max_arity=args.max_arity, maxlen=args.maxlen, seed=args.seed,
                   samples=args.samples, exhaustive=args.exhaustive)
    reports = []
    for lat in lats:
        if args.tag == "all":
            reports += theorems.verify_all(lat, **options)
            if not lat.is_chain():
                print(f"note: C2 skipped on {lat.label} (not a chain)", file=sys.stderr)
        else:
            if args.tag == theorems.Tag.C2.value and not lat.is_chain():
                raise LatpolyError(f"C2 needs a chain; {lat.label} is not one")
            reports.append(theorems.verify(args.tag, lat, **options))
    fmt = args.format or "text"
    if fmt == "json":
        print(json.dumps({"schema": io.SCHEMA_VERSION,
                          "reports": [r.to_dict(args.timing) for r in reports]}))
    else:
        for r in reports:
            print(r.to_text(args.timing))
        failed = sum(not r.passed for r in reports)
        print(f"{len(reports) - failed}/{len(reports)} passed")
    return EXIT_FAIL if any(not r.passed for r in reports) else EXIT_OK


COMMANDS = {"lattice": cmd_lattice, "poly": cmd_poly, "assoc": cmd_assoc, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        status = COMMANDS[args.group](args)
    except Failure as fail:
        print(json.dumps(fail.payload))
        return EXIT_FAIL
    except LatpolyError as exc:
        print(f"latpoly: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK if status is None else status


if __name__ == "__main__":
    sys.exit(main())
