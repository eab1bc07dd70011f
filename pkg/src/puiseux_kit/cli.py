"""Command-line front end."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import families, invariants
from .exactnum import RealCut, parse_rational
from .factorize import (NotInMonoid, SearchBudget, catenary, factorizations, lengths,
                        monotone_catenary)
from .monoid import SpecError, load_spec

EXIT_OK, EXIT_INPUT, EXIT_TRUNCATED, EXIT_FAIL = 0, 1, 2, 3


class InputError(Exception):
    pass


def _pos_int(text):
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _cut(text):
    try:
        c = RealCut.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))
    if c.sign() <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return c


def _rat(text):
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(str(e))


SPEC_COMMANDS = {
    "member": "membership of --x",
    "divides": "whether --x divides --y",
    "atoms": "atoms up to --bound with denominators up to --denom-cap",
    "factorize": "factorizations of --x",
    "lengths": "set of lengths of --x",
    "delta": "observed delta set over elements up to --bound",
    "elasticity": "elasticity and whether it is accepted",
    "rho-k": "rho_k for --k",
    "lambda-k": "lambda_k for --k",
    "union-k": "union of length sets containing --k",
    "catenary": "catenary and monotone catenary degree of --x",
    "omega": "omega(H, u) for the atom --u",
    "tau": "tau(H, u) for the atom --u",
    "tame": "tame degree t(H, u) for the atom --u",
    "big-m": "M(u) for the atom --u",
    "lambda-inv": "sup of min L over the monoid",
    "closure": "complete integral closure",
    "conductor": "conductor description",
    "classify": "structural classification",
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="puiseux-kit",
                                 description="Factorization invariants of Puiseux monoids")
    sub = ap.add_subparsers(dest="command", required=True)

    def budget_flags(p):
        p.add_argument("--value-cap", type=_cut, default=RealCut(200))
        p.add_argument("--denom-cap", type=_pos_int, default=64)
        p.add_argument("--length-cap", type=_pos_int, default=400)
        p.add_argument("--node-cap", type=_pos_int, default=10 ** 7)
        p.add_argument("--format", choices=("json", "tsv"), default="json")

    for name, help_text in SPEC_COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--spec", required=True)
        p.add_argument("--x", type=_rat)
        p.add_argument("--y", type=_rat)
        p.add_argument("--u", type=_rat)
        p.add_argument("--k", type=int)
        p.add_argument("--bound", type=_cut)
        p.add_argument("--max-size", type=_pos_int, default=None,
                       help="configuration size cap for omega/tau/tame outside finite generation")
        budget_flags(p)

    p = sub.add_parser("verify-paper", help="run the claim checks of a named family")
    p.add_argument("--family", choices=families.SUITE_FAMILIES + ("all",), default="all")
    p.add_argument("--alpha")
    p.add_argument("--n", type=int)
    p.add_argument("--seed", help="comma-separated seed for the prop39 family")
    budget_flags(p)
    return ap


def _need(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise InputError(f"--{n.replace('_', '-')} is required for {args.command}")


def _set_result(key, res):
    out = {key: [v if isinstance(v, int) else v.to_json() if hasattr(v, "to_json") else str(v)
                 for v in res.items]}
    out.update(res.certificate_json())
    return out, res.exact


def _dispatch(args):
    """Return (payload, complete) for a spec subcommand."""
    spec = load_spec(args.spec)
    budget = SearchBudget(args.value_cap, args.denom_cap, args.length_cap, args.node_cap)
    cmd = args.command
    if cmd == "member":
        _need(args, "x")
        if args.x < 0:
            raise InputError("--x must be non-negative")
        return {"member": spec.contains(args.x), "x": str(args.x)}, True
    if cmd == "divides":
        _need(args, "x", "y")
        for v in (args.x, args.y):
            if v < 0 or not spec.contains(v):
                raise NotInMonoid(v, spec)
        y_minus_x = args.y - args.x
        return {"divides": y_minus_x >= 0 and spec.contains(y_minus_x),
                "x": str(args.x), "y": str(args.y)}, True
    if cmd == "atoms":
        _need(args, "bound")
        al = spec.atoms_below(args.bound, args.denom_cap)
        return al.to_json(), al.complete
    if cmd == "factorize":
        _need(args, "x")
        return _set_result("factorizations", factorizations(spec, args.x, budget))
    if cmd == "lengths":
        _need(args, "x")
        return _set_result("lengths", lengths(spec, args.x, budget))
    if cmd == "delta":
        rep = invariants.delta_scan(spec, Fraction((args.bound or RealCut(60)).floor()), budget)
        return rep.to_json(), rep.exact
    if cmd == "elasticity":
        rep = invariants.elasticity(spec)
        return rep.to_json(), rep.status != "Unknown"
    if cmd in ("rho-k", "lambda-k", "union-k"):
        _need(args, "k")
        rep = invariants.union_k(spec, args.k, budget)
        js = rep.to_json()
        if cmd == "rho-k":
            keep = ("k", "rho_k", "rho_exact", "reason", "budget")
            return {k: js[k] for k in keep if k in js}, rep.rho_exact
        if cmd == "lambda-k":
            keep = ("k", "lambda_k", "lambda_exact", "reason", "budget")
            return {k: js[k] for k in keep if k in js}, rep.lambda_exact
        return js, rep.exact
    if cmd == "catenary":
        _need(args, "x")
        c = catenary(spec, args.x, budget)
        cm = monotone_catenary(spec, args.x, budget)
        out = {"x": str(args.x), "catenary": c.value, "monotone_catenary": cm.value,
               "exact": c.exact and cm.exact}
        if not out["exact"]:
            out["budget"] = budget.to_json()
            out["reason"] = c.reason or cm.reason
        return out, out["exact"]
    if cmd in ("omega", "tau", "tame", "big-m"):
        _need(args, "u")
        if cmd == "big-m":
            rep = invariants.M_of(spec, args.u, budget)
        else:
            fn = {"omega": invariants.omega, "tau": invariants.tau,
                  "tame": invariants.tame_degree}[cmd]
            rep = fn(spec, args.u, budget, args.max_size)
        return rep.to_json(), rep.exact
    if cmd == "lambda-inv":
        rep = invariants.Lambda(spec, budget)
        return rep.to_json(), rep.status != "LowerBound"
    if cmd == "closure":
        return spec.closure().to_json(), True
    if cmd == "conductor":
        c = spec.conductor()
        return c.to_json(), c.status != "Unknown"
    if cmd == "classify":
        return spec.classify().to_json(), True
    raise InputError(f"unknown command {cmd}")


def _verify(args):
    budget = SearchBudget(args.value_cap, args.denom_cap, args.length_cap, args.node_cap)
    seed = None
    if args.seed:
        try:
            seed = tuple(int(s) for s in args.seed.split(","))
        except ValueError:
            raise InputError("--seed must be comma-separated integers") from None
    fam = None if args.family == "all" else args.family
    results = families.run_suite(fam, alpha=args.alpha, n=args.n, seed=seed, budget=budget)
    verdicts = {r.verdict for r in results}
    if families.FAIL in verdicts:
        code = EXIT_FAIL
    elif families.INCONCLUSIVE in verdicts:
        code = EXIT_TRUNCATED
    else:
        code = EXIT_OK
    return [r.to_json() for r in results], code


def _tsv(payload) -> str:
    rows = payload if isinstance(payload, list) else [payload]
    lines = []
    for row in rows:
        for k in sorted(row):
            v = row[k]
            text = v if isinstance(v, str) else json.dumps(v, sort_keys=True)
            lines.append(f"{k}\t{text}")
        if isinstance(payload, list):
            lines.append("")
    return "\n".join(lines).rstrip("\n")


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INPUT
    try:
        if args.command == "verify-paper":
            payload, code = _verify(args)
        else:
            payload, complete = _dispatch(args)
            code = EXIT_OK if complete else EXIT_TRUNCATED
    except SpecError as e:
        print(json.dumps({"error": "malformed spec", "field": e.field, "message": str(e)},
                         sort_keys=True), file=err)
        return EXIT_INPUT
    except NotInMonoid as e:
        print(json.dumps({"error": "not in monoid", "x": str(e.x), "member": False},
                         sort_keys=True), file=err)
        return EXIT_INPUT
    except (InputError, ValueError, OSError) as e:
        print(json.dumps({"error": str(e)}, sort_keys=True), file=err)
        return EXIT_INPUT
    if args.format == "tsv":
        print(_tsv(payload), file=out)
    else:
        print(json.dumps(payload, sort_keys=True), file=out)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
