"""Command-line interface: canonicalize, factorize, decompose-phi, gen,
verify-diag, filtration-sweep, and seeded campaign runs.

Exit codes: 0 on success / all trials passing, 1 on verification failure or
any failing trial, 2 on malformed input or bad configuration.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import generators as G
from .campaign import SUITES, Campaign, run_suite
from .canonical import property_z_canonicalize
from .errors import ConfigError, KisinlabError
from .filtration import build_h, check_coe2, check_property_a, suggest_m
from .gf import gf
from .kisin import diag_shape_verify, make_adapted_phi, make_triangular_instance
from .localfield import eisenstein_roots
from .serialize import (
    family_from_json,
    family_to_json,
    lpoly_to_json,
    matrix_from_json,
    matrix_to_json,
    shaped_from_json,
    shaped_to_json,
    weights_from_json,
)
from .shape import shape_decompose_phi, shape_factorize


def _read_json(path: str | None):
    try:
        if path and path != "-":
            with open(path) as fh:
                return json.load(fh)
        return json.load(sys.stdin)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read input: {exc}") from exc


def _write_json(obj, path: str | None) -> None:
    text = json.dumps(obj, indent=2)
    if path and path != "-":
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _require(obj: dict, key: str):
    if not isinstance(obj, dict) or key not in obj:
        raise ConfigError(f"input record is missing {key!r}")
    return obj[key]


def cmd_canonicalize(args) -> int:
    obj = _read_json(args.infile)
    a = matrix_from_json(_require(obj, "a") if isinstance(obj, dict) and "a" in obj else obj)
    cert = property_z_canonicalize(a, args.delta)
    _write_json(
        {
            "C": matrix_to_json(cert.C),
            "M": matrix_to_json(cert.M),
            "ordering": list(cert.ordering),
            "delta": cert.delta,
        },
        args.out,
    )
    return 0


def cmd_factorize(args) -> int:
    obj = _read_json(args.infile)
    x = shaped_from_json(_require(obj, "x"))
    a = matrix_from_json(_require(obj, "a"))
    t = [int(v) for v in _require(obj, "t")]
    deltas = [int(v) for v in _require(obj, "deltas")]
    gamma = obj.get("gamma")
    fact = shape_factorize(x, a, t, deltas, gamma=None if gamma is None else int(gamma))
    _write_json(
        {
            "x1": shaped_to_json(fact.x1),
            "x0": shaped_to_json(fact.x0),
            "b": matrix_to_json(fact.b),
        },
        args.out,
    )
    return 0


def cmd_decompose_phi(args) -> int:
    obj = _read_json(args.infile)
    fam = family_from_json(_require(obj, "family"))
    w = weights_from_json(_require(obj, "weights"))
    if fam.witnesses is None:
        raise ConfigError("decompose-phi needs a family with witnesses")
    factors = shape_decompose_phi(fam, fam.witnesses, w)
    _write_json(
        [
            {
                "c": matrix_to_json(fac.c),
                "f1": shaped_to_json(fac.f1),
                "f0": shaped_to_json(fac.f0),
                "sigma0": list(fac.sigma0),
                "sigma1": list(fac.sigma1),
            }
            for fac in factors
        ],
        args.out,
    )
    return 0


def cmd_gen(args) -> int:
    if args.kind in ("adapted", "triangular"):
        if not args.weights:
            raise ConfigError(f"--weights is required for kind {args.kind!r}")
        w = weights_from_json(_read_json(args.weights))
        if args.kind == "adapted":
            fam = make_adapted_phi(w, args.seed)
        else:
            rng = G.rng_for(args.seed, 0)
            import itertools

            perms = list(itertools.permutations(range(1, w.d + 1)))
            s0 = [perms[rng.randrange(len(perms))] for _ in range(w.f)]
            s1 = [perms[rng.randrange(len(perms))] for _ in range(w.f)]
            fam = make_triangular_instance(w, s0, s1, args.seed)
        _write_json(family_to_json(fam), args.out)
    elif args.kind == "shaped-matrix":
        field = gf(args.p, args.m)
        inst = G.gen_shape_instance(field, args.d, args.seed)
        _write_json(
            {
                "x": shaped_to_json(inst["x"]),
                "a": matrix_to_json(inst["a"]),
                "t": list(inst["t"]),
                "deltas": list(inst["deltas"]),
            },
            args.out,
        )
    elif args.kind == "h-record":
        rng = G.rng_for(args.seed, 0)
        rbars = tuple(rng.randrange(1, args.rmax + 1) for _ in range(args.j))
        m = args.M or suggest_m(args.e, args.p, rbars, args.p - 1)
        roots = eisenstein_roots(args.e, args.p, m)
        rec = build_h(args.j, roots, rbars)
        _write_json(
            {
                "p": args.p,
                "e0": args.e,
                "M": m,
                "j": rec.j,
                "rbars": list(rec.rbars),
                "h": lpoly_to_json(rec.h),
                "g": lpoly_to_json(rec.g),
                "q": lpoly_to_json(rec.q),
            },
            args.out,
        )
    else:
        raise ConfigError(f"unknown kind {args.kind!r}")
    return 0


def cmd_verify_diag(args) -> int:
    obj = _read_json(args.infile)
    fam = family_from_json(_require(obj, "family"))
    w = weights_from_json(_require(obj, "weights"))
    t = []
    for mat in fam.matrices:
        vals = [mat.entries[x][x].u_valuation() for x in range(mat.dim)]
        if any(v == float("inf") for v in vals):
            raise ConfigError("a diagonal entry vanishes to working precision")
        t.append([int(v) for v in vals])
    found = diag_shape_verify(t, w)
    if found is None:
        _write_json({"ok": False, "valuations": t, "permutations": None}, args.out)
        return 1
    _write_json(
        {
            "ok": True,
            "valuations": t,
            "permutations": [
                {"sigma0": list(s0), "sigma1": list(s1)} for s0, s1 in found
            ],
        },
        args.out,
    )
    return 0


def cmd_filtration_sweep(args) -> int:
    if (args.p - 1) % args.e:
        raise ConfigError("need e | p - 1")
    results = []
    for r in range(1, args.rmax + 1):
        m = args.M or suggest_m(args.e, args.p, (r,), args.p - 1)
        roots = eisenstein_roots(args.e, args.p, m)
        tame = all(
            (roots[j] - roots[q]).valuation() == 1
            for j in range(len(roots))
            for q in range(len(roots))
            if j != q
        )
        rec = build_h(1, roots, (r,))
        prop_a = check_property_a(rec)
        coe2 = {ell: bool(check_coe2(rec, ell)) for ell in range(1, args.p)}
        results.append(
            {
                "r": r,
                "M": m,
                "tame_differences": bool(tame),
                "property_a": bool(prop_a),
                "coe2": coe2,
            }
        )
    ok = all(
        res["tame_differences"] and res["property_a"] and all(res["coe2"].values())
        for res in results
    )
    _write_json(
        {"p": args.p, "e0": args.e, "results": results, "all_pass": ok}, args.out
    )
    return 0 if ok else 1


def cmd_run(args) -> int:
    if args.format != "json":
        raise ConfigError(f"unsupported format {args.format!r}")
    if args.list:
        _write_json(
            {name: desc for name, (_, desc) in sorted(SUITES.items())}, args.out
        )
        return 0
    if not args.suite:
        raise ConfigError("--suite is required (or use --list)")
    params = {}
    for key in ("p", "m", "d", "e", "f", "N", "M", "delta", "maxdeg", "r", "rmax"):
        val = getattr(args, key, None)
        if val is not None:
            params[key] = val
    report = run_suite(
        Campaign(suite=args.suite, parameters=params, seed=args.seed,
                 trials=args.trials)
    )
    _write_json(report, args.out)
    return 0 if report["all_pass"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kisinlab", description="shape factorizations, seeded campaigns, "
        "and filtration sweeps over truncated series rings"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def io_args(sp, with_in=True):
        if with_in:
            sp.add_argument("--in", dest="infile", default=None,
                            help="input JSON file (default: stdin)")
        sp.add_argument("--out", default=None,
                        help="output JSON file (default: stdout)")

    sp = sub.add_parser("canonicalize", help="unipotent canonical-form corrector")
    sp.add_argument("--delta", type=int, default=0)
    io_args(sp)
    sp.set_defaults(fn=cmd_canonicalize)

    sp = sub.add_parser("factorize", help="two-factor shape factorization")
    io_args(sp)
    sp.set_defaults(fn=cmd_factorize)

    sp = sub.add_parser("decompose-phi", help="C*F1*F0 factorization of a family")
    io_args(sp)
    sp.set_defaults(fn=cmd_decompose_phi)

    sp = sub.add_parser("gen", help="seeded instance generators")
    sp.add_argument("--kind", required=True,
                    choices=["adapted", "triangular", "shaped-matrix", "h-record"])
    sp.add_argument("--weights", default=None, help="weights JSON file")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--p", type=int, default=5)
    sp.add_argument("--m", type=int, default=1)
    sp.add_argument("--d", type=int, default=3)
    sp.add_argument("--e", type=int, default=2)
    sp.add_argument("--j", type=int, default=1)
    sp.add_argument("--rmax", type=int, default=3)
    sp.add_argument("--M", type=int, default=None)
    io_args(sp, with_in=False)
    sp.set_defaults(fn=cmd_gen)

    sp = sub.add_parser("verify-diag",
                        help="permutation witnesses for diagonal valuations")
    io_args(sp)
    sp.set_defaults(fn=cmd_verify_diag)

    sp = sub.add_parser("filtration-sweep",
                        help="tame-difference, divisibility and coefficient sweeps")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--e", type=int, required=True)
    sp.add_argument("--rmax", type=int, default=3)
    sp.add_argument("--M", type=int, default=None)
    io_args(sp, with_in=False)
    sp.set_defaults(fn=cmd_filtration_sweep)

    sp = sub.add_parser("run", help="run a named campaign suite")
    sp.add_argument("--suite", default=None)
    sp.add_argument("--list", action="store_true",
                    help="list known suites and exit")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--format", default="json")
    for key in ("p", "m", "d", "e", "f", "N", "M", "delta", "maxdeg", "r", "rmax"):
        sp.add_argument(f"--{key}", type=int, default=None)
    io_args(sp, with_in=False)
    sp.set_defaults(fn=cmd_run)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KisinlabError as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
