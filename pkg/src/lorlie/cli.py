"""``lorlie`` command line.

Exit codes: 0 ok, 2 unreadable input, 3 not a Lie algebra, 4 internal
cross-check mismatch (or a failed ``verify``), 5 a theorem hypothesis failed.
"""

from __future__ import annotations

import argparse
import os
import secrets
import sys

from . import exact as ex
from . import io, lie
from .double_ext import (
    MODES,
    NondegenerateSubspace,
    NotAdmissible,
    admissibility,
    build,
    einstein_conditions,
    extract,
    unimodularity,
)
from .metric import (
    CrossCheckMismatch,
    HypothesisFailed,
    einstein_check,
    operators,
    ricci_direct,
    ricci_operator_formula,
)
from .search import SearchConfig, search
from .verify import format_table, passed, verify_algebra, verify_params

EXIT_OK, EXIT_PARSE, EXIT_NOT_LIE, EXIT_MISMATCH, EXIT_HYPOTHESIS = 0, 2, 3, 4, 5


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _emit(text: str, out: str | None) -> None:
    if out:
        io.write_text(out, text)
    else:
        sys.stdout.write(text)


def _load_algebra(path: str):
    """Parse without enforcing Jacobi, then report the first failing triple."""
    try:
        p = io.read_algebra(path, check=False)
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"{path}: {exc.strerror}") from exc
    d = lie.jacobi_defect(p.alg)
    if not d.is_zero:
        i, j, k = (t + 1 for t in d.triple)
        vec = io.array_out(d.vector, p.exact)
        raise CliError(EXIT_NOT_LIE, f"{path}: not a Lie algebra; Jacobi fails on (e{i}, e{j}, e{k}), defect {vec}")
    return p.__class__(lie.LieAlgebra(p.alg.c), p.metric)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    if os.environ.get("LORLIE_CI") == "1":
        raise CliError(EXIT_PARSE, "--seed is required when LORLIE_CI=1")
    seed = secrets.randbits(32)
    print(f"using seed {seed}", file=sys.stderr)
    return seed


# -- commands ---------------------------------------------------------------------------

def cmd_classify(args) -> int:
    p = _load_algebra(args.path)
    alg = p.alg
    flags = lie.classify(alg)
    report = {
        "kind": "report",
        "flags": {
            "abelian": flags.abelian,
            "nilpotent": flags.nilpotent,
            "solvable": flags.solvable,
            "completely_solvable": flags.completely_solvable,
            "unimodular": flags.unimodular,
            "derived_series_length": flags.derived_series_length,
            "lower_central_length": flags.lower_central_length,
        },
        "witnesses": {
            "derived_series_dims": [s.dim for s in lie.derived_series(alg)],
            "lower_central_dims": [s.dim for s in lie.lower_central_series(alg)],
            "center": lie.center(alg),
            "derived_ideal": lie.derived_ideal(alg),
            "flag_of_ideals": flags.flag,
            "signature": list(p.metric.signature),
        },
    }
    _emit(io.dumps_report(report), args.out)
    return EXIT_OK


def cmd_ricci(args) -> int:
    p = _load_algebra(args.path)
    reports = {}
    if args.method in ("direct", "both"):
        reports["direct"] = ricci_direct(p)
    if args.method in ("operator", "both"):
        reports["operator"] = ricci_operator_formula(p)
    if args.method == "both" and not ex.allclose(reports["direct"].Ric, reports["operator"].Ric):
        raise CliError(EXIT_MISMATCH, "direct and operator Ricci operators differ")
    rep = next(iter(reports.values()))
    ops = operators(p)
    report = {
        "kind": "report",
        "method": args.method,
        "ricci": rep.Ric,
        "ricci_form": rep.ric,
        "einstein_lambda": rep.einstein_lambda,
        "flat": rep.flat,
        "ricci_flat": rep.ricci_flat,
        "einstein": rep.einstein,
        "witnesses": {"H": rep.H, "trJ1": ex.trace(ops.J1), "trJ2": ex.trace(ops.J2)},
    }
    _emit(io.dumps_report(report), args.out)
    return EXIT_OK


def cmd_dextend(args) -> int:
    try:
        params = io.read_params(args.path)
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"{args.path}: {exc.strerror}") from exc
    adm = admissibility(params)
    built = build(params)
    if not adm.admissible:
        d = lie.jacobi_defect(built.alg)
        where = "" if d.triple is None else " Jacobi fails on ({}, {}, {})".format(*(f"e{t + 1}" for t in d.triple))
        raise CliError(EXIT_NOT_LIE, f"parameters not admissible (derivation={adm.is_derivation}, "
                                     f"cocycle={adm.is_cocycle});{where}")
    cond = einstein_conditions(params)
    lam = einstein_check(built, method="direct")
    zero = lam is not None and ex.is_zero(lam)
    if cond.einstein != zero:
        raise CliError(EXIT_MISMATCH, "Einstein conditions disagree with the Ricci operator of the extension")
    uni = unimodularity(params)
    report = {
        "kind": "report",
        "einstein": cond.einstein,
        "einstein_lambda": lam,
        "unimodular": uni.is_unimodular,
        "witnesses": {"H": uni.H, "dext1_residual": cond.dext1_residual, "dext2_residuals": cond.dext2_residuals,
                      "g0_ricci_flat": cond.g0_ricci_flat, "hash": io.algebra_hash(built)},
    }
    if args.out:
        io.write_text(args.out, io.dumps_algebra(built))
    else:
        report["algebra"] = io.algebra_to_obj(built)
    sys.stdout.write(io.dumps_report(report))
    return EXIT_OK


def cmd_extract(args) -> int:
    p = _load_algebra(args.path)
    try:
        res = extract(p, args.mode)
    except NondegenerateSubspace as exc:
        raise CliError(EXIT_HYPOTHESIS, f"hypothesis failed: {exc}") from exc
    rebuilt = build(res.params)
    local = p.change_basis(res.basis)
    same = io.algebra_hash(rebuilt) == io.algebra_hash(local)
    if not same:
        raise CliError(EXIT_MISMATCH, "rebuilt algebra differs from the input in the extraction basis")
    report = {
        "kind": "report",
        "mode": res.mode,
        "mu": res.params.mu,
        "trace_D": ex.trace(res.params.D),
        "einstein_lambda": res.einstein_lambda,
        "rebuild_hash_equal": same,
        "witnesses": {"extraction_basis": res.basis.T, "facts": res.facts, "hash": io.algebra_hash(local)},
    }
    if args.out:
        io.write_text(args.out, io.dumps_params(res.params))
    else:
        report["params"] = io.params_to_obj(res.params)
    sys.stdout.write(io.dumps_report(report))
    return EXIT_OK


def cmd_search(args) -> int:
    seed = _seed(args)
    try:
        cfg = SearchConfig(args.dim, seed, args.samples, args.bound)
    except ValueError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from exc
    res = search(cfg, workers=args.workers, unimodular=not args.non_unimodular)
    _emit(io.dumps_certificates(res.certificates), args.out)
    summary = ", ".join(f"{k}: {v}" for k, v in sorted(res.rejected.items())) or "none"
    print(f"{len(res.certificates)} certificates from {cfg.samples} draws (seed {seed}); rejected: {summary}",
          file=sys.stderr)
    if res.empty:
        print("no Ricci-flat extension found for these settings", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    seed = _seed(args)
    try:
        obj = io.read_json(args.path)
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"{args.path}: {exc.strerror}") from exc
    if io.is_params_obj(obj):
        checks = verify_params(io.params_from_obj(obj), seed, args.samples)
    else:
        checks = verify_algebra(_load_algebra(args.path), seed, args.samples)
    print(format_table(checks))
    return EXIT_OK if passed(checks) else EXIT_MISMATCH


# -- entry point --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lorlie", description="Curvature of pseudo-Euclidean Lie algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="solvability, nilpotency, unimodularity, flag of ideals")
    c.add_argument("path")
    c.add_argument("--out")
    c.set_defaults(func=cmd_classify)

    r = sub.add_parser("ricci", help="Ricci operator and Einstein constant")
    r.add_argument("path")
    r.add_argument("--method", choices=("direct", "operator", "both"), default="both")
    r.add_argument("--out")
    r.set_defaults(func=cmd_ricci)

    d = sub.add_parser("dextend", help="build a double extension from a parameter file")
    d.add_argument("path")
    d.add_argument("--out", help="write the algebra file here")
    d.set_defaults(func=cmd_dextend)

    x = sub.add_parser("extract", help="recover double-extension parameters")
    x.add_argument("path")
    x.add_argument("--mode", choices=MODES, default=MODES[0])
    x.add_argument("--out", help="write the parameter file here")
    x.set_defaults(func=cmd_extract)

    s = sub.add_parser("search", help="generate certified Ricci-flat double extensions")
    s.add_argument("--dim", type=int, default=2, help="dimension of the abelian base")
    s.add_argument("--seed", type=int)
    s.add_argument("--samples", type=int, default=20)
    s.add_argument("--bound", type=int, default=3, help="entry bound for rational draws")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--non-unimodular", action="store_true", help="draw mu freely instead of -tr D")
    s.add_argument("--out")
    s.set_defaults(func=cmd_search)

    v = sub.add_parser("verify", help="run every applicable check and print a table")
    v.add_argument("path")
    v.add_argument("--seed", type=int)
    v.add_argument("--samples", type=int, default=20)
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except io.ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except lie.JacobiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_LIE
    except CrossCheckMismatch as exc:
        print(f"cross-check mismatch: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except HypothesisFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except NotAdmissible as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_LIE


if __name__ == "__main__":
    sys.exit(main())
