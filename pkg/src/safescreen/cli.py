"""Command line: ``safescreen {solve,path,bench,generate} ...``.

Coefficients in every record are for the scaled problem
``1/2 ||y/lam - X b||^2 + ||b||_1``; multiply by ``lam`` to get the solution
of ``1/2 ||y - X b||^2 + lam ||b||_1``.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from .data import DataError, generate, load_csv, load_libsvm
from .duality import LassoProblem, lambda_max
from .path import PathConfig, solve_path
from .regions import RegionRule
from .report import bench_table, dump_record, event_rows, run_record, write_csv
from .solver import NumericalError, SolverConfig, solve

EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4

RULES = [r.value for r in RegionRule]
GEN_FLAGS = ("gen_n", "gen_d", "gen_density", "gen_nnz", "gen_noise")


class UsageError(Exception):
    pass


def _add_data_args(ap):
    g = ap.add_argument_group("data")
    g.add_argument("--data", type=Path, help="input file")
    g.add_argument("--format", choices=["libsvm", "csv"], help="input format (default: from suffix)")
    g.add_argument("--has-header", action="store_true", help="skip the first CSV row")
    g.add_argument("--gen-n", type=int, help="generate: number of samples")
    g.add_argument("--gen-d", type=int, help="generate: number of features")
    g.add_argument("--gen-density", type=float, help="generate: fraction of nonzero entries (default 1)")
    g.add_argument("--gen-nnz", type=int, help="generate: nonzeros in the true coefficients (default 10)")
    g.add_argument("--gen-noise", type=float, help="generate: noise standard deviation (default 0.1)")
    g.add_argument("--seed", type=int, default=0, help="generator seed")


def _add_solver_args(ap, rule=True):
    g = ap.add_argument_group("solver")
    if rule:
        g.add_argument("--rule", choices=RULES, default="dynamic-sasvi")
    g.add_argument("--eps", type=float, default=1e-6)
    g.add_argument("--eps-mode", choices=["relative", "absolute"], default="relative")
    g.add_argument("--screen-every", type=int, default=10)
    g.add_argument("--max-epochs", type=int, default=100_000)
    g.add_argument("--safety-margin", type=float, default=0.0)


def _add_lambda_args(ap):
    g = ap.add_mutually_exclusive_group()
    g.add_argument("--lambda", dest="lam", type=float, help="absolute regularization")
    g.add_argument("--lambda-ratio", type=float, help="regularization as a fraction of lambda_max (default 0.01)")


def _add_grid_args(ap):
    ap.add_argument("--grid-count", type=int, default=100)
    ap.add_argument("--grid-decades", type=float, default=2.0)


def build_parser():
    ap = argparse.ArgumentParser(prog="safescreen", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="one Lasso solve")
    _add_data_args(s)
    _add_lambda_args(s)
    _add_solver_args(s)
    s.add_argument("--out", type=Path, help="write the run record here instead of stdout")

    p = sub.add_parser("path", help="regularization path on a geometric grid")
    _add_data_args(p)
    _add_grid_args(p)
    _add_solver_args(p)
    p.add_argument("--out", type=Path)

    b = sub.add_parser("bench", help="same workload under several rules")
    _add_data_args(b)
    b.add_argument("--rules", default="none,gap-sphere,gap-dome,dynamic-sasvi,dynamic-edpp",
                   help="comma separated; 'none' is always run as the baseline")
    b.add_argument("--workload", choices=["solve", "path"], default="solve")
    _add_lambda_args(b)
    _add_grid_args(b)
    _add_solver_args(b, rule=False)
    b.add_argument("--out", type=Path)
    b.add_argument("--csv", type=Path, help="write the comparison table (and <stem>_events.csv)")

    g = sub.add_parser("generate", help="write a synthetic dataset")
    g.add_argument("--gen-n", type=int, required=True)
    g.add_argument("--gen-d", type=int, required=True)
    g.add_argument("--gen-density", type=float, default=1.0)
    g.add_argument("--gen-nnz", type=int, default=10)
    g.add_argument("--gen-noise", type=float, default=0.1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--format", choices=["libsvm", "csv"], default="csv")
    g.add_argument("--out", type=Path, required=True)
    return ap


def _dataset(args):
    gen_given = [f for f in GEN_FLAGS if getattr(args, f) is not None]
    if args.data is not None and gen_given:
        raise UsageError("--data conflicts with --gen-* options")
    if args.data is None:
        if args.gen_n is None or args.gen_d is None:
            raise UsageError("give --data FILE or --gen-n N --gen-d D")
        return generate(
            args.gen_n, args.gen_d,
            density=1.0 if args.gen_density is None else args.gen_density,
            nnz_true=10 if args.gen_nnz is None else args.gen_nnz,
            noise_sd=0.1 if args.gen_noise is None else args.gen_noise,
            seed=args.seed,
        )
    fmt = args.format or ("csv" if args.data.suffix.lower() == ".csv" else "libsvm")
    if fmt == "csv":
        ds = load_csv(args.data, has_header=args.has_header)
    else:
        if args.has_header:
            raise UsageError("--has-header only applies to CSV input")
        ds = load_libsvm(args.data)
    if ds.is_empty:
        raise DataError(f"{args.data}: dataset has {ds.X.n_rows} samples and {ds.X.n_cols} features")
    return ds


def _solver_cfg(args, rule):
    try:
        return SolverConfig(rule=rule, max_epochs=args.max_epochs, screen_every=args.screen_every,
                            eps=args.eps, eps_mode=args.eps_mode, safety_margin=args.safety_margin)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _path_cfg(args, rule):
    try:
        return PathConfig(args.grid_count, args.grid_decades, _solver_cfg(args, rule))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _problem(args, ds):
    lam_max = lambda_max(ds.X, ds.y)
    if args.lam is not None:
        lam = args.lam
    else:
        ratio = 0.01 if args.lambda_ratio is None else args.lambda_ratio
        if not ratio > 0:
            raise UsageError("--lambda-ratio must be positive")
        lam = ratio * lam_max
    if not lam > 0:
        raise UsageError(f"regularization must be positive (lambda_max = {lam_max})")
    return LassoProblem(ds.X, ds.y, lam), lam_max


def cmd_solve(args, argv):
    ds = _dataset(args)
    prob, lam_max = _problem(args, ds)
    cfg = _solver_cfg(args, args.rule)
    rep = solve(prob, None, cfg)
    config = {"solver": cfg.as_dict(), "lambda": prob.lam, "lambda_max": lam_max}
    return run_record(argv, config, ds, rep.as_dict())


def cmd_path(args, argv):
    ds = _dataset(args)
    cfg = _path_cfg(args, args.rule)
    rep = solve_path(ds.X, ds.y, cfg)
    return run_record(argv, cfg.as_dict(), ds, rep.as_dict())


def _parse_rules(text):
    rules = []
    for name in (t.strip() for t in text.split(",")):
        if not name:
            continue
        if name not in RULES:
            raise UsageError(f"unknown rule {name!r}; choose from {', '.join(RULES)}")
        if name not in rules:
            rules.append(name)
    if "none" not in rules:
        rules.insert(0, "none")
    return rules


def cmd_bench(args, argv):
    ds = _dataset(args)
    rules = _parse_rules(args.rules)
    reports = {}
    config = {"rules": rules, "workload": args.workload}
    if args.workload == "solve":
        prob, lam_max = _problem(args, ds)
        config.update({"lambda": prob.lam, "lambda_max": lam_max})
        for rule in rules:
            cfg = _solver_cfg(args, rule)
            reports[rule] = solve(LassoProblem(ds.X, ds.y, prob.lam), None, cfg)
        config["solver"] = _solver_cfg(args, "none").as_dict()
    else:
        if args.lam is not None or args.lambda_ratio is not None:
            raise UsageError("--lambda/--lambda-ratio do not apply to the path workload")
        for rule in rules:
            reports[rule] = solve_path(ds.X, ds.y, _path_cfg(args, rule))
        config["path"] = _path_cfg(args, "none").as_dict()
    table = bench_table(reports)
    events = event_rows(reports)
    if args.csv is not None:
        write_csv(args.csv, table)
        write_csv(args.csv.with_name(args.csv.stem + "_events.csv"), events)
    result = {
        "table": table,
        "active_counts": {
            rule: (rep.active_curve if args.workload == "path" else rep.active_counts)
            for rule, rep in reports.items()
        },
        "runs": {rule: rep.as_dict() for rule, rep in reports.items()},
    }
    return run_record(argv, config, ds, result)


def cmd_generate(args, argv):
    try:
        ds = generate(args.gen_n, args.gen_d, args.gen_density, args.gen_nnz, args.gen_noise, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    A = ds.X.to_dense()
    with open(args.out, "w") as fh:
        for i in range(A.shape[0]):
            if args.format == "csv":
                fh.write(",".join(repr(float(v)) for v in (ds.y[i], *A[i])) + "\n")
            else:
                nz = np.flatnonzero(A[i])
                fh.write(" ".join([repr(float(ds.y[i]))] + [f"{j + 1}:{float(A[i, j])!r}" for j in nz]) + "\n")
    return None


COMMANDS = {"solve": cmd_solve, "path": cmd_path, "bench": cmd_bench, "generate": cmd_generate}


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            # non-finite values are caught by the solver and reported below
            record = COMMANDS[args.command](args, ["safescreen", *argv])
    except UsageError as exc:
        parser.error(str(exc))
    except (DataError, OSError) as exc:
        print(f"safescreen: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"safescreen: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if record is None:
        return 0
    text = dump_record(record)
    if getattr(args, "out", None) is not None:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
