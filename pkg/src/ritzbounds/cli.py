"""Command-line front end.

Subcommands: gen, extract, verify, sweep, compare-precond.
Exit codes: 0 success / all satisfied, 1 violated bound found, 2 input error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import bounds as bnd
from .core import (
    SymmetricMatrix,
    jacobi_eigh,
    read_basis,
    read_matrix,
    write_matrix,
)
from .errors import MatrixFormatError, RitzBoundsError
from .extraction import (
    harmonic_via_shift_invert,
    rayleigh_ritz,
    t_harmonic_rayleigh_ritz,
)
from .harness import (
    ALL_BOUNDS,
    ExperimentConfig,
    ShiftRule,
    SpectrumSpec,
    emit_csv,
    gen_matrix,
    gen_subspace,
    run_sweep,
)
from .precond import (
    abs_value_inverse,
    identity,
    polynomial_commuting,
    shift_inverse_squared,
)

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_INPUT = 2
EXIT_NUMERICAL = 3


class InputError(Exception):
    pass


def parse_spectrum(text: str) -> SpectrumSpec:
    try:
        kind, _, rest = text.partition(":")
        if kind == "uniform":
            a, b = (float(t) for t in rest.split(","))
            return SpectrumSpec.uniform(a, b)
        if kind == "clustered":
            centers, widths, counts = rest.split(";")
            return SpectrumSpec.clustered(
                [float(t) for t in centers.split(",")],
                [float(t) for t in widths.split(",")],
                [int(t) for t in counts.split(",")],
            )
        if kind == "explicit":
            return SpectrumSpec.explicit([float(t) for t in rest.split(",")])
    except (ValueError, TypeError) as exc:
        raise InputError(f"bad spectrum spec {text!r}: {exc}") from exc
    raise InputError(f"unknown spectrum kind in {text!r}")


def parse_shift_rule(text: str) -> ShiftRule:
    try:
        kind, _, rest = text.partition(":")
        if kind == "midpoint":
            return ShiftRule.midpoint(int(rest))
        if kind == "explicit":
            return ShiftRule.explicit(float(rest))
        if kind == "near":
            i, gap = rest.split(",")
            return ShiftRule.near_eigenvalue(int(i), float(gap))
    except (ValueError, TypeError) as exc:
        raise InputError(f"bad shift rule {text!r}: {exc}") from exc
    raise InputError(f"unknown shift rule in {text!r}")


def build_precond(tag: str, A: SymmetricMatrix, sigma: float):
    if tag == "identity":
        return identity(A.n)
    if tag == "absinv":
        return abs_value_inverse(A, sigma)
    if tag == "invsq":
        return shift_inverse_squared(A, sigma)
    if tag.startswith("poly:"):
        coeffs = [float(t) for t in tag[5:].split(",")]
        return polynomial_commuting(A, coeffs)
    raise InputError(f"unknown preconditioner {tag!r}")


def _config_from_args(args) -> ExperimentConfig:
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        bound_set = tuple(data.get("bound_set", [args.bound]))
        if "all" in bound_set:
            bound_set = ALL_BOUNDS
        return ExperimentConfig(
            seed=int(data.get("seed", args.seed)),
            n=int(data["n"]),
            s=int(data["s"]),
            spectrum_spec=parse_spectrum(data["spectrum"]),
            shift_rule=parse_shift_rule(data["shift_rule"]),
            angle_phi=float(data.get("angle_phi", 0.3)),
            multiplicity=int(data.get("multiplicity", 1)),
            trials=int(data.get("trials", args.trials)),
            bound_set=bound_set,
            precond=data.get("precond", "absinv"),
        )
    bound_set = ALL_BOUNDS if args.bound == "all" else (args.bound,)
    shift_rule = (
        parse_shift_rule(args.shift_rule)
        if args.shift_rule
        else ShiftRule.midpoint(args.n // 2)
    )
    return ExperimentConfig(
        seed=args.seed,
        n=args.n,
        s=args.s,
        spectrum_spec=parse_spectrum(args.spectrum),
        shift_rule=shift_rule,
        angle_phi=args.phi,
        multiplicity=args.multiplicity,
        trials=args.trials,
        bound_set=bound_set,
        precond=args.precond,
    )


def cmd_gen(args) -> int:
    spec = parse_spectrum(args.spectrum)
    A, _ = gen_matrix(spec, args.n, args.seed)
    write_matrix(A, args.out)
    print(f"wrote {args.n}x{args.n} matrix to {args.out}")
    return EXIT_OK


def cmd_extract(args) -> int:
    A = read_matrix(args.matrix)
    K = read_basis(args.subspace)
    if args.method == "rr":
        rs = rayleigh_ritz(A, K)
    elif args.method == "hrr":
        rs = harmonic_via_shift_invert(A, K, args.shift)
    else:
        spec = build_precond(args.precond, A, args.shift)
        rs = t_harmonic_rayleigh_ritz(A, K, args.shift, spec.realized)
    a = A.entries
    print(f"method={rs.method} shift={rs.shift}")
    for j in range(rs.s):
        theta = rs.values[j]
        v = rs.vectors[:, j]
        if np.isfinite(theta):
            resid = float(np.linalg.norm(a @ v - theta * v))
            print(f"  value {theta: .12e}   residual {resid:.3e}")
        else:
            print("  value inf            residual n/a")
    return EXIT_OK


def cmd_verify(args) -> int:
    config = _config_from_args(args)
    records = run_sweep(config)
    if args.out:
        emit_csv(records, args.out)
    errors = [r for r in records if r.error]
    violated = [r for r in records if not r.error and not r.satisfied]
    print(
        f"trials={config.trials} rows={len(records)} "
        f"violated={len(violated)} errors={len(errors)}"
    )
    if errors:
        return EXIT_NUMERICAL
    return EXIT_VIOLATED if violated else EXIT_OK


def _parse_range(text: str):
    try:
        a, b, steps = text.split(":")
        a, b, steps = float(a), float(b), int(steps)
    except ValueError as exc:
        raise InputError(f"bad range {text!r}: {exc}") from exc
    if steps < 1:
        raise InputError("steps must be >= 1")
    return np.linspace(a, b, steps)


def cmd_sweep(args) -> int:
    buckets = _parse_range(args.range)
    base = _config_from_args(args)
    rows = []
    for bucket in buckets:
        if args.vary == "shift-gap":
            rule = ShiftRule.near_eigenvalue(base.shift_rule.index, float(bucket))
            config = ExperimentConfig(
                **{**_config_dict(base), "shift_rule": rule}
            )
        elif args.vary == "angle":
            config = ExperimentConfig(
                **{**_config_dict(base), "angle_phi": float(bucket)}
            )
        else:  # cluster-width
            spec = base.spectrum_spec
            if spec.kind != "clustered":
                raise InputError("cluster-width sweep needs a clustered spectrum")
            widened = SpectrumSpec.clustered(
                spec.centers, [float(bucket)] * len(spec.widths), spec.counts
            )
            config = ExperimentConfig(
                **{**_config_dict(base), "spectrum_spec": widened}
            )
        for rec in run_sweep(config):
            rows.append((float(bucket), rec))
    _emit_bucket_csv(rows, args.out)
    mean_by_bucket = {}
    for bucket, rec in rows:
        if not rec.error and rec.rhs > 0:
            mean_by_bucket.setdefault(bucket, []).append(rec.tightness)
    for bucket in sorted(mean_by_bucket):
        vals = mean_by_bucket[bucket]
        print(f"bucket={bucket:g} mean_tightness={sum(vals)/len(vals):.6f}")
    return EXIT_OK


def _config_dict(config: ExperimentConfig) -> dict:
    return {
        "seed": config.seed,
        "n": config.n,
        "s": config.s,
        "spectrum_spec": config.spectrum_spec,
        "shift_rule": config.shift_rule,
        "angle_phi": config.angle_phi,
        "multiplicity": config.multiplicity,
        "trials": config.trials,
        "bound_set": config.bound_set,
        "precond": config.precond,
    }


def _emit_bucket_csv(rows, path) -> None:
    from .harness import CSV_COLUMNS, _format_cell

    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["bucket"] + CSV_COLUMNS)
        for bucket, rec in rows:
            cells = [format(bucket, ".17g")]
            for col in CSV_COLUMNS:
                if col == "wall_time_ms":
                    cells.append("")
                else:
                    cells.append(_format_cell(getattr(rec, col)))
            writer.writerow(cells)


def cmd_compare_precond(args) -> int:
    A = read_matrix(args.matrix)
    decomp = jacobi_eigh(A)
    target = int(np.argmin(np.abs(decomp.eigenvalues - args.shift)))
    rows = []
    for trial in range(args.trials):
        seed = np.random.SeedSequence([args.seed, trial]).generate_state(1)[0]
        K, realized = gen_subspace(decomp, [target], args.phi, args.s, int(seed))
        for tag in ("identity", "absinv", "invsq"):
            spec = build_precond(tag, A, args.shift)
            report = bnd.t_harmonic_bound(
                A, K, args.shift, spec.realized, target, decomp=decomp
            )
            tightness = report.lhs / report.rhs if report.rhs > 0 else 0.0
            rows.append(
                [
                    trial,
                    tag,
                    format(report.kappa, ".17g"),
                    format(report.lhs, ".17g"),
                    format(report.rhs, ".17g"),
                    format(tightness, ".17g"),
                    "1" if report.satisfied else "0",
                ]
            )
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["trial", "precond", "kappa", "lhs", "rhs", "tightness", "satisfied"]
        )
        writer.writerows(rows)
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


def _add_config_flags(p):
    p.add_argument("--config", default=None, help="JSON config file")
    p.add_argument("--n", type=int, default=24)
    p.add_argument("--s", type=int, default=4)
    p.add_argument("--phi", type=float, default=0.3)
    p.add_argument("--multiplicity", type=int, default=1)
    p.add_argument("--spectrum", default="uniform:1,2")
    p.add_argument("--shift-rule", dest="shift_rule", default=None)
    p.add_argument("--precond", default="absinv")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ritzbounds",
        description="Rayleigh-Ritz extraction and a priori angle bound checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a matrix file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--spectrum", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("extract", help="run one extraction and print residuals")
    p.add_argument("--matrix", required=True)
    p.add_argument("--subspace", required=True)
    p.add_argument("--method", choices=["rr", "hrr", "thrr"], required=True)
    p.add_argument("--shift", type=float, default=0.0)
    p.add_argument("--precond", default="identity")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("verify", help="randomized bound verification sweep")
    p.add_argument(
        "--bound",
        choices=list(ALL_BOUNDS) + ["all"],
        default="all",
    )
    _add_config_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="parameter sweep with bucket column")
    p.add_argument("--vary", choices=["shift-gap", "angle", "cluster-width"], required=True)
    p.add_argument("--range", required=True, help="a:b:steps")
    p.add_argument("--bound", choices=list(ALL_BOUNDS) + ["all"], default="harmonic")
    _add_config_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare-precond", help="kappa/tightness per preconditioner")
    p.add_argument("--matrix", required=True)
    p.add_argument("--shift", type=float, required=True)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--s", type=int, default=4)
    p.add_argument("--phi", type=float, default=0.3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compare_precond)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (InputError, MatrixFormatError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (RitzBoundsError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
