"""Command-line pipelines: genseq, validate, sample, ensemble, predict, compare.

Exit codes: 0 success, 1 precondition or parse failure, 2 infeasible kernel,
3 tolerance failure in ``compare``.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analytic import predict, predict_r_from_sums
from .degseq import (
    PowerLawParams,
    read_sequence,
    regular_sequence,
    sample_poisson,
    sample_power_law,
    write_sequence,
)
from .ensemble import POOLING, DegreeSpectrum, fit_linear, fit_power_slope, run_ensemble
from .errors import AddgraphError, InfeasiblePair, InsufficientData, InvalidParams
from .generator import generate, write_edgelist
from .kernel import KERNEL_NAMES, ClampPolicy, Constant, describe, extreme_pairs, kernel_for_sequence, validate_feasibility
from .rng import realization_seed

EXIT_OK = 0
EXIT_PRECONDITION = 1
EXIT_INFEASIBLE = 2
EXIT_TOLERANCE = 3

SPECTRUM_HEADER = ["degree", "mean", "stderr", "count"]
PREDICTION_HEADER = ["degree", "knn_pred", "c_pred"]
SCALAR_HEADER = ["n", "z", "p", "q", "r", "mean_clustering", "linear_slope", "linear_intercept"]


def _error(msg) -> None:
    print(f"addgraph: error: {msg}", file=sys.stderr)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False)


def _sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _write_text(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _csv_text(header, rows, meta: dict) -> str:
    buf = io.StringIO()
    for key in sorted(meta):
        buf.write(f"# {key}: {json.dumps(meta[key], sort_keys=True, allow_nan=False)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def read_commented_csv(path) -> tuple[dict, list[dict]]:
    """Metadata from ``# key: json`` lines plus the data rows as dicts."""
    meta, lines = {}, []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            if raw.startswith("#"):
                key, _, value = raw[1:].partition(":")
                meta[key.strip()] = json.loads(value)
            elif raw.strip():
                lines.append(raw)
    return meta, list(csv.DictReader(lines))


def read_spectrum(path) -> tuple[dict, DegreeSpectrum]:
    meta, rows = read_commented_csv(path)
    if rows and list(rows[0]) != SPECTRUM_HEADER:
        raise InvalidParams(f"{path}: expected columns {','.join(SPECTRUM_HEADER)}")
    spec = DegreeSpectrum.from_rows(
        (int(r["degree"]), float(r["mean"]), float(r["stderr"]), int(r["count"])) for r in rows
    )
    return meta, spec


def _kernel_from_args(args, seq):
    policy = ClampPolicy.CLAMP if getattr(args, "clamp", False) else ClampPolicy.STRICT
    if args.p is not None:
        if args.kernel != "constant":
            raise InvalidParams("--p applies only to --kernel constant")
        return Constant(p=args.p, clamp_policy=policy)
    return kernel_for_sequence(args.kernel, seq, policy)


def _sequence_config(args) -> dict:
    return {"seq": str(args.seq), "seq_sha256": _sha256(args.seq)}


# ---- genseq ----


def cmd_genseq(args) -> int:
    if args.dist != "file" and args.n is None:
        raise InvalidParams(f"--dist {args.dist} requires --n")
    if args.dist == "powerlaw":
        params = PowerLawParams(args.gamma, args.kmin, args.kmax if args.kmax is not None else args.n - 1)
        seq = sample_power_law(args.n, params, args.seed)
        config = {"dist": "powerlaw", "n": args.n, "gamma": params.gamma,
                  "kmin": params.k_min, "kmax": params.k_max, "seed": args.seed}
    elif args.dist == "poisson":
        if args.mean is None:
            raise InvalidParams("--dist poisson requires --mean")
        seq = sample_poisson(args.n, args.mean, args.seed)
        config = {"dist": "poisson", "n": args.n, "mean": args.mean, "seed": args.seed}
    elif args.dist == "regular":
        if args.k is None:
            raise InvalidParams("--dist regular requires --k")
        seq = regular_sequence(args.n, args.k)
        config = {"dist": "regular", "n": args.n, "k": args.k}
    else:
        if args.input is None:
            raise InvalidParams("--dist file requires --input")
        seq = read_sequence(args.input)
        config = {"dist": "file", "input": str(args.input), "input_sha256": _sha256(args.input)}
    write_sequence(seq, args.output)
    report = {"command": "genseq", "version": __version__, "config": config, **seq.moments()}
    print(_dumps(report))
    return EXIT_OK


# ---- validate ----


def cmd_validate(args) -> int:
    seq = read_sequence(args.seq)
    kernel = _kernel_from_args(args, seq)
    report = validate_feasibility(kernel, seq, full=args.full)
    lo, hi = extreme_pairs(kernel, seq)
    out = {
        **report.as_dict(),
        "feasible": report.clean,
        "kernel": describe(kernel),
        "min_pair_prob": lo,
        "max_pair_prob": hi,
        "census": "full" if args.full else "degree-classes",
    }
    print(_dumps(out))
    return EXIT_OK if report.clean else EXIT_INFEASIBLE


# ---- sample ----


def cmd_sample(args) -> int:
    seq = read_sequence(args.seq)
    kernel = _kernel_from_args(args, seq)
    seed = realization_seed(args.seed, args.index)
    g, report = generate(seq, kernel, seed)
    write_edgelist(g, args.output)
    print(_dumps({"n": g.n, "edge_count": g.edge_count, "realization_index": args.index,
                  "master_seed": args.seed, **report.as_dict()}))
    return EXIT_OK


# ---- ensemble ----


def cmd_ensemble(args) -> int:
    seq = read_sequence(args.seq)
    kernel = _kernel_from_args(args, seq)
    if args.realizations < 1:
        raise InvalidParams("--realizations must be >= 1")
    summary = run_ensemble(seq, kernel, args.realizations, args.seed, workers=args.workers)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    # workers and output location do not affect results and are left out
    config = {
        "command": "ensemble",
        **_sequence_config(args),
        "kernel": describe(kernel),
        "realizations": args.realizations,
        "seed": args.seed,
    }
    mean_r, mean_r_err = summary.mean_r
    mean_c, mean_c_err = summary.mean_clustering
    mean_e, mean_e_err = summary.mean_edge_count
    count, s1, s2, s3 = summary.degree_power_sums()
    clamp = summary.clamp_totals
    payload = {
        "version": __version__,
        "config": config,
        "n": seq.n,
        "z": seq.avg_degree,
        "p": seq.avg_connect_prob,
        "q": seq.variance_q,
        "realizations": summary.realizations,
        "master_seed": summary.master_seed,
        "mean_r": mean_r,
        "mean_r_stderr": mean_r_err,
        "r_defined_realizations": summary.r_defined_count,
        "mean_clustering": mean_c,
        "mean_clustering_stderr": mean_c_err,
        "mean_edge_count": mean_e,
        "mean_edge_count_stderr": mean_e_err,
        "clamped_low": clamp.clamped_low,
        "clamped_high": clamp.clamped_high,
        "kernel": kernel.name,
        "kernel_params": kernel.params(),
        "clamp_policy": kernel.clamp_policy.value,
        "pooling": POOLING,
        "realized_degree_sums": {"count": count, "s1": s1, "s2": s2, "s3": s3},
        "predicted_r_from_realized_degrees": predict_r_from_sums(count, s1, s2, s3),
    }
    if kernel.clamp_policy is ClampPolicy.CLAMP:
        payload["warning"] = (
            "clamp policy active: pair probabilities were forced into [0, 1] "
            f"for {clamp.clamped_low + clamp.clamped_high} pair draws"
        )
    meta = {"version": __version__, "config": config, "pooling": POOLING}
    for name, spectrum in (("knn", summary.knn_spectrum), ("clustering", summary.clustering_spectrum)):
        text = _csv_text(SPECTRUM_HEADER, spectrum.rows, {**meta, "quantity": name})
        _write_text(out / f"{name}_spectrum.csv", text)
    hist_rows = sorted(summary.degree_histogram.items())
    _write_text(out / "degree_histogram.csv", _csv_text(["degree", "count"], hist_rows, meta))
    _write_text(out / "summary.json", _dumps(payload) + "\n")
    print(_dumps({"out_dir": str(out), "realizations": summary.realizations,
                  "mean_r": mean_r, "mean_clustering": mean_c}))
    return EXIT_OK


# ---- predict ----


def cmd_predict(args) -> int:
    seq = read_sequence(args.seq)
    pred = predict(seq)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    config = {"command": "predict", **_sequence_config(args)}
    meta = {"version": __version__, "config": config}
    degrees = range(seq.k_min, seq.k_max + 1)
    _write_text(out / "prediction.csv", _csv_text(PREDICTION_HEADER, pred.table(degrees), meta))
    scalars = pred.scalars()
    _write_text(out / "scalars.csv", _csv_text(SCALAR_HEADER, [[scalars[k] for k in SCALAR_HEADER]], meta))
    print(_dumps({**scalars, "version": __version__, "config": config}))
    return EXIT_OK


# ---- compare ----


def _load_scalars(path) -> dict:
    _, rows = read_commented_csv(path)
    if len(rows) != 1:
        raise InvalidParams(f"{path}: expected exactly one scalar row")
    row = rows[0]
    out = {}
    for key in SCALAR_HEADER:
        value = row.get(key, "")
        out[key] = None if value == "" else (int(value) if key == "n" else float(value))
    return out


def _deviation(sim: float, err: float, pred: float):
    if err > 0:
        return (sim - pred) / err
    return 0.0 if sim == pred else None


def compare_runs(ens_dir, pred_dir, tolerances: dict) -> dict:
    ens_dir, pred_dir = Path(ens_dir), Path(pred_dir)
    summary = json.loads((ens_dir / "summary.json").read_text(encoding="utf-8"))
    scalars = _load_scalars(pred_dir / "scalars.csv")
    _, knn = read_spectrum(ens_dir / "knn_spectrum.csv")
    _, cc = read_spectrum(ens_dir / "clustering_spectrum.csv")
    _, pred_rows = read_commented_csv(pred_dir / "prediction.csv")

    if summary["n"] != scalars["n"] or not math.isclose(summary["z"], scalars["z"], rel_tol=1e-12):
        raise InvalidParams(
            f"ensemble (n={summary['n']}, z={summary['z']}) and prediction "
            f"(n={scalars['n']}, z={scalars['z']}) come from different sequences"
        )
    n, z, p = scalars["n"], scalars["z"], scalars["p"]
    predicted = {int(r["degree"]): (float(r["knn_pred"]), float(r["c_pred"])) for r in pred_rows}

    rows = []
    for d, m, s, c in knn.rows:
        if d in predicted:
            rows.append({"quantity": "knn", "degree": d, "simulated": m, "stderr": s, "count": c,
                         "predicted": predicted[d][0], "deviation": _deviation(m, s, predicted[d][0])})
    for d, m, s, c in cc.rows:
        if d in predicted:
            rows.append({"quantity": "clustering", "degree": d, "simulated": m, "stderr": s, "count": c,
                         "predicted": predicted[d][1], "deviation": _deviation(m, s, predicted[d][1])})

    min_count = tolerances["min_count"]
    checks = {}

    def power_check(name, spectrum, offset, tol, min_r2):
        try:
            fit = fit_power_slope(spectrum, offset, min_count)
        except InsufficientData as exc:
            checks[name] = {"passed": False, "error": str(exc)}
            return
        ok = abs(fit.slope + 1.0) <= tol and (min_r2 is None or fit.r_squared >= min_r2)
        checks[name] = {"passed": bool(ok), "slope": fit.slope, "intercept": fit.intercept,
                        "r_squared": fit.r_squared, "points": fit.points,
                        "target_slope": -1.0, "tolerance": tol, "min_r_squared": min_r2}

    power_check("knn_power_law", knn, z, tolerances["knn_slope_tol"], tolerances["min_r2"])
    power_check("clustering_power_law", cc, p, tolerances["c_slope_tol"], None)
    try:
        fit = fit_linear(knn, cc, min_count)
    except InsufficientData as exc:
        checks["linear_law"] = {"passed": False, "error": str(exc)}
    else:
        slope_target, icpt_target = 2.0 / n, -p
        slope_ok = abs(fit.slope - slope_target) <= tolerances["linear_slope_rtol"] * abs(slope_target)
        icpt_ok = abs(fit.intercept - icpt_target) <= tolerances["intercept_rtol"] * abs(icpt_target)
        checks["linear_law"] = {"passed": bool(slope_ok and icpt_ok), "slope": fit.slope,
                                "intercept": fit.intercept, "r_squared": fit.r_squared,
                                "points": fit.points, "target_slope": slope_target,
                                "target_intercept": icpt_target,
                                "slope_rtol": tolerances["linear_slope_rtol"],
                                "intercept_rtol": tolerances["intercept_rtol"]}
    return {
        "version": __version__,
        "n": n,
        "z": z,
        "p": p,
        "tolerances": tolerances,
        "checks": checks,
        "passed": all(c["passed"] for c in checks.values()),
        "scalars": {
            "mean_r": summary.get("mean_r"),
            "mean_r_stderr": summary.get("mean_r_stderr"),
            "predicted_r": scalars["r"],
            "mean_clustering": summary.get("mean_clustering"),
            "mean_clustering_stderr": summary.get("mean_clustering_stderr"),
            "predicted_mean_clustering": scalars["mean_clustering"],
        },
        "deviations": rows,
    }


def cmd_compare(args) -> int:
    tolerances = {
        "min_count": args.min_count,
        "knn_slope_tol": args.knn_slope_tol,
        "c_slope_tol": args.c_slope_tol,
        "linear_slope_rtol": args.linear_slope_rtol,
        "intercept_rtol": args.intercept_rtol,
        "min_r2": args.min_r2,
    }
    report = compare_runs(args.ensemble, args.prediction, tolerances)
    text = _dumps(report) + "\n"
    if args.output:
        _write_text(Path(args.output), text)
    print(text, end="")
    if not report["passed"]:
        failed = [k for k, v in report["checks"].items() if not v["passed"]]
        _error("tolerance check failed: " + ", ".join(failed))
        return EXIT_TOLERANCE
    return EXIT_OK


# ---- argument parsing ----


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be in [0, 2**64)")
    return value


def _add_kernel_args(p, clamp=True):
    p.add_argument("--seq", required=True, type=Path, help="degree sequence file, one integer per line")
    p.add_argument("--kernel", choices=KERNEL_NAMES, default="additive")
    p.add_argument("--p", type=float, default=None, help="probability for --kernel constant (default: z/N)")
    if clamp:
        p.add_argument("--clamp", action="store_true",
                       help="clamp out-of-range probabilities instead of failing")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="addgraph", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"addgraph {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("genseq", help="generate a desired degree sequence")
    p.add_argument("--dist", choices=["powerlaw", "poisson", "regular", "file"], required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--gamma", type=float, default=2.5)
    p.add_argument("--kmin", type=int, default=1)
    p.add_argument("--kmax", type=int, default=None, help="default: n - 1")
    p.add_argument("--mean", type=float)
    p.add_argument("--k", type=int)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--input", type=Path, help="source file for --dist file")
    p.add_argument("-o", "--output", type=Path, required=True)
    p.set_defaults(func=cmd_genseq)

    p = sub.add_parser("validate", help="count vertex pairs with probability outside [0, 1]")
    _add_kernel_args(p, clamp=False)
    p.add_argument("--full", action="store_true", help="enumerate every vertex pair")
    p.set_defaults(func=cmd_validate, clamp=False)

    p = sub.add_parser("sample", help="write one realization as an edge list")
    _add_kernel_args(p)
    p.add_argument("--seed", type=_seed, required=True, help="master seed")
    p.add_argument("--index", type=int, default=0, help="realization index")
    p.add_argument("-o", "--output", type=Path, required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("ensemble", help="simulate realizations and write spectra")
    _add_kernel_args(p)
    p.add_argument("--realizations", type=int, required=True)
    p.add_argument("--seed", type=_seed, required=True, help="master seed")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out-dir", type=Path, required=True)
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("predict", help="closed-form spectra and scalars for a sequence")
    p.add_argument("--seq", required=True, type=Path)
    p.add_argument("--out-dir", type=Path, required=True)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("compare", help="check simulated spectra against predictions")
    p.add_argument("--ensemble", type=Path, required=True, help="output directory of 'ensemble'")
    p.add_argument("--prediction", type=Path, required=True, help="output directory of 'predict'")
    p.add_argument("--min-count", type=int, default=30)
    p.add_argument("--knn-slope-tol", type=float, default=0.15)
    p.add_argument("--c-slope-tol", type=float, default=0.2)
    p.add_argument("--linear-slope-rtol", type=float, default=0.15)
    p.add_argument("--intercept-rtol", type=float, default=0.25)
    p.add_argument("--min-r2", type=float, default=0.9)
    p.add_argument("-o", "--output", type=Path)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors, which here means an infeasible kernel
        return EXIT_PRECONDITION if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InfeasiblePair as exc:
        _error(exc)
        return EXIT_INFEASIBLE
    except (InvalidParams, AddgraphError, OSError, ValueError) as exc:
        _error(exc)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
