"""Command-line interface: ``r2c {fit,simulate,bench,metrics}``.

Exit codes: 0 success, 2 parse or configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import kernels
from .baseline import fit_gmm_joint
from .bench import COLUMNS, SUMMARY_COLUMNS, run_bench, summarize
from .conquer import parse_policy, r2c_cluster
from .errors import ConfigError, FitFailed, R2CError
from .io import csv_text, read_labels, read_table, write_csv, write_json
from .metrics import agreement_metrics, confusion_matrix, pair_counts
from .mixture1d import FitConfig
from .reference import PUBLISHED
from .synthgen import ScenarioSpec, generate_scenario

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _add_fit_flags(p):
    p.add_argument("--kmax", type=_positive_int, default=6, help="largest marginal component count (default 6)")
    p.add_argument("--restarts", type=_positive_int, default=8, help="EM restarts per component count (default 8)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=_positive_int, default=os.cpu_count() or 1)


def build_parser():
    parser = argparse.ArgumentParser(prog="r2c", description="Reign-and-Conquer clustering")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="cluster a CSV matrix")
    p.add_argument("--input", required=True)
    p.add_argument("--output-dir", required=True)
    p.add_argument("--policy", choices=("fixed", "plateau", "edge"), default="fixed")
    p.add_argument("--u", type=float, default=0.1, help="sieve size for --policy fixed (default 0.1)")
    _add_fit_flags(p)
    p.add_argument("--truth", help="CSV of true classes, one per input row")
    p.add_argument("--truth-column", help="input column (name or 0-based index) holding true classes")
    p.add_argument("--baseline", action="store_true", help="also fit the joint full-covariance GMM")
    p.add_argument("--reference", choices=sorted(PUBLISHED), help="attach published results for this dataset")

    p = sub.add_parser("simulate", help="draw a labeled sample from a scenario")
    p.add_argument("--scenario", choices=("s1", "s2", "s3"), required=True)
    p.add_argument("--n", type=_positive_int, default=500)
    p.add_argument("--d", type=_positive_int, default=None)
    p.add_argument("--theta", type=float, default=2.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default="-", help="points CSV (default stdout)")
    p.add_argument("--labels", help="write generating labels here")

    p = sub.add_parser("bench", help="Monte Carlo agreement study")
    p.add_argument("--scenario", choices=("s1", "s2", "s3"), required=True)
    p.add_argument("--n", type=_int_list, default=[50, 100, 250, 500, 1000], help="sample sizes (s1, s2)")
    p.add_argument("--d", type=_int_list, default=[5, 10, 15, 20], help="dimensions (s3)")
    p.add_argument("--reps", type=_positive_int, default=50)
    p.add_argument("--policies", default="fixed,plateau,edge")
    p.add_argument("--u", type=float, default=0.1)
    p.add_argument("--theta", type=float, default=2.0)
    _add_fit_flags(p)
    p.add_argument("--no-baseline", action="store_true", help="skip the joint GMM comparator")
    p.add_argument("--output", default="-", help="per-replicate metrics CSV (default stdout)")
    p.add_argument("--summary", help="aggregate CSV (default: <output>_summary.csv, or stderr)")

    p = sub.add_parser("metrics", help="agreement between two labelings")
    p.add_argument("--labels-a", required=True)
    p.add_argument("--labels-b", required=True)
    return parser


def _fit_config(args):
    return FitConfig(k_max=args.kmax, restarts=args.restarts, seed=args.seed)


def _confusion_json(table):
    return {
        "clusters": [str(v) for v in table.row_labels],
        "classes": [str(v) for v in table.col_labels],
        "counts": table.counts.tolist(),
    }


def cmd_fit(args):
    if args.truth and args.truth_column is not None:
        raise ConfigError("use either --truth or --truth-column, not both")
    policy = parse_policy(args.policy, args.u)
    config = _fit_config(args)
    table, truth = read_table(args.input, label_column=args.truth_column)
    if args.truth:
        truth = read_labels(args.truth)
        if truth.size != table.data.shape[0]:
            raise ConfigError(f"--truth has {truth.size} labels for {table.data.shape[0]} rows")
    x = table.data
    labels, report = r2c_cluster(x, config, policy, threads=args.threads)
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    n, d = x.shape

    write_csv(out / "labels.csv", ["row_index", "label"], enumerate(labels.tolist()))
    write_csv(
        out / "marginal_labels.csv",
        ["row_index"] + [f"label_margin_{j + 1}" for j in range(d)],
        ([i, *row] for i, row in enumerate(report.marginal_labels.tolist())),
    )
    write_csv(out / "conquer.csv", ["level", "jump", "c_value"], report.conquer_function.rows())

    counts = report.table.counts
    doc = {
        "input": str(args.input),
        "columns": table.header,
        "n": n,
        "d": d,
        "policy": policy.name,
        "u_requested": policy.u if policy.name == "fixed" else None,
        "u_selected": report.u_selected,
        "k_per_margin": report.k_per_margin,
        "margins": [
            {
                "k": f.model.k,
                "weights": f.model.weights,
                "means": f.model.means,
                "variances": f.model.variances,
                "loglik": f.loglik,
                "bic": f.bic,
            }
            for f in report.margin_fits
        ],
        "grid_cells": report.table.total_cells,
        "nonempty_cells": report.table.nonempty_cells,
        "final_k": report.final_k,
        "survivors": [
            {"label": i, "cell": list(cell), "center": center, "count": counts[cell], "mass": counts[cell] / n}
            for i, (cell, center) in enumerate(report.result.survivors)
        ],
        "conquering_function": [
            {"level": lv, "jump": j, "c_value": c} for lv, j, c in report.conquer_function.rows()
        ],
        "warnings": list(report.warnings),
        "fit_config": {
            "k_max": config.k_max,
            "restarts": config.restarts,
            "tol": config.tol,
            "max_iter": config.max_iter,
            "variance_floor_factor": config.variance_floor_factor,
            "seed": config.seed,
        },
        "backend": kernels.backend(),
        "runtime_seconds": report.runtime,
    }
    if truth is not None:
        cm = confusion_matrix(labels, truth)
        write_csv(
            out / "confusion.csv",
            ["cluster"] + [str(c) for c in cm.col_labels],
            ([str(r), *row] for r, row in zip(cm.row_labels, cm.counts.tolist())),
        )
        doc["confusion_matrix"] = _confusion_json(cm)
        doc["agreement"] = agreement_metrics(labels, truth).as_dict()
    if args.baseline:
        model, base_labels, bic = fit_gmm_joint(x, config.k_max, config)
        base = {"k": model.k, "bic": bic}
        if truth is not None:
            base["confusion_matrix"] = _confusion_json(confusion_matrix(base_labels, truth))
            base["agreement"] = agreement_metrics(base_labels, truth).as_dict()
        doc["baseline_gmm"] = base
    if args.reference:
        doc["published_reference"] = PUBLISHED[args.reference]
    write_json(out / "report.json", doc)
    print(f"final_k={report.final_k} u={report.u_selected:.6g} k_per_margin={report.k_per_margin} -> {out}")
    return EXIT_OK


def cmd_simulate(args):
    spec = ScenarioSpec(args.scenario, n=args.n, d=args.d, theta=args.theta, seed=args.seed)
    sample = generate_scenario(spec)
    header = [f"x{j + 1}" for j in range(sample.points.shape[1])]
    text = csv_text(header, sample.points.tolist())
    if args.output == "-":
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text, encoding="utf-8")
    if args.labels:
        write_csv(args.labels, ["row_index", "label"], enumerate(sample.labels.tolist()))
    for note in sample.notes:
        print(f"note: {note}", file=sys.stderr)
    return EXIT_OK


def cmd_bench(args):
    policies = [parse_policy(name.strip(), args.u) for name in args.policies.split(",") if name.strip()]
    settings = args.d if args.scenario == "s3" else args.n
    rows = run_bench(
        args.scenario,
        settings,
        args.reps,
        policies,
        seed=args.seed,
        theta=args.theta,
        fit_config=_fit_config(args),
        baseline=not args.no_baseline,
        threads=args.threads,
    )
    text = csv_text(COLUMNS, rows)
    summary = csv_text(SUMMARY_COLUMNS, summarize(rows))
    if args.output == "-":
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text, encoding="utf-8")
    summary_path = args.summary
    if summary_path is None and args.output != "-":
        path = Path(args.output)
        summary_path = str(path.with_name(path.stem + "_summary.csv"))
    if summary_path:
        Path(summary_path).write_text(summary, encoding="utf-8")
    else:
        sys.stderr.write(summary)
    return EXIT_OK


def cmd_metrics(args):
    a = read_labels(args.labels_a)
    b = read_labels(args.labels_b)
    pc = pair_counts(a, b)
    doc = {"n": int(a.size), **agreement_metrics(a, b).as_dict(),
           "pairs": {"a": pc.a, "b": pc.b, "c": pc.c, "d": pc.d_}}
    print(json.dumps(doc, indent=2))
    return EXIT_OK


COMMANDS = {"fit": cmd_fit, "simulate": cmd_simulate, "bench": cmd_bench, "metrics": cmd_metrics}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (FitFailed, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"r2c: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (R2CError, ValueError, OSError) as exc:
        print(f"r2c: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
