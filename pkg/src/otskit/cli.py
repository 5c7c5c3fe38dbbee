"""Command-line interface.

Every subcommand prints a JSON payload to stdout (or writes it to --out);
matrix-valued results go to CSV files, and plotting commands write an SVG
plus a CSV holding exactly the plotted values. Exit codes: 0 success,
2 validation/usage error, 1 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .core import OrdinalSeries, StateSpace, build_state_distance
from .dependence import (
    mixed_linear_correlations,
    mixed_quantile_correlations,
    total_c_cor,
    total_mixed_c_cor,
    total_mixed_c_qcor,
)
from .features import marginal_feature_set
from .inference import (
    ci_marginal_feature,
    holm_adjust,
    kappa_diagnostics,
    test_marginal_feature,
)
from .io import (
    format_float,
    load_column_series,
    load_dataset,
    load_numeric_column,
    read_matrix_csv,
    resolve_benchmark_config,
    to_jsonable,
    write_dataset,
    write_matrix_csv,
)
from .mining import (
    DistanceMatrix,
    adjusted_rand_index,
    classical_mds,
    detect_outliers,
    kmeans_cluster,
    marginal_serial_feature_matrix,
    pairwise_distance_matrix,
    pam_cluster,
)
from .probabilities import (
    c_joint_probabilities,
    c_marginal_probabilities,
    joint_probabilities,
    marginal_probabilities,
)
from .simulate import GeneratorSpec, make_benchmark_dataset, simulate


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(to_jsonable(payload), indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _series(args) -> OrdinalSeries:
    return load_column_series(args.input, StateSpace(args.states))


def _distance(args, series: OrdinalSeries):
    return build_state_distance(args.distance, series.state_space)


def _parse_labels(text: str) -> list:
    p = Path(text)
    if p.exists():
        return [line.strip() for line in p.read_text().splitlines() if line.strip()]
    return [t.strip() for t in text.split(",") if t.strip()]


def _read_feature_rows(path) -> np.ndarray:
    """Numeric feature matrix; a header row is skipped and any column named
    Class is dropped."""
    import csv as _csv

    with open(path, newline="") as fh:
        rows = [r for r in _csv.reader(fh) if any(c.strip() for c in r)]
    if not rows:
        raise ValueError(f"{path}: empty feature matrix")
    drop = None
    try:
        [float(c) for c in rows[0]]
    except ValueError:
        header = [c.strip() for c in rows[0]]
        if "Class" in header:
            drop = header.index("Class")
        rows = rows[1:]
    data = np.array([[float(c) for c in r] for r in rows])
    if drop is not None:
        data = np.delete(data, drop, axis=1)
    return data


def _cmd_probs(args) -> int:
    series = _series(args)
    if args.lag is None:
        if args.cumulative:
            payload = {"f": c_marginal_probabilities(series)}
        else:
            payload = {"p": marginal_probabilities(series)}
    else:
        if args.cumulative:
            payload = {"lag": args.lag, "f_joint": c_joint_probabilities(series, args.lag)}
        else:
            payload = {"lag": args.lag, "p_joint": joint_probabilities(series, args.lag)}
    if args.out and args.out.endswith(".csv"):
        key = next(k for k in ("p", "f", "p_joint", "f_joint") if k in payload)
        write_matrix_csv(args.out, payload[key])
        _emit({"out": args.out}, None)
    else:
        _emit(payload, args.out)
    return 0


def _cmd_features(args) -> int:
    series = _series(args)
    dist = _distance(args, series)
    feats = marginal_feature_set(series, dist, normalized=args.normalized)
    payload = {"distance": dist.kind, **feats.as_dict()}
    _emit(payload, args.out)
    return 0


def _cmd_kappa(args) -> int:
    series = _series(args)
    diag = kappa_diagnostics(series, max_lag=args.max_lag, alpha=args.alpha)
    lower, upper = diag.critical_pair
    payload = {
        "lags": diag.lags,
        "kappas": diag.kappas,
        "p_values": diag.p_values,
        "alpha": diag.alpha,
        "critical_values": {"lower": lower, "upper": upper},
    }
    if args.plot:
        from .plots import render_kappa_plot

        artifact = render_kappa_plot(diag, args.plot)
        payload["plot"] = {"svg": str(artifact.svg_path), "data_csv": str(artifact.data_path)}
    _emit(payload, args.out)
    return 0


def _cmd_tcc(args) -> int:
    series = _series(args)
    if args.features:
        psi = total_c_cor(series, args.lag, features=True)
        if args.out and args.out.endswith(".csv"):
            write_matrix_csv(args.out, psi)
            _emit({"out": args.out}, None)
        else:
            _emit({"lag": args.lag, "psi": psi}, args.out)
    else:
        _emit({"lag": args.lag, "tcc": total_c_cor(series, args.lag)}, args.out)
    return 0


def _cmd_mixed_cor(args) -> int:
    series = _series(args)
    z = load_numeric_column(args.covariate)
    if args.features:
        payload = {
            "lag": args.lag,
            "linear_correlations": mixed_linear_correlations(series, z, args.lag),
            "quantile_correlations": mixed_quantile_correlations(
                series, z, args.lag, rho=args.rho
            ),
            "rho": args.rho,
        }
    else:
        payload = {
            "lag": args.lag,
            "tmclc": total_mixed_c_cor(series, z, args.lag, index_mode=args.index_mode),
            "tmcqc": total_mixed_c_qcor(
                series, z, args.lag, nodes=args.nodes, index_mode=args.index_mode
            ),
        }
    _emit(payload, args.out)
    return 0


def _cmd_test(args) -> int:
    series = _series(args)
    dist = _distance(args, series)
    result = test_marginal_feature(
        series,
        dist,
        args.feature,
        h0=args.h0,
        alpha=args.alpha,
        temporal=not args.iid,
        bandwidth=args.bandwidth,
        se_method=args.se_method,
        n_resamples=args.resamples,
        seed=args.seed,
    )
    _emit(
        {
            "feature": args.feature,
            "statistic": result.statistic,
            "p_value": result.p_value,
            "critical_value": result.critical_value,
            "alpha": result.alpha,
            "h0": result.h0_value,
            "mode": result.mode,
            "estimate": result.estimate,
            "se": result.se,
            "reject": result.reject,
        },
        args.out,
    )
    return 0


def _cmd_ci(args) -> int:
    series = _series(args)
    dist = _distance(args, series)
    ci = ci_marginal_feature(
        series,
        dist,
        args.feature,
        level=args.level,
        temporal=not args.iid,
        bandwidth=args.bandwidth,
        se_method=args.se_method,
        n_resamples=args.resamples,
        seed=args.seed,
    )
    _emit(
        {"feature": args.feature, "lower": ci.lower, "upper": ci.upper, "level": ci.level},
        args.out,
    )
    return 0


def _cmd_holm(args) -> int:
    p_values = [float(v) for v in args.p.split(",") if v.strip()]
    _emit({"p_values": p_values, "adjusted": holm_adjust(p_values)}, args.out)
    return 0


def _cmd_dist(args) -> int:
    dataset = load_dataset(args.manifest)
    dm = pairwise_distance_matrix(
        dataset, metric=args.metric, max_lag=args.max_lag, squared=not args.root
    )
    write_matrix_csv(args.out, dm.full())
    _emit({"out": args.out, "size": dm.size, "metric": args.metric, "squared": not args.root}, None)
    return 0


def _cmd_mds(args) -> int:
    dm = DistanceMatrix.from_full(read_matrix_csv(args.dist_matrix))
    coords = classical_mds(dm, dims=args.dims)
    labels = _parse_labels(args.labels) if args.labels else None
    if labels is not None and len(labels) != dm.size:
        raise ValueError(f"{len(labels)} labels for {dm.size} points")
    payload: dict = {"dims": args.dims}
    if args.out and args.out.endswith(".csv"):
        header = [f"coord_{i}" for i in range(args.dims)]
        write_matrix_csv(args.out, coords, header=header)
        payload["out"] = args.out
    else:
        payload["coordinates"] = coords
    if args.plot:
        from .plots import render_scaling_plot

        artifact = render_scaling_plot(coords[:, :2], args.plot, labels=labels)
        payload["plot"] = {"svg": str(artifact.svg_path), "data_csv": str(artifact.data_path)}
    _emit(payload, args.out if not (args.out and args.out.endswith(".csv")) else None)
    return 0


def _cmd_pam(args) -> int:
    dm = DistanceMatrix.from_full(read_matrix_csv(args.dist_matrix))
    result = pam_cluster(dm, args.k)
    _emit(
        {"k": args.k, "labels": result.labels, "medoids": list(result.medoids), "cost": result.cost},
        args.out,
    )
    return 0


def _cmd_kmeans(args) -> int:
    rows = _read_feature_rows(args.features_csv)
    result = kmeans_cluster(rows, args.k, seed=args.seed, n_restarts=args.restarts)
    _emit({"k": args.k, "seed": args.seed, "labels": result.labels, "inertia": result.inertia}, args.out)
    return 0


def _cmd_ari(args) -> int:
    a = _parse_labels(args.labels_a)
    b = _parse_labels(args.labels_b)
    _emit({"ari": adjusted_rand_index(a, b)}, args.out)
    return 0


def _cmd_outliers(args) -> int:
    dm = DistanceMatrix.from_full(read_matrix_csv(args.dist_matrix))
    report = detect_outliers(dm, range_coef=args.range_coef)
    payload = {
        "scores": report.scores,
        "ranking": report.ranking,
        "flags": report.fence_flags,
        "upper_fence": report.upper_fence,
    }
    if args.top:
        payload["top"] = report.ranking[: args.top]
    if args.plot:
        from .plots import render_outlier_boxplot

        artifact = render_outlier_boxplot(
            report.scores,
            args.plot,
            range_coef=args.range_coef,
            flags=report.fence_flags,
            upper_fence=report.upper_fence,
        )
        payload["plot"] = {"svg": str(artifact.svg_path), "data_csv": str(artifact.data_path)}
    _emit(payload, args.out)
    return 0


def _cmd_simulate(args) -> int:
    if args.config:
        spec = resolve_benchmark_config(args.config)
        if args.per_group:
            from dataclasses import replace

            spec = replace(spec, per_group=args.per_group)
        dataset = make_benchmark_dataset(spec, seed=args.seed)
        manifest = write_dataset(dataset, args.out_dir, name=spec.name)
        _emit(
            {
                "manifest": str(manifest),
                "series": len(dataset),
                "groups": len(spec.groups),
                "per_group": spec.per_group,
                "seed": args.seed,
            },
            None,
        )
        return 0
    if not args.family:
        raise ValueError("simulate needs either --config or --family")
    params = json.loads(args.params) if args.params else {}
    spec = GeneratorSpec(
        family=args.family, n=args.n, params=params, length=args.length, seed=args.seed
    )
    series = simulate(spec)
    if args.out:
        Path(args.out).write_text("\n".join(str(c) for c in series.codes) + "\n")
        _emit({"out": args.out, "length": len(series), "seed": args.seed}, None)
    else:
        _emit({"codes": series.codes, "seed": args.seed}, None)
    return 0


def _cmd_export_features(args) -> int:
    dataset = load_dataset(args.manifest)
    dist = build_state_distance(args.distance, dataset.state_space)
    lags = tuple(int(v) for v in args.lags.split(","))
    fm = marginal_serial_feature_matrix(dataset, dist, kappa_lags=lags)
    header = fm.column_names
    rows = fm.values
    if dataset.class_labels is not None:
        header = header + ["Class"]
        rows = np.column_stack([rows, np.asarray(dataset.class_labels, dtype=float)])
    with open(args.out, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            cells = [format_float(v) for v in row[: len(fm.column_names)]]
            if dataset.class_labels is not None:
                cells.append(str(int(row[-1])))
            fh.write(",".join(cells) + "\n")
    _emit({"out": args.out, "rows": rows.shape[0], "columns": header}, None)
    return 0


def _cmd_plot(args) -> int:
    series = _series(args)
    from .plots import render_series_plot

    artifact = render_series_plot(series, args.out)
    _emit({"svg": str(artifact.svg_path), "data_csv": str(artifact.data_path)}, None)
    return 0


def _add_series_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="column file with one code per line")
    p.add_argument("--states", required=True, type=int, help="number of states (n+1)")


def _add_out(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write the JSON/CSV payload here instead of stdout")


def _add_inference_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--distance", default="block", help="state distance kind")
    p.add_argument("--iid", action="store_true", help="assume i.i.d. observations")
    p.add_argument("--bandwidth", type=int, default=None, help="long-run covariance bandwidth")
    p.add_argument("--se-method", default="delta", choices=["delta", "bootstrap"])
    p.add_argument("--resamples", type=int, default=1000, help="bootstrap resamples")
    p.add_argument("--seed", type=int, default=0, help="bootstrap seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ots",
        description="Ordinal time series features, inference, dissimilarity mining "
        "and simulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("probs", help="marginal/joint (cumulative) probabilities")
    _add_series_args(p)
    p.add_argument("--lag", type=int, default=None, help="lag for joint probabilities")
    p.add_argument("--cumulative", action="store_true")
    _add_out(p)
    p.set_defaults(func=_cmd_probs)

    p = sub.add_parser("features", help="the six marginal features")
    _add_series_args(p)
    p.add_argument("--distance", default="block")
    p.add_argument("--normalized", action="store_true")
    _add_out(p)
    p.set_defaults(func=_cmd_features)

    p = sub.add_parser("kappa", help="serial dependence diagnostics (block distance)")
    _add_series_args(p)
    p.add_argument("--max-lag", type=int, default=10)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--plot", help="write the serial dependence plot to this SVG path")
    _add_out(p)
    p.set_defaults(func=_cmd_kappa)

    p = sub.add_parser("tcc", help="total cumulative correlation")
    _add_series_args(p)
    p.add_argument("--lag", type=int, required=True)
    p.add_argument("--features", action="store_true", help="return the correlation matrix")
    _add_out(p)
    p.set_defaults(func=_cmd_tcc)

    p = sub.add_parser("mixed-cor", help="ordinal/numeric cross-dependence measures")
    _add_series_args(p)
    p.add_argument("--covariate", required=True, help="one real value per line")
    p.add_argument("--lag", type=int, required=True)
    p.add_argument("--rho", type=float, default=0.5, help="probability level for --features")
    p.add_argument("--nodes", type=int, default=100, help="quantile-integration nodes")
    p.add_argument("--features", action="store_true", help="return the correlation vectors")
    p.add_argument("--index-mode", default="definitional", choices=["definitional", "estimation"])
    _add_out(p)
    p.set_defaults(func=_cmd_mixed_cor)

    p = sub.add_parser("test", help="test a marginal feature against a null value")
    _add_series_args(p)
    p.add_argument("--feature", required=True, choices=["dispersion", "asymmetry", "skewness"])
    p.add_argument("--h0", type=float, required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    _add_inference_args(p)
    _add_out(p)
    p.set_defaults(func=_cmd_test)

    p = sub.add_parser("ci", help="confidence interval for a marginal feature")
    _add_series_args(p)
    p.add_argument("--feature", required=True, choices=["dispersion", "asymmetry", "skewness"])
    p.add_argument("--level", type=float, default=0.95)
    _add_inference_args(p)
    _add_out(p)
    p.set_defaults(func=_cmd_ci)

    p = sub.add_parser("holm", help="Holm step-down p-value adjustment")
    p.add_argument("--p", required=True, help="comma-separated p-values")
    _add_out(p)
    p.set_defaults(func=_cmd_holm)

    p = sub.add_parser("dist", help="pairwise dissimilarity matrix of a dataset")
    p.add_argument("--manifest", required=True)
    p.add_argument("--metric", default="d1", choices=["d1", "dpmf"])
    p.add_argument("--max-lag", type=int, default=2)
    p.add_argument("--root", action="store_true", help="plain Euclidean instead of squared")
    p.add_argument("--out", required=True, help="CSV path for the matrix")
    p.set_defaults(func=_cmd_dist)

    p = sub.add_parser("mds", help="classical 2-D scaling of a distance matrix")
    p.add_argument("--dist-matrix", required=True, help="CSV with the full matrix")
    p.add_argument("--dims", type=int, default=2)
    p.add_argument("--labels", help="comma list or file with one label per point")
    p.add_argument("--plot", help="write the scaling scatter to this SVG path")
    _add_out(p)
    p.set_defaults(func=_cmd_mds)

    p = sub.add_parser("pam", help="partitioning around medoids")
    p.add_argument("--dist-matrix", required=True)
    p.add_argument("--k", type=int, required=True)
    _add_out(p)
    p.set_defaults(func=_cmd_pam)

    p = sub.add_parser("kmeans", help="k-means on a feature matrix CSV")
    p.add_argument("--features-csv", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=10)
    _add_out(p)
    p.set_defaults(func=_cmd_kmeans)

    p = sub.add_parser("ari", help="adjusted Rand index between two labelings")
    p.add_argument("--labels-a", required=True, help="comma list or file")
    p.add_argument("--labels-b", required=True, help="comma list or file")
    _add_out(p)
    p.set_defaults(func=_cmd_ari)

    p = sub.add_parser("outliers", help="distance-based outlier scores and flags")
    p.add_argument("--dist-matrix", required=True)
    p.add_argument("--range-coef", type=float, default=1.0)
    p.add_argument("--top", type=int, default=0, help="also report the top-k ranking")
    p.add_argument("--plot", help="write the score boxplot to this SVG path")
    _add_out(p)
    p.set_defaults(func=_cmd_outliers)

    p = sub.add_parser("simulate", help="generate synthetic series or benchmark datasets")
    p.add_argument("--config", help="benchmark config path or bundled name")
    p.add_argument("--out-dir", default="simulated", help="dataset output directory")
    p.add_argument("--per-group", type=int, default=0, help="override series per group")
    p.add_argument("--family", help="single-series mode: generator family")
    p.add_argument("--n", type=int, default=5, help="largest state index")
    p.add_argument("--length", type=int, default=600)
    p.add_argument("--params", help="single-series mode: JSON parameter record")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="single-series mode: column file path")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("export-features", help="feature matrix CSV for external classifiers")
    p.add_argument("--manifest", required=True)
    p.add_argument("--distance", default="block")
    p.add_argument("--lags", default="1,2", help="kappa lags, comma-separated")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_export_features)

    p = sub.add_parser("plot", help="time plot of a series (states equidistant)")
    _add_series_args(p)
    p.add_argument("--out", required=True, help="SVG path")
    p.set_defaults(func=_cmd_plot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
