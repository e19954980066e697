"""Command-line orchestrator.

Subcommands: stats, cluster, oversample, experiment, toy-gen. All runs are
driven by a YAML config file; every output embeds the config hash and the
global seed so identical configs produce byte-identical artifacts.

Exit codes: 0 success, 1 computation error, 2 usage/config error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import replace

import numpy as np

from .arff_io import ArffError, write_mulan
from .clustering import kmeans
from .config import ConfigError, ExperimentConfig, load_config
from .dataset import DatasetError, compute_stats, filter_labels, make_fold_plan
from .experiment import MethodSpec, run_cv
from .metrics import MetricError
from .oversample import (
    LabelUnusableError,
    OversampleError,
    augment_all,
)
from .ranking import average_ranks, critical_difference_rows, friedman

STATS_COLUMNS = [
    "dataset",
    "instances",
    "inputs",
    "labels",
    "type",
    "cardinality",
    "density",
    "distinct_labelsets",
    "proportion_distinct",
    "ir_min",
    "ir_max",
    "ir_avg",
    "variant",
]


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(float(v))
    return str(v)


def _open_csv(path: str, cfg: ExperimentConfig):
    fh = open(path, "w", encoding="utf-8", newline="")
    fh.write(f"# config_hash={cfg.config_hash()} seed={cfg.seed}\n")
    return fh


def _write_rows(path: str, cfg: ExperimentConfig, header: list[str], rows) -> None:
    with _open_csv(path, cfg) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _stats_row(name: str, ds, variant: str) -> list:
    st = compute_stats(ds)
    return [
        name,
        st.instances,
        st.inputs,
        st.labels,
        ds.feature_type,
        st.cardinality,
        st.density,
        st.distinct_labelsets,
        st.proportion_distinct,
        st.ir_min,
        st.ir_max,
        st.ir_avg,
        variant,
    ]


def cmd_stats(cfg: ExperimentConfig) -> int:
    rows = []
    for source in cfg.datasets:
        ds = source.load()
        if cfg.scale == "minmax":
            from .dataset import scale_min_max

            ds = scale_min_max(ds)
        rows.append(_stats_row(source.name, ds, "raw"))
        try:
            filtered, _ = filter_labels(ds, cfg.max_ir, cfg.min_pos)
            rows.append(_stats_row(source.name, filtered, "filtered"))
        except DatasetError as exc:
            print(f"warning: {source.name}: {exc}", file=sys.stderr)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(STATS_COLUMNS)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    os.makedirs(cfg.out_dir, exist_ok=True)
    _write_rows(os.path.join(cfg.out_dir, "stats.csv"), cfg, STATS_COLUMNS, rows)
    return 0


def cmd_cluster(cfg: ExperimentConfig) -> int:
    os.makedirs(cfg.out_dir, exist_ok=True)
    for source in cfg.datasets:
        ds = cfg.prepare(source.load())
        assign = kmeans(ds.features, cfg.oversample.k_clusters, seed=cfg.oversample.seed)
        _write_rows(
            os.path.join(cfg.out_dir, f"{source.name}__assignments.csv"),
            cfg,
            ["row", "cluster"],
            [(i, int(c)) for i, c in enumerate(assign.assignment)],
        )
        _write_rows(
            os.path.join(cfg.out_dir, f"{source.name}__centroids.csv"),
            cfg,
            ["cluster"] + list(ds.feature_names),
            [
                [p] + [float(v) for v in assign.centroids[p]]
                for p in range(assign.k)
            ],
        )
    return 0


def cmd_oversample(cfg: ExperimentConfig) -> int:
    if cfg.oversample.mode == "none":
        raise ConfigError("oversample mode is 'none': nothing to oversample")
    os.makedirs(cfg.out_dir, exist_ok=True)
    for source in cfg.datasets:
        ds = cfg.prepare(source.load())
        assign = None
        if cfg.oversample.mode == "uclso":
            assign = kmeans(
                ds.features, cfg.oversample.k_clusters, seed=cfg.oversample.seed
            )
        manifest = []
        for l, name in enumerate(ds.label_names):
            try:
                if cfg.oversample.mode == "uclso":
                    from .oversample import uclso_augment

                    aug = uclso_augment(ds, assign, l, cfg.oversample)
                else:
                    from .oversample import smote_augment

                    aug = smote_augment(ds, l, cfg.oversample)
            except LabelUnusableError as exc:
                print(f"warning: skipping label {name!r}: {exc}", file=sys.stderr)
                continue
            header = ["label", "cluster", "r", "parent_u", "parent_v"] + [
                f"feature_{j}" for j in range(ds.d)
            ]
            rows = [
                [name, prov.cluster, prov.r, prov.parent_u, prov.parent_v]
                + [float(v) for v in point]
                for prov, point in zip(aug.extra.provenance, aug.extra.points)
            ]
            _write_rows(
                os.path.join(
                    cfg.out_dir, f"{source.name}__label_{l}__synthetic.csv"
                ),
                cfg,
                header,
                rows,
            )
            counts: dict[int, int] = {}
            for prov in aug.extra.provenance:
                counts[prov.cluster] = counts.get(prov.cluster, 0) + 1
            if not counts:
                manifest.append([name, -1, 0])
            else:
                for cl in sorted(counts):
                    manifest.append([name, cl, counts[cl]])
        _write_rows(
            os.path.join(cfg.out_dir, f"{source.name}__manifest.csv"),
            cfg,
            ["label", "cluster", "count"],
            manifest,
        )
    return 0


def cmd_experiment(cfg: ExperimentConfig, threads: int = 1) -> int:
    os.makedirs(cfg.out_dir, exist_ok=True)
    methods = [
        MethodSpec(name, replace(cfg.oversample, mode=name)) for name in cfg.methods
    ]
    f1_scores = np.zeros((len(cfg.datasets), len(methods)))
    auc_scores = np.zeros_like(f1_scores)
    for di, source in enumerate(cfg.datasets):
        ds = cfg.prepare(source.load())
        plan = make_fold_plan(ds.n, cfg.cv_reps, cfg.cv_folds, cfg.seed)
        reports = run_cv(ds, methods, plan, cfg.train, threads=threads)
        for mi, method in enumerate(methods):
            report = reports[method.name]
            base = f"{source.name}__{method.name}"
            _write_rows(
                os.path.join(cfg.out_dir, f"{base}__cells.csv"),
                cfg,
                ["rep", "fold", "label", "metric", "value"],
                report.rows(),
            )
            summary = report.summary()
            summary["config_hash"] = cfg.config_hash()
            summary["dataset"] = source.name
            with open(
                os.path.join(cfg.out_dir, f"{base}__summary.json"),
                "w",
                encoding="utf-8",
            ) as fh:
                json.dump(summary, fh, sort_keys=True, indent=2)
                fh.write("\n")
            f1_scores[di, mi] = summary["macro_f1_mean"]
            auc_scores[di, mi] = summary["macro_auc_mean"]

    if len(cfg.datasets) >= 2 and len(methods) >= 2:
        names = [m.name for m in methods]
        ds_names = [s.name for s in cfg.datasets]
        for metric, scores in (("f1", f1_scores), ("auc", auc_scores)):
            rt = average_ranks(scores, names, ds_names, higher_is_better=True)
            rank_rows = [
                [ds_names[i]]
                + [v for pair in zip(rt.scores[i], rt.ranks[i]) for v in pair]
                for i in range(len(ds_names))
            ]
            rank_rows.append(
                ["average_rank"]
                + [v for a in rt.average_ranks for v in ("", float(a))]
            )
            header = ["dataset"] + [
                col for n in names for col in (f"{n}_score", f"{n}_rank")
            ]
            _write_rows(
                os.path.join(cfg.out_dir, f"rank_{metric}.csv"), cfg, header, rank_rows
            )
            result = friedman(rt)
            fr_rows = [
                ["chi_square", result.chi_square],
                ["dof", result.dof],
                ["p_value", result.p_value],
                ["control", result.control],
                ["alpha", result.alpha],
            ]
            for comp in result.comparisons:
                fr_rows.append(
                    [
                        f"vs_{comp.method}",
                        comp.z,
                        comp.p_raw,
                        comp.p_adjusted,
                        int(comp.significant),
                    ]
                )
            _write_rows(
                os.path.join(cfg.out_dir, f"friedman_{metric}.csv"),
                cfg,
                ["field", "value", "p_raw", "p_adjusted", "significant"],
                fr_rows,
            )
            _write_rows(
                os.path.join(cfg.out_dir, f"cd_{metric}.csv"),
                cfg,
                ["method", "avg_rank", "group"],
                critical_difference_rows(rt, result),
            )
    return 0


def cmd_toy_gen(cfg: ExperimentConfig) -> int:
    os.makedirs(cfg.out_dir, exist_ok=True)
    wrote = 0
    for source in cfg.datasets:
        if source.toy is None:
            continue
        ds = source.load()
        write_mulan(
            ds,
            os.path.join(cfg.out_dir, f"{source.name}.arff"),
            os.path.join(cfg.out_dir, f"{source.name}.xml"),
            relation=source.name,
        )
        wrote += 1
    if wrote == 0:
        raise ConfigError("toy-gen: config contains no toy datasets")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uclso",
        description="Cluster-guarded label-specific oversampling toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("stats", "emit raw and filtered dataset statistics as CSV"),
        ("cluster", "run k-means and dump assignments and centroids"),
        ("oversample", "export per-label synthetic point sets and a manifest"),
        ("experiment", "run the cross-validation experiment for each method"),
        ("toy-gen", "write configured toy datasets as ARFF + XML"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="YAML experiment config")
        p.add_argument("--seed", type=int, default=None, help="override config seed")
        p.add_argument("--out", default=None, help="override output directory")
        p.add_argument(
            "--threads",
            type=int,
            default=1,
            help="worker threads (speed only, never results)",
        )
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config, args.seed, args.out)
        if args.command == "stats":
            return cmd_stats(cfg)
        if args.command == "cluster":
            return cmd_cluster(cfg)
        if args.command == "oversample":
            return cmd_oversample(cfg)
        if args.command == "experiment":
            return cmd_experiment(cfg, threads=max(1, args.threads))
        if args.command == "toy-gen":
            return cmd_toy_gen(cfg)
        parser.error(f"unknown command {args.command}")
    except (ConfigError, ArffError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DatasetError, OversampleError, MetricError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
