"""``driftcast`` command line: fit, label, forecast, evaluate, compare, gen."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from typing import Optional

from . import persistence
from .clustering import DistanceMetric, InitStrategy, lloyd_fit
from .evaluation import GroundTruth, evaluate
from .incremental import InsertionMode, compare_with_refit, insert_stream
from .ingestion import (
    DataFormatError,
    Dataset,
    generate_synthetic,
    read_dataset,
    resolve_missing,
    write_csv,
)
from .labeling import (
    forecast,
    label_clusters,
    label_pooled_clusters,
    parse_attribution,
    read_forecasts,
    write_forecasts,
)

log = logging.getLogger("driftcast")


@dataclass(frozen=True)
class RunConfig:
    k: int = 5
    metric: DistanceMetric = DistanceMetric.EUCLIDEAN
    init: InitStrategy = InitStrategy()
    max_iter: int = 100
    missing: str = "drop-record"
    mode: str = "vector"
    insert: InsertionMode = InsertionMode.STATIC

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("--k must be >= 1")
        if self.mode not in ("pooled", "vector"):
            raise ValueError(f"unknown mode {self.mode!r}")


def _parse_init(text: str, seed: Optional[int]) -> InitStrategy:
    # explicit:@model.json seeds from the centroids of a saved model
    if text.startswith("explicit:@"):
        model = persistence.load_model(text[len("explicit:@"):])
        return InitStrategy.explicit([c.mean for c in model.centroids])
    return InitStrategy.parse(text, seed)


def _config(args) -> RunConfig:
    return RunConfig(
        k=args.k,
        metric=DistanceMetric(args.metric),
        init=_parse_init(args.init, args.seed),
        max_iter=args.max_iter,
        missing="drop-record" if args.missing == "drop" else "column-mean",
        mode=args.mode or "vector",
        insert=InsertionMode.parse(args.insert),
    )


def _prepare(ds: Dataset, mode: str, missing: str) -> Dataset:
    # pooled mode flattens present readings, so missing ones simply drop out
    if mode == "pooled":
        return ds.pooled()
    return resolve_missing(ds, missing)


def _write_out(text: str, path: Optional[str]) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _means_table(model, decimals: int) -> str:
    header = ["clusterid", "count"] + [f"clust{n}mean" for n in model.schema.names]
    rows = [header]
    for i, c in enumerate(model.centroids):
        rows.append([f"cluster{i}", str(c.member_count)] + [f"{v:.{decimals}f}" for v in c.mean])
    widths = [max(len(r[j]) for r in rows) for j in range(len(header))]
    return "\n".join("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows)


def cmd_fit(args) -> int:
    cfg = _config(args)
    ds = _prepare(read_dataset(args.data, args.format), cfg.mode, cfg.missing)
    model, assignment, iterations = lloyd_fit(ds, cfg.k, cfg.metric, cfg.init, cfg.max_iter)
    persistence.save_model(model, args.out)
    print(f"K={model.k} metric={model.metric.value} mode={cfg.mode} records={len(ds)}")
    print(f"iterations={iterations} wcss={assignment.wcss:.6f}")
    print(_means_table(model, 2 if cfg.mode == "pooled" else 6))
    print(f"model written to {args.out}")
    return 0


def cmd_label(args) -> int:
    model = persistence.load_model(args.model)
    if args.map:
        labeled = label_pooled_clusters(model, parse_attribution(args.map))
    elif model.pooled:
        raise ValueError(
            "pooled model: pass --map with one attribute per cluster, e.g. --map 0:RPM,1:NOx,2:CO2,3:SO2"
        )
    else:
        labeled = label_clusters(model, normalize=args.normalize)
    persistence.save_model(labeled, args.out or args.model)
    for i, lb in enumerate(labeled.labels):
        print(f"cluster{i}\t{lb.dominant}\t{lb.description}")
    return 0


def cmd_forecast(args) -> int:
    model = persistence.load_model(args.model)
    mode = args.mode or ("pooled" if model.pooled else "vector")
    missing = "drop-record" if args.missing == "drop" else "column-mean"
    new = _prepare(read_dataset(args.data, args.format), mode, missing)
    insert_mode = InsertionMode.parse(args.insert)
    final, insertion_log = insert_stream(new, model, insert_mode)
    forecasts = forecast(insertion_log, model if insert_mode is InsertionMode.STATIC else final)
    _write_out(write_forecasts(forecasts), args.out)
    if args.log:
        _write_out(insertion_log.to_csv(model.k), args.log)
    if insert_mode is InsertionMode.RUNNING_MEAN:
        persistence.save_model(final, args.model_out or args.model)
    return 0


def cmd_evaluate(args) -> int:
    with open(args.forecast, encoding="utf-8", newline="") as fh:
        forecasts = read_forecasts(fh.read())
    with open(args.truth, encoding="utf-8", newline="") as fh:
        truth = GroundTruth.from_csv(fh.read())
    report = evaluate(forecasts, truth)
    sys.stdout.write(report.to_json() if args.json_output else report.to_text())
    if args.report:
        _write_out(report.to_json(), args.report)
    return 0


def cmd_compare(args) -> int:
    cfg = _config(args)
    base = _prepare(read_dataset(args.base, args.format), cfg.mode, cfg.missing)
    new = _prepare(read_dataset(args.new, args.format), cfg.mode, cfg.missing)
    report = compare_with_refit(base, new, cfg.k, cfg.metric, cfg.init, cfg.insert, cfg.max_iter)
    _write_out(json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n", args.out)
    return 0


def cmd_gen(args) -> int:
    ds = generate_synthetic(args.seed, args.days)
    _write_out(write_csv(ds), args.out)
    return 0


def _add_run_flags(p):
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--metric", choices=[m.value for m in DistanceMetric], default="euclidean")
    p.add_argument("--init", default="first-k",
                   help="first-k | random | explicit:v1,v2,... | explicit:a,b;c,d | explicit:@model.json")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--max-iter", type=int, default=100)
    p.add_argument("--missing", choices=["drop", "mean"], default="drop")
    p.add_argument("--mode", choices=["pooled", "vector"], default=None)
    p.add_argument("--insert", choices=["static", "running-mean"], default="static")
    p.add_argument("--format", choices=["csv", "arff"], default=None,
                   help="input format (default: by file extension)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="driftcast", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="batch K-means on a pollution dataset")
    p.add_argument("data")
    _add_run_flags(p)
    p.add_argument("--out", "--model", dest="out", default="model.json")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("label", help="attach weather categories to a model")
    p.add_argument("--model", required=True)
    p.add_argument("--map", default=None, help="pooled models: cluster:attribute pairs, e.g. 0:RPM,1:NOx")
    p.add_argument("--normalize", choices=["none", "zscore"], default=None,
                   help="extension: z-score attributes before picking the dominant one")
    p.add_argument("--out", default=None, help="output model (default: overwrite --model)")
    p.set_defaults(func=cmd_label)

    p = sub.add_parser("forecast", help="insert new records and emit weather categories")
    p.add_argument("data")
    p.add_argument("--model", required=True)
    p.add_argument("--insert", choices=["static", "running-mean"], default="static")
    p.add_argument("--mode", choices=["pooled", "vector"], default=None)
    p.add_argument("--missing", choices=["drop", "mean"], default="drop")
    p.add_argument("--format", choices=["csv", "arff"], default=None)
    p.add_argument("--out", default=None, help="forecast CSV (default: stdout)")
    p.add_argument("--log", default=None, help="also write the insertion log CSV here")
    p.add_argument("--model-out", default=None, help="running-mean: updated model (default: --model)")
    p.set_defaults(func=cmd_forecast)

    p = sub.add_parser("evaluate", help="accuracy of forecasts against ground truth")
    p.add_argument("forecast")
    p.add_argument("truth")
    p.add_argument("--json", dest="json_output", action="store_true", help="print JSON instead of text")
    p.add_argument("--report", default=None, help="also write the JSON report here")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("compare", help="incremental insertion vs full refit")
    p.add_argument("base")
    p.add_argument("new")
    _add_run_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("gen", help="synthetic pollution dataset")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--days", type=int, default=300)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    level = os.environ.get("DRIFTCAST_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DataFormatError, ValueError, OSError) as exc:
        print(f"driftcast: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
