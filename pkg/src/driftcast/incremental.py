"""Incremental assignment of new records to an already fitted model."""

from __future__ import annotations

import csv
import datetime as dt
import io
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .clustering import (
    Centroid,
    ClusterModel,
    InitStrategy,
    distances_to_centroids,
    lloyd_fit,
)
from .ingestion import Dataset, PollutantRecord, format_date


class InsertionMode(str, Enum):
    STATIC = "static-centroids"
    RUNNING_MEAN = "running-mean"

    @classmethod
    def parse(cls, text) -> "InsertionMode":
        if isinstance(text, cls):
            return text
        if text in ("static", "static-centroids"):
            return cls.STATIC
        if text == "running-mean":
            return cls.RUNNING_MEAN
        raise ValueError(f"unknown insertion mode {text!r}")


@dataclass(frozen=True)
class LogEntry:
    date: dt.date
    values: tuple
    cluster: int
    distances: tuple
    category: Optional[object] = None

    @property
    def distance(self) -> float:
        return self.distances[self.cluster]


@dataclass(frozen=True)
class InsertionLog:
    entries: tuple = ()

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    @property
    def clusters(self) -> tuple:
        return tuple(e.cluster for e in self.entries)

    def to_csv(self, k: Optional[int] = None) -> str:
        if k is None:
            k = len(self.entries[0].distances) if self.entries else 0
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["date", "cluster", "category"] + [f"d{i}" for i in range(k)])
        for e in self.entries:
            cat = e.category.description if e.category is not None else ""
            w.writerow([format_date(e.date), e.cluster, cat] + [f"{d:.4f}" for d in e.distances])
        return buf.getvalue()


def incremental_insert(x: PollutantRecord, model: ClusterModel, mode=InsertionMode.STATIC):
    """Route one record to its nearest centroid; returns ``(model, LogEntry)``.

    In running-mean mode the receiving centroid absorbs the record
    ((mean*n + x)/(n+1)); static mode hands back the same model object.
    """
    mode = InsertionMode.parse(mode)
    if not x.complete:
        raise ValueError(f"record {x.date} has missing components")
    if len(x.values) != model.schema.arity:
        raise ValueError(
            f"record arity {len(x.values)} does not match model arity {model.schema.arity}"
        )
    d = distances_to_centroids(x.values, model)
    k = int(np.argmin(d))
    category = model.labels[k] if model.labels is not None else None
    entry = LogEntry(x.date, x.values, k, tuple(float(v) for v in d), category)
    if mode is InsertionMode.STATIC:
        return model, entry
    c = model.centroids[k]
    n = c.member_count
    new_mean = tuple((m * n + v) / (n + 1) for m, v in zip(c.mean, x.values))
    centroids = list(model.centroids)
    centroids[k] = Centroid(new_mean, n + 1)
    return model.with_centroids(centroids), entry


def insert_stream(new_records, model: ClusterModel, mode=InsertionMode.STATIC):
    entries = []
    for rec in new_records:
        model, entry = incremental_insert(rec, model, mode)
        entries.append(entry)
    return model, InsertionLog(tuple(entries))


@dataclass(frozen=True)
class DivergenceReport:
    n_records: int
    n_differing: int
    fraction_differing: float
    displacement: tuple
    incremental_model: ClusterModel
    refit_model: ClusterModel

    def to_dict(self) -> dict:
        return {
            "n_records": self.n_records,
            "n_differing": self.n_differing,
            "fraction_differing": self.fraction_differing,
            "centroid_displacement": list(self.displacement),
        }


def compare_with_refit(
    base: Dataset,
    new_records: Dataset,
    K: int,
    metric,
    init: Optional[InitStrategy] = None,
    mode=InsertionMode.STATIC,
    max_iter: int = 100,
) -> DivergenceReport:
    """Measure how far incremental insertion drifts from refitting on all data.

    The base data is fitted once, the new records are streamed in, and the
    resulting labels for the combined data are compared against a full
    Lloyd refit started from the same initialization.
    """
    if base.schema != new_records.schema:
        raise ValueError("base and new records use different schemas")
    combined = Dataset(base.schema, base.records + new_records.records)
    if len(combined) == 0:
        raise ValueError("nothing to compare: both datasets are empty")
    fitted, base_assign, _ = lloyd_fit(base, K, metric, init, max_iter)
    inc_model, log = insert_stream(new_records, fitted, mode)
    inc_labels = np.array(base_assign.cluster_of + log.clusters, dtype=np.intp)

    refit, refit_assign, _ = lloyd_fit(combined, K, metric, init, max_iter)
    ref_labels = np.array(refit_assign.cluster_of, dtype=np.intp)

    n_diff = int(np.count_nonzero(inc_labels != ref_labels))
    disp = tuple(
        float(np.sqrt(np.sum((np.array(a.mean) - np.array(b.mean)) ** 2)))
        for a, b in zip(inc_model.centroids, refit.centroids)
    )
    return DivergenceReport(len(combined), n_diff, n_diff / len(combined), disp, inc_model, refit)
