"""Batch K-means (Lloyd iteration) with Manhattan or Euclidean assignment."""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, replace
from enum import Enum
from typing import NamedTuple, Optional, Sequence

import numpy as np

from . import kernels
from .ingestion import AttributeSchema, Dataset

log = logging.getLogger(__name__)


class DistanceMetric(str, Enum):
    MANHATTAN = "manhattan"
    EUCLIDEAN = "euclidean"


@dataclass(frozen=True)
class Centroid:
    mean: tuple
    member_count: int = 0

    def __post_init__(self):
        mean = tuple(float(v) for v in self.mean)
        if not all(math.isfinite(v) for v in mean):
            raise ValueError(f"non-finite centroid mean {mean!r}")
        if self.member_count < 0:
            raise ValueError("member_count must be >= 0")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "member_count", int(self.member_count))


@dataclass(frozen=True)
class ClusterModel:
    schema: AttributeSchema
    metric: DistanceMetric
    centroids: tuple
    labels: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "metric", DistanceMetric(self.metric))
        object.__setattr__(self, "centroids", tuple(self.centroids))
        if not self.centroids:
            raise ValueError("a cluster model needs at least one centroid")
        for c in self.centroids:
            if len(c.mean) != self.schema.arity:
                raise ValueError(
                    f"centroid arity {len(c.mean)} does not match schema arity {self.schema.arity}"
                )
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != len(self.centroids):
                raise ValueError("labels must have one entry per centroid")
            object.__setattr__(self, "labels", labels)

    @property
    def k(self) -> int:
        return len(self.centroids)

    @property
    def pooled(self) -> bool:
        return self.schema.arity == 1

    @property
    def fully_labeled(self) -> bool:
        return self.labels is not None and all(lb is not None for lb in self.labels)

    def means(self) -> np.ndarray:
        return np.array([c.mean for c in self.centroids], dtype=np.float64)

    def with_centroids(self, centroids) -> "ClusterModel":
        return replace(self, centroids=tuple(centroids))


@dataclass(frozen=True)
class Assignment:
    cluster_of: tuple
    wcss: float

    def __post_init__(self):
        object.__setattr__(self, "cluster_of", tuple(int(c) for c in self.cluster_of))
        if self.wcss < 0:
            raise ValueError("wcss must be >= 0")


class FitResult(NamedTuple):
    model: ClusterModel
    assignment: Assignment
    iterations: int


@dataclass(frozen=True)
class InitStrategy:
    """How to seed centroids: ``explicit`` means, ``first-k`` records or ``random`` records."""

    kind: str = "first-k"
    means: Optional[tuple] = None
    seed: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("explicit", "first-k", "random"):
            raise ValueError(f"unknown init strategy {self.kind!r}")
        if self.kind == "explicit":
            if not self.means:
                raise ValueError("explicit init needs a list of means")
            means = tuple(
                (float(m),) if np.isscalar(m) else tuple(float(v) for v in m) for m in self.means
            )
            object.__setattr__(self, "means", means)

    @classmethod
    def explicit(cls, means) -> "InitStrategy":
        return cls("explicit", means=tuple(means))

    @classmethod
    def first_k(cls) -> "InitStrategy":
        return cls("first-k")

    @classmethod
    def random(cls, seed: int) -> "InitStrategy":
        return cls("random", seed=seed)

    @classmethod
    def parse(cls, text: str, seed: Optional[int] = None) -> "InitStrategy":
        """Parse ``first-k``, ``random`` or ``explicit:8,56,28,72`` / ``explicit:1,2;3,4``."""
        if text == "first-k":
            return cls.first_k()
        if text == "random":
            return cls.random(0 if seed is None else seed)
        if text.startswith("explicit:"):
            body = text[len("explicit:"):]
            groups = [g for g in body.split(";") if g.strip()]
            try:
                if len(groups) == 1:
                    # a single group of scalars means K one-dimensional centroids
                    means = [(float(v),) for v in groups[0].split(",")]
                else:
                    means = [tuple(float(v) for v in g.split(",")) for g in groups]
            except ValueError:
                raise ValueError(f"malformed explicit means {body!r}") from None
            return cls.explicit(means)
        raise ValueError(f"unknown init strategy {text!r}")


def _metric(metric) -> str:
    return DistanceMetric(metric).value


def _vec(x) -> np.ndarray:
    return np.atleast_1d(np.asarray(x, dtype=np.float64))


def distance(a, b, metric) -> float:
    a, b = _vec(a), _vec(b)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape[0]} vs {b.shape[0]}")
    if np.isnan(a).any() or np.isnan(b).any():
        raise ValueError("distance is undefined for missing components")
    return float(kernels.pairwise(a[None, :], b[None, :], _metric(metric))[0, 0])


def distances_to_centroids(x, model: ClusterModel) -> np.ndarray:
    x = _vec(x)
    if x.shape[0] != model.schema.arity:
        raise ValueError(f"point arity {x.shape[0]} does not match model arity {model.schema.arity}")
    return kernels.pairwise(x[None, :], model.means(), model.metric.value)[0]


def assign_point(x, model: ClusterModel) -> tuple:
    """Nearest centroid to ``x`` as ``(index, distance)``; ties go to the lower index."""
    d = distances_to_centroids(x, model)
    k = int(np.argmin(d))
    return k, float(d[k])


def compute_wcss(X: np.ndarray, means: np.ndarray, labels) -> float:
    return math.fsum(kernels.sq_residuals(X, means, labels))


def update_centroids(
    ds: Dataset,
    assignment,
    K: int,
    previous: Optional[Sequence[Centroid]] = None,
) -> list:
    """Recompute every centroid as the component-wise mean of its members.

    A cluster with no members keeps the mean from ``previous`` with a count of 0.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    labels = assignment.cluster_of if isinstance(assignment, Assignment) else assignment
    X = ds.matrix()
    return _update(X, np.asarray(labels, dtype=np.intp), K, previous)


def _update(X, labels, K, previous):
    if labels.shape[0] != X.shape[0]:
        raise ValueError("assignment does not cover every record")
    if labels.size and (labels.min() < 0 or labels.max() >= K):
        raise ValueError("assignment refers to a cluster outside 0..K-1")
    sums, counts = kernels.cluster_sums(X, labels, K)
    out = []
    for k in range(K):
        if counts[k]:
            out.append(Centroid(tuple(sums[k] / counts[k]), int(counts[k])))
        elif previous is not None:
            out.append(Centroid(previous[k].mean, 0))
        else:
            raise ValueError(f"cluster {k} is empty and has no previous mean")
    return out


def _distinct_rows(X: np.ndarray) -> list:
    seen = set()
    rows = []
    for row in X:
        key = row.tobytes()
        if key not in seen:
            seen.add(key)
            rows.append(row)
    return rows


def init_centroids(ds: Dataset, K: int, strategy: InitStrategy) -> list:
    if K < 1:
        raise ValueError("K must be >= 1")
    if strategy.kind == "explicit":
        if len(strategy.means) != K:
            raise ValueError(f"explicit init has {len(strategy.means)} means, K is {K}")
        for m in strategy.means:
            if len(m) != ds.schema.arity:
                raise ValueError(f"explicit mean {m!r} does not match arity {ds.schema.arity}")
        return [Centroid(m, 0) for m in strategy.means]
    rows = _distinct_rows(ds.matrix())
    if K > len(rows):
        raise ValueError(f"K={K} exceeds the {len(rows)} distinct records available")
    if strategy.kind == "first-k":
        chosen = rows[:K]
    else:
        idx = random.Random(strategy.seed).sample(range(len(rows)), K)
        chosen = [rows[i] for i in idx]
    return [Centroid(tuple(r), 0) for r in chosen]


def lloyd_fit(
    ds: Dataset,
    K: int,
    metric=DistanceMetric.EUCLIDEAN,
    init: Optional[InitStrategy] = None,
    max_iter: int = 100,
    trace: Optional[list] = None,
) -> FitResult:
    """Run Lloyd iterations until the assignment repeats or ``max_iter`` is hit.

    Each iteration assigns every record to its nearest centroid; if the
    assignment equals the previous one the fit stops (that pass is counted),
    otherwise the centroids are recomputed. When ``trace`` is a list, the
    WCSS after every centroid update is appended to it.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    if len(ds) == 0:
        raise ValueError("cannot fit an empty dataset")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    metric = DistanceMetric(metric)
    init = init or InitStrategy.first_k()
    X = ds.matrix()
    centroids = init_centroids(ds, K, init)
    means = np.array([c.mean for c in centroids])

    prev = None
    labels = None
    iterations = 0
    converged = False
    for iterations in range(1, max_iter + 1):
        labels, _ = kernels.assign(X, means, metric.value)
        if prev is not None and np.array_equal(labels, prev):
            converged = True
            break
        centroids = _update(X, labels, K, centroids)
        means = np.array([c.mean for c in centroids])
        if trace is not None:
            trace.append(compute_wcss(X, means, labels))
        prev = labels
    if not converged:
        log.warning("lloyd_fit stopped at max_iter=%d without a stable assignment", max_iter)
    log.debug("lloyd_fit: K=%d metric=%s iterations=%d", K, metric.value, iterations)

    model = ClusterModel(ds.schema, metric, centroids)
    assignment = Assignment(tuple(labels.tolist()), compute_wcss(X, means, labels))
    return FitResult(model, assignment, iterations)
