"""Weather categories for clusters, chosen by each centroid's dominant attribute."""

from __future__ import annotations

import csv
import datetime as dt
import io
import re
from dataclasses import dataclass, replace
from typing import Mapping, Optional, Sequence

import numpy as np

from .clustering import ClusterModel
from .ingestion import format_date, parse_date


@dataclass(frozen=True)
class WeatherCategory:
    dominant: str
    description: str

    @property
    def token(self) -> str:
        try:
            return normalize_category(self.description)
        except ValueError:
            # caller-supplied categories compare on their squashed phrase
            return _squash(self.description)


# Phrases spelled exactly as published, "smogy" included.
CATEGORY_PHRASES = {
    "CO2": "hot, smogy and humid",
    "RPM": "dusty, fly ash, smogy, fog, Mist",
    "SO2": "hot, smogy and chance of acid rain",
    "NOx": "Hot, dry and smogy",
}

CATEGORY_TOKENS = {
    "CO2": "humid",
    "RPM": "dusty",
    "SO2": "acid-rain",
    "NOx": "dry",
}

CATEGORIES = {attr: WeatherCategory(attr, phrase) for attr, phrase in CATEGORY_PHRASES.items()}


def _squash(text: str) -> str:
    text = text.strip().lower()
    text = re.sub(r"\s*,\s*", ", ", text)
    return re.sub(r"\s+", " ", text)


_ALIASES = {}
for _attr, _phrase in CATEGORY_PHRASES.items():
    _tok = CATEGORY_TOKENS[_attr]
    for _alias in (_phrase, _tok, _attr):
        _ALIASES[_squash(_alias)] = _tok
# wordings used in the sample narrative
_ALIASES.update({
    _squash("hot, smogy and also there may be chance of acid rain"): "acid-rain",
    _squash("hot, smogy and chance of acid rain"): "acid-rain",
    _squash("hot, smogy, chance of acid rain"): "acid-rain",
    _squash("hot, dry, smogy"): "dry",
    _squash("hot, smogy, humid"): "humid",
    _squash("smogy, dust, fly ash"): "dusty",
})


def normalize_category(text: str, extra: Optional[Mapping[str, str]] = None) -> str:
    """Map a category phrase, token or attribute name onto its normalized token."""
    key = _squash(text)
    if extra:
        for alias, tok in extra.items():
            if _squash(alias) == key:
                return tok
    try:
        return _ALIASES[key]
    except KeyError:
        raise ValueError(f"unknown weather category {text!r}") from None


def category_for(attribute: str, categories: Optional[Mapping[str, WeatherCategory]] = None) -> WeatherCategory:
    table = CATEGORIES if categories is None else {**CATEGORIES, **categories}
    try:
        return table[attribute]
    except KeyError:
        raise ValueError(
            f"no weather category defined for attribute {attribute!r}; supply one explicitly"
        ) from None


def dominant_index(mean: Sequence[float]) -> int:
    # np.argmax keeps the first maximum: lowest attribute index wins ties
    return int(np.argmax(np.asarray(mean, dtype=np.float64)))


def _zscore_columns(M: np.ndarray) -> np.ndarray:
    mu = M.mean(axis=0)
    sd = M.std(axis=0)
    sd[sd == 0] = 1.0
    return (M - mu) / sd


def label_clusters(model: ClusterModel, categories=None, normalize: Optional[str] = None) -> ClusterModel:
    """Label every cluster by the attribute with the largest raw centroid mean.

    ``normalize="zscore"`` standardizes each attribute across centroids first.
    That is an extension; the default compares raw means.
    """
    if model.schema.arity < 2:
        raise ValueError(
            "pooled (1-D) models carry no attribute identity; use label_pooled_clusters "
            "with an explicit cluster -> attribute map"
        )
    M = model.means()
    if normalize == "zscore":
        M = _zscore_columns(M)
    elif normalize not in (None, "none"):
        raise ValueError(f"unknown normalization {normalize!r}")
    labels = tuple(
        category_for(model.schema.names[dominant_index(row)], categories) for row in M
    )
    return replace(model, labels=labels)


def label_pooled_clusters(model: ClusterModel, attribute_of_cluster: Mapping[int, str], categories=None) -> ClusterModel:
    missing = [k for k in range(model.k) if k not in attribute_of_cluster]
    if missing:
        raise ValueError(f"attribution map does not cover clusters {missing}")
    extra = sorted(set(attribute_of_cluster) - set(range(model.k)))
    if extra:
        raise ValueError(f"attribution map names unknown clusters {extra}")
    labels = tuple(category_for(attribute_of_cluster[k], categories) for k in range(model.k))
    return replace(model, labels=labels)


def parse_attribution(text: str) -> dict:
    """Parse ``0:RPM,1:NOx,...``; a ``C``-prefixed key (``C1``) counts from 1."""
    out = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        key, sep, attr = part.partition(":")
        if not sep or not attr.strip():
            raise ValueError(f"malformed attribution entry {part!r}")
        key = key.strip()
        idx = int(key[1:]) - 1 if key[:1] in "Cc" else int(key)
        out[idx] = attr.strip()
    return out


@dataclass(frozen=True)
class Forecast:
    date: dt.date
    cluster: int
    category: WeatherCategory


def forecast(log, model: ClusterModel) -> list:
    out = []
    for entry in log:
        label = model.labels[entry.cluster] if model.labels is not None else None
        if label is None:
            raise ValueError(f"cluster {entry.cluster} has no weather category; label the model first")
        out.append(Forecast(entry.date, entry.cluster, label))
    return out


def write_forecasts(forecasts: Sequence[Forecast]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["date", "cluster", "category"])
    for f in forecasts:
        w.writerow([format_date(f.date), f.cluster, f.category.description])
    return buf.getvalue()


def read_forecasts(text) -> list:
    """Read a ``date,cluster,category`` CSV back into :class:`Forecast` rows."""
    if not isinstance(text, str):
        text = text.read()
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [c.strip().lower() for c in rows[0]] != ["date", "cluster", "category"]:
        raise ValueError("line 1: forecast header must be date,cluster,category")
    by_token = {CATEGORY_TOKENS[a]: c for a, c in CATEGORIES.items()}
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 3:
            raise ValueError(f"line {lineno}: expected 3 columns, found {len(row)}")
        try:
            tok = normalize_category(row[2])
            cat = by_token[tok]
            if _squash(cat.description) != _squash(row[2]):
                cat = WeatherCategory(cat.dominant, row[2].strip())
            out.append(Forecast(parse_date(row[0], lineno), int(row[1]), cat))
        except ValueError as exc:
            msg = str(exc)
            raise ValueError(msg if msg.startswith("line") else f"line {lineno}: {msg}") from None
    return out
