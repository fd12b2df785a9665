"""Versioned JSON model files."""

from __future__ import annotations

import json
import os
import tempfile

from .clustering import Centroid, ClusterModel, DistanceMetric
from .ingestion import AttributeSchema
from .labeling import WeatherCategory

FORMAT_VERSION = 1


class ModelFormatError(ValueError):
    pass


def model_to_dict(model: ClusterModel) -> dict:
    labels = None
    if model.labels is not None:
        labels = [
            None if lb is None else {"dominant": lb.dominant, "description": lb.description}
            for lb in model.labels
        ]
    return {
        "format_version": FORMAT_VERSION,
        "schema": list(model.schema.names),
        "metric": model.metric.value,
        "centroids": [{"mean": list(c.mean), "member_count": c.member_count} for c in model.centroids],
        "labels": labels,
    }


def model_from_dict(doc: dict) -> ClusterModel:
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported model format_version {version!r}")
    try:
        labels = doc.get("labels")
        if labels is not None:
            labels = tuple(
                None if lb is None else WeatherCategory(lb["dominant"], lb["description"])
                for lb in labels
            )
        return ClusterModel(
            AttributeSchema(tuple(doc["schema"])),
            DistanceMetric(doc["metric"]),
            tuple(Centroid(tuple(c["mean"]), c["member_count"]) for c in doc["centroids"]),
            labels,
        )
    except (KeyError, TypeError) as exc:
        raise ModelFormatError(f"malformed model document: {exc!r}") from None


def dumps(model: ClusterModel) -> str:
    # json writes floats with repr(), the shortest string that round-trips exactly
    return json.dumps(model_to_dict(model), sort_keys=True, indent=2, allow_nan=False) + "\n"


def loads(text: str) -> ClusterModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"line {exc.lineno}: invalid JSON: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ModelFormatError("model file must hold a JSON object")
    return model_from_dict(doc)


def save_model(model: ClusterModel, path) -> None:
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".model-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(dumps(model))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_model(path) -> ClusterModel:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
