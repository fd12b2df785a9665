"""Reading, writing and generating pollutant datasets.

Two text formats are understood: a CSV with a leading ``Date`` column
(dates written D/M/YYYY) and a dense, numeric-only subset of ARFF.
Missing readings are written as ``-`` (ARFF also accepts ``?``) and are
kept as ``None`` until :func:`resolve_missing` is applied.
"""

from __future__ import annotations

import datetime as dt
import io
import math
import random
import re
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

DEFAULT_ATTRIBUTES = ("CO2", "RPM", "SO2", "NOx")
MISSING_TOKENS = frozenset({"-", ""})
ARFF_MISSING_TOKENS = frozenset({"-", "?", ""})


class DataFormatError(ValueError):
    """Raised for malformed input, always carrying the offending line number."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class AttributeSchema:
    names: tuple = DEFAULT_ATTRIBUTES

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if not names:
            raise ValueError("schema needs at least one attribute")
        if any(not n for n in names):
            raise ValueError("attribute names must be non-empty")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate attribute names in {names!r}")

    @property
    def arity(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)


@dataclass(frozen=True)
class PollutantRecord:
    date: dt.date
    values: tuple

    def __post_init__(self):
        values = tuple(None if v is None else float(v) for v in self.values)
        for v in values:
            if v is not None and (not math.isfinite(v) or v < 0):
                raise ValueError(f"invalid reading {v!r}")
        object.__setattr__(self, "values", values)

    @property
    def complete(self) -> bool:
        return all(v is not None for v in self.values)


@dataclass(frozen=True)
class Dataset:
    schema: AttributeSchema = field(default_factory=AttributeSchema)
    records: tuple = ()

    def __post_init__(self):
        records = tuple(self.records)
        for r in records:
            if len(r.values) != self.schema.arity:
                raise ValueError(
                    f"record {r.date} has {len(r.values)} values, schema has {self.schema.arity}"
                )
        object.__setattr__(self, "records", records)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @property
    def complete(self) -> bool:
        return all(r.complete for r in self.records)

    def matrix(self):
        """Values as an ``(n, arity)`` float64 array; requires complete records."""
        import numpy as np

        if not self.complete:
            raise ValueError("dataset has missing components; run resolve_missing first")
        return np.array([r.values for r in self.records], dtype=np.float64).reshape(
            len(self.records), self.schema.arity
        )

    def pooled(self, name: str = "value") -> "Dataset":
        """Flatten every present reading into its own 1-D record (row-major order)."""
        schema = AttributeSchema((name,))
        out = [
            PollutantRecord(r.date, (v,)) for r in self.records for v in r.values if v is not None
        ]
        return Dataset(schema, out)


def parse_date(token: str, line: Optional[int] = None) -> dt.date:
    m = re.fullmatch(r"\s*(\d{1,2})/(\d{1,2})/(\d{4})\s*", token)
    if not m:
        raise DataFormatError(f"malformed date {token!r} (expected D/M/YYYY)", line)
    day, month, year = (int(g) for g in m.groups())
    try:
        return dt.date(year, month, day)
    except ValueError as exc:
        raise DataFormatError(f"invalid date {token!r}: {exc}", line) from None


def format_date(d: dt.date) -> str:
    return f"{d.day}/{d.month}/{d.year}"


def format_value(v: Optional[float]) -> str:
    if v is None:
        return "-"
    text = f"{v:.6f}".rstrip("0").rstrip(".")
    return "0" if text == "-0" else text


def _parse_value(token: str, missing: frozenset, line: int) -> Optional[float]:
    token = token.strip()
    if token in missing:
        return None
    try:
        v = float(token)
    except ValueError:
        raise DataFormatError(f"non-numeric token {token!r}", line) from None
    if not math.isfinite(v):
        raise DataFormatError(f"non-finite value {token!r}", line)
    if v < 0:
        raise DataFormatError(f"negative value {token!r}", line)
    return v


def _row_to_record(tokens: Sequence[str], arity: int, missing: frozenset, line: int) -> PollutantRecord:
    if len(tokens) != arity + 1:
        raise DataFormatError(f"expected {arity + 1} columns, found {len(tokens)}", line)
    date = parse_date(tokens[0], line)
    values = tuple(_parse_value(t, missing, line) for t in tokens[1:])
    return PollutantRecord(date, values)


def _lines(text) -> Iterable[tuple]:
    if not isinstance(text, str):
        text = text.read()
    if text.startswith("﻿"):
        text = text[1:]
    # splitlines() also accepts CRLF
    for i, raw in enumerate(text.splitlines(), start=1):
        yield i, raw


def parse_csv(text, schema: Optional[AttributeSchema] = None) -> Dataset:
    """Parse CSV text (``Date,<names...>`` header) into a :class:`Dataset`.

    ``text`` may be a string or a readable text stream. When ``schema`` is
    given, the header must name exactly its attributes in order.
    """
    header = None
    records = []
    for lineno, raw in _lines(text):
        if not raw.strip():
            continue
        tokens = [t.strip() for t in raw.split(",")]
        if header is None:
            if tokens[0].lower() != "date":
                raise DataFormatError("header must start with 'Date'", lineno)
            names = tuple(tokens[1:])
            if len(set(names)) != len(names):
                raise DataFormatError(f"duplicate header names {names!r}", lineno)
            try:
                header = AttributeSchema(names)
            except ValueError as exc:
                raise DataFormatError(str(exc), lineno) from None
            if schema is not None and header.names != schema.names:
                raise DataFormatError(
                    f"header {header.names!r} does not match schema {schema.names!r}", lineno
                )
            continue
        records.append(_row_to_record(tokens, header.arity, MISSING_TOKENS, lineno))
    if header is None:
        raise DataFormatError("empty input: missing header row", 1)
    return Dataset(header, records)


def write_csv(ds: Dataset) -> str:
    buf = io.StringIO()
    buf.write(",".join(("Date",) + ds.schema.names) + "\n")
    for r in ds.records:
        buf.write(",".join([format_date(r.date)] + [format_value(v) for v in r.values]) + "\n")
    return buf.getvalue()


_ATTR_RE = re.compile(r"@attribute\s+('[^']*'|\"[^\"]*\"|\S+)\s+(.+)$", re.IGNORECASE)


def parse_arff(text) -> Dataset:
    """Parse the dense numeric ARFF subset.

    The first attribute must be the date column (type ``date`` or ``string``);
    every other attribute must be ``numeric``/``real``/``integer``.
    """
    names = []
    date_seen = False
    in_data = False
    records = []
    arity = None
    for lineno, raw in _lines(text):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if not in_data:
            low = line.lower()
            if low.startswith("@relation"):
                continue
            if low.startswith("@attribute"):
                m = _ATTR_RE.match(line)
                if not m:
                    raise DataFormatError(f"malformed attribute declaration {line!r}", lineno)
                name = m.group(1).strip("'\"")
                kind = m.group(2).strip().split()[0].lower()
                if kind in ("date", "string") and not date_seen and not names:
                    date_seen = True
                elif kind in ("numeric", "real", "integer"):
                    if not date_seen:
                        raise DataFormatError("first attribute must be the date column", lineno)
                    names.append(name)
                else:
                    raise DataFormatError(f"unsupported attribute type {kind!r}", lineno)
                continue
            if low.startswith("@data"):
                if not names:
                    raise DataFormatError("no numeric attributes declared", lineno)
                if len(set(names)) != len(names):
                    raise DataFormatError(f"duplicate attribute names {names!r}", lineno)
                arity = len(names)
                in_data = True
                continue
            raise DataFormatError(f"unexpected header line {line!r}", lineno)
        if line.startswith("{"):
            raise DataFormatError("sparse ARFF rows are not supported", lineno)
        tokens = [t.strip().strip("'\"") for t in line.split(",")]
        records.append(_row_to_record(tokens, arity, ARFF_MISSING_TOKENS, lineno))
    if not in_data:
        raise DataFormatError("missing @data section")
    return Dataset(AttributeSchema(names), records)


def write_arff(ds: Dataset, relation: str = "air_pollution") -> str:
    buf = io.StringIO()
    buf.write(f"@relation {relation}\n\n")
    buf.write("@attribute Date date 'd/M/yyyy'\n")
    for n in ds.schema.names:
        buf.write(f"@attribute {n} numeric\n")
    buf.write("\n@data\n")
    for r in ds.records:
        vals = ["?" if v is None else format_value(v) for v in r.values]
        buf.write(",".join([format_date(r.date)] + vals) + "\n")
    return buf.getvalue()


def read_dataset(path, fmt: Optional[str] = None) -> Dataset:
    """Load a CSV or ARFF file, dispatching on extension unless ``fmt`` is given."""
    path = str(path)
    if fmt is None:
        fmt = "arff" if path.lower().endswith(".arff") else "csv"
    with open(path, encoding="utf-8", newline="") as fh:
        text = fh.read()
    if fmt == "arff":
        return parse_arff(text)
    if fmt == "csv":
        return parse_csv(text)
    raise ValueError(f"unknown input format {fmt!r}")


def resolve_missing(ds: Dataset, policy: str = "drop-record") -> Dataset:
    if policy in ("drop", "drop-record"):
        return Dataset(ds.schema, [r for r in ds.records if r.complete])
    if policy not in ("mean", "column-mean"):
        raise ValueError(f"unknown missing-value policy {policy!r}")
    means = []
    for j, name in enumerate(ds.schema.names):
        present = [r.values[j] for r in ds.records if r.values[j] is not None]
        if not present and any(r.values[j] is None for r in ds.records):
            raise ValueError(f"column {name!r} has no present values to average")
        means.append(math.fsum(present) / len(present) if present else None)
    out = [
        PollutantRecord(r.date, tuple(means[j] if v is None else v for j, v in enumerate(r.values)))
        for r in ds.records
    ]
    return Dataset(ds.schema, out)


# Spread of the printed Sep 2009 - Jun 2010 rows, one (low, high) per attribute.
SEP2009_JUN2010_PROFILE = ((27.0, 270.0), (27.0, 175.0), (5.0, 16.0), (31.0, 120.0))


def generate_synthetic(
    seed: int,
    days: int,
    profile: Sequence[tuple] = SEP2009_JUN2010_PROFILE,
    schema: Optional[AttributeSchema] = None,
    start: dt.date = dt.date(2009, 1, 1),
) -> Dataset:
    if days < 0:
        raise ValueError("days must be >= 0")
    schema = schema or AttributeSchema(DEFAULT_ATTRIBUTES[: len(profile)] if len(profile) <= 4 else
                                       tuple(f"A{i}" for i in range(len(profile))))
    if len(profile) != schema.arity:
        raise ValueError("profile length must match schema arity")
    for lo, hi in profile:
        if not (math.isfinite(lo) and math.isfinite(hi)) or lo < 0 or lo > hi:
            raise ValueError(f"invalid range ({lo}, {hi})")
    rng = random.Random(seed)
    records = []
    for i in range(days):
        values = tuple(round(rng.uniform(lo, hi), 6) for lo, hi in profile)
        # rounding may only pull a value to a bound, never past it
        values = tuple(min(max(v, lo), hi) for v, (lo, hi) in zip(values, profile))
        records.append(PollutantRecord(start + dt.timedelta(days=i), values))
    return Dataset(schema, records)
