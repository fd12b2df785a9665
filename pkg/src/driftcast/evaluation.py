"""Matched-records accuracy of forecasts against known weather categories."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .ingestion import format_date, parse_date
from .labeling import normalize_category


@dataclass(frozen=True)
class GroundTruth:
    entries: Mapping = field(default_factory=dict)

    @classmethod
    def from_csv(cls, text) -> "GroundTruth":
        if not isinstance(text, str):
            text = text.read()
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or [c.strip().lower() for c in rows[0]] != ["date", "category"]:
            raise ValueError("line 1: truth header must be date,category")
        entries = {}
        for lineno, row in enumerate(rows[1:], start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ValueError(f"line {lineno}: expected 2 columns, found {len(row)}")
            date = parse_date(row[0], lineno)
            if date in entries:
                raise ValueError(f"line {lineno}: duplicate date {row[0].strip()}")
            try:
                entries[date] = normalize_category(row[1])
            except ValueError as exc:
                raise ValueError(f"line {lineno}: {exc}") from None
        return cls(entries)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["date", "category"])
        for d, tok in self.entries.items():
            w.writerow([format_date(d), tok])
        return buf.getvalue()


def accuracy(matched: int, total: int) -> float:
    """Percentage of matched records, computed exactly then converted to float."""
    if total <= 0:
        raise ValueError("total must be >= 1")
    if matched < 0 or matched > total:
        raise ValueError(f"matched={matched} outside 0..{total}")
    return float(Fraction(100 * matched, total))


@dataclass(frozen=True)
class EvaluationReport:
    matched: int
    total: int
    accuracy_percent: float
    per_category: dict

    def to_dict(self) -> dict:
        return {
            "matched": self.matched,
            "total": self.total,
            "accuracy_percent": self.accuracy_percent,
            "per_category": {k: list(v) for k, v in sorted(self.per_category.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_text(self) -> str:
        lines = [
            f"matched records : {self.matched}",
            f"total records   : {self.total}",
            f"accuracy        : {self.accuracy_percent:.4f}%",
        ]
        for cat, (m, t) in sorted(self.per_category.items()):
            lines.append(f"  {cat:<10} {m}/{t}")
        return "\n".join(lines) + "\n"


def evaluate(forecasts, truth: GroundTruth) -> EvaluationReport:
    """Score forecasts on category-token equality; per-category keys are truth tokens."""
    matched = 0
    per_cat = {}
    for f in forecasts:
        try:
            want = truth.entries[f.date]
        except KeyError:
            raise ValueError(f"no ground truth for forecast date {format_date(f.date)}") from None
        hit = f.category.token == want
        matched += hit
        m, t = per_cat.get(want, (0, 0))
        per_cat[want] = (m + hit, t + 1)
    total = sum(t for _, t in per_cat.values())
    if total == 0:
        raise ValueError("no forecasts to evaluate")
    return EvaluationReport(matched, total, accuracy(matched, total), per_cat)
