"""Regenerate the fixture files under src/driftcast/data/.

Most fixtures transcribe published tables. ``jan_aug_2009.csv`` is
synthetic: the original Jan-Aug 2009 readings are not available, so it
is built so that a Euclidean Lloyd fit seeded with the reference means
reproduces those means at six decimals. The six-decimal means are exact
integer sums over 101/80/170/61/88 members, so each cluster gets that many
integer readings with exactly those sums, kept close enough to their own
centroid that the partition is stable.
"""

import datetime as dt
import json
import random
from pathlib import Path

import numpy as np

from driftcast import persistence
from driftcast.clustering import Centroid, ClusterModel, DistanceMetric
from driftcast.ingestion import AttributeSchema, Dataset, PollutantRecord, write_arff, write_csv

OUT = Path(__file__).resolve().parents[1] / "src" / "driftcast" / "data"

REFERENCE_MEANS = [
    (221.376238, 110.366337, 10.128713, 92.415842),
    (112.600000, 118.562500, 8.425000, 72.187500),
    (39.458824, 36.176471, 6.158824, 41.523529),
    (65.196721, 75.983607, 7.704918, 57.04918),
    (225.943182, 145.022727, 12.034091, 107.10227),
]
# smallest member counts for which every printed mean is an exact ratio of integers
REFERENCE_COUNTS = [101, 80, 170, 61, 88]

SAMPLE_ROWS = [(82, 14, 12, 24), (72, 56, 28, 8), (36, 2, 48, 5), (7, None, 94, 62)]

SEP2009_ROWS = [
    ("1/9/2009", (66, 27, 5, 31)),
    ("2/9/2009", (27, 83, 5, 36)),
    ("3/9/2009", (88, 30, 5, 35)),
    ("4/9/2009", (98, 29, 5, 35)),
    ("5/9/2009", (74, 28, 5, 33)),
    ("28/9/2009", (116, 43, 6, 52)),
    ("29/9/2009", (125, 53, 6, 60)),
    ("30/9/2009", (188, 100, 7, 67)),
    ("1/1/2010", (200, 150, 12, 107)),
    ("2/1/2010", (220, 160, 13, 110)),
    ("1/3/2010", (260, 170, 14, 105)),
    ("2/3/2010", (270, 175, 14, 112)),
    ("1/6/2010", (190, 145, 16, 120)),
    ("2/6/2010", (200, 155, 12, 118)),
]

SEP2009_FORECASTS = [
    ("1/9/2009", 2, "Hot, dry and smogy"),
    ("2/9/2009", 3, "dusty, fly ash, smogy, fog, Mist"),
    ("3/9/2009", 2, "Hot, dry and smogy"),
    ("4/9/2009", 2, "Hot, dry and smogy"),
    ("28/9/2009", 3, "dusty, fly ash, smogy, fog, Mist"),
    ("29/9/2009", 3, "dusty, fly ash, smogy, fog, Mist"),
    ("30/9/2009", 4, "hot, smogy and humid"),
]

# Incremental stream for the pooled sample: 49 (NOx), 78 (SO2), 20 (CO2).
STREAM_ROWS = [("5/1/2009", (None, None, None, 49)), ("6/1/2009", (None, None, 78, None)),
               ("7/1/2009", (20, None, None, None))]


def _date(text):
    d, m, y = (int(p) for p in text.split("/"))
    return dt.date(y, m, d)


def _cluster_points(rng, mean, n, sums, radius):
    mean = np.asarray(mean)
    pts = np.rint(mean + rng.integers(-radius, radius + 1, size=(n, len(mean)))).astype(int)
    for j in range(len(mean)):
        gap = int(sums[j] - pts[:, j].sum())
        step = 1 if gap > 0 else -1
        i = 0
        while gap:
            if pts[i % n, j] + step >= 0:
                pts[i % n, j] += step
                gap -= step
            i += 1
    return pts


def make_jan_aug(seed=2009):
    rng = np.random.default_rng(seed)
    C = np.array(REFERENCE_MEANS)
    radius = np.array([6, 6, 2, 6])
    rows = []
    for k, (mean, n) in enumerate(zip(REFERENCE_MEANS, REFERENCE_COUNTS)):
        sums = np.rint(np.array(mean) * n).astype(int)
        pts = _cluster_points(rng, mean, n, sums, radius)
        assert (pts.sum(axis=0) == sums).all()
        rows.extend((k, tuple(int(v) for v in p)) for p in pts)
    # every point must sit well inside its own cluster for both the printed and exact means
    exact = np.array([np.rint(np.array(m) * n) / n for m, n in zip(REFERENCE_MEANS, REFERENCE_COUNTS)])
    for k, p in rows:
        for centres in (C, exact):
            d = np.sqrt(((centres - np.array(p)) ** 2).sum(axis=1))
            assert int(np.argmin(d)) == k and np.sort(d)[1] - d[k] > 5.0, (k, p)
    order = list(range(len(rows)))
    random.Random(seed).shuffle(order)
    start = dt.date(2009, 1, 1)
    span = (dt.date(2009, 8, 31) - start).days + 1
    records = [
        PollutantRecord(start + dt.timedelta(days=(i * span) // len(rows)), rows[j][1])
        for i, j in enumerate(order)
    ]
    return Dataset(AttributeSchema(), records)


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    schema = AttributeSchema()

    t2 = Dataset(schema, [PollutantRecord(dt.date(2009, 1, i + 1), r) for i, r in enumerate(SAMPLE_ROWS)])
    (OUT / "sample_readings.csv").write_text(write_csv(t2))

    stream = Dataset(schema, [PollutantRecord(_date(d), r) for d, r in STREAM_ROWS])
    (OUT / "sample_stream.csv").write_text(write_csv(stream))

    t5 = Dataset(schema, [PollutantRecord(_date(d), r) for d, r in SEP2009_ROWS])
    (OUT / "sep2009_jun2010.csv").write_text(write_csv(t5))
    (OUT / "sep2009_jun2010.arff").write_text(
        "% Pollution readings, September 2009 to June 2010 (printed rows only)\n" + write_arff(t5)
    )

    lines = ["date,cluster,category"] + [f'{d},{k},"{c}"' for d, k, c in SEP2009_FORECASTS]
    (OUT / "sep2009_forecast.csv").write_text("\n".join(lines) + "\n")
    lines = ["date,category"] + [f'{d},"{c}"' for d, _, c in SEP2009_FORECASTS]
    (OUT / "sep2009_truth.csv").write_text("\n".join(lines) + "\n")

    model = ClusterModel(
        schema,
        DistanceMetric.EUCLIDEAN,
        [Centroid(m, n) for m, n in zip(REFERENCE_MEANS, REFERENCE_COUNTS)],
    )
    persistence.save_model(model, OUT / "reference_model.json")

    (OUT / "jan_aug_2009.csv").write_text(write_csv(make_jan_aug()))
    print(json.dumps(sorted(p.name for p in OUT.iterdir()), indent=1))


if __name__ == "__main__":
    main()
