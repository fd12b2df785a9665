"""Independent reference computations used by the tests.

Plain Python on lists; nothing here imports driftcast.
"""

import math
from itertools import product


def manhattan(a, b):
    return sum(abs(x - y) for x, y in zip(a, b))


def euclidean(a, b):
    return math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)))


METRICS = {"manhattan": manhattan, "euclidean": euclidean}


def linear_scan_argmin(x, means, metric):
    best, best_d = None, None
    for k, m in enumerate(means):
        d = METRICS[metric](x, m)
        if best_d is None or d < best_d:
            best, best_d = k, d
    return best, best_d


def mean_of(points):
    n = len(points)
    return tuple(math.fsum(p[j] for p in points) / n for j in range(len(points[0])))


def wcss_of(points, labels, K):
    total = 0.0
    for k in range(K):
        members = [p for p, lb in zip(points, labels) if lb == k]
        if members:
            c = mean_of(members)
            total += sum(euclidean(p, c) ** 2 for p in members)
    return total


def optimal_wcss(points, K):
    """Exhaustive search over every labelling with exactly K non-empty clusters."""
    best = math.inf
    n = len(points)
    for labels in product(range(K), repeat=n):
        # canonical form: first occurrences appear in order 0, 1, 2...
        seen = []
        for lb in labels:
            if lb not in seen:
                seen.append(lb)
        if seen != list(range(len(seen))) or len(seen) != K:
            continue
        best = min(best, wcss_of(points, labels, K))
    return best


def reassignment_lowers_cost(points, labels, K):
    """True if some point is strictly closer to another cluster's mean than to its own.

    Means are recomputed from ``labels``; this is the single-point
    reassignment test with centroids held fixed.
    """
    means = {}
    for k in range(K):
        members = [p for p, lb in zip(points, labels) if lb == k]
        if members:
            means[k] = mean_of(members)
    for p, lb in zip(points, labels):
        own = euclidean(p, means[lb]) ** 2
        for k, m in means.items():
            if k != lb and euclidean(p, m) ** 2 < own * (1 - 1e-12) - 1e-12:
                return True
    return False
