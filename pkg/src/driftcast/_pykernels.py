"""Numpy fallback for the compiled kernels in ``_ckernels.pyx``.

Every loop here accumulates over the component axis in index order, and
``np.bincount`` sums records in array order, so the floating point
operations match the compiled version one for one.
"""

import numpy as np


def _distances_to(X, c, metric):
    s = np.zeros(X.shape[0])
    if metric == 0:
        for j in range(X.shape[1]):
            s += np.abs(X[:, j] - c[j])
        return s
    for j in range(X.shape[1]):
        diff = X[:, j] - c[j]
        s += diff * diff
    return np.sqrt(s)


def pairwise(X, C, metric):
    out = np.empty((X.shape[0], C.shape[0]))
    for k in range(C.shape[0]):
        out[:, k] = _distances_to(X, C[k], metric)
    return out


def assign(X, C, metric):
    D = pairwise(X, C, metric)
    # argmin returns the first minimum: lowest index wins ties
    labels = np.argmin(D, axis=1).astype(np.intp)
    return labels, D[np.arange(X.shape[0]), labels]


def sq_residuals(X, C, labels):
    diff = X - C[labels]
    s = np.zeros(X.shape[0])
    for j in range(X.shape[1]):
        s += diff[:, j] * diff[:, j]
    return s


def cluster_sums(X, labels, K):
    counts = np.bincount(labels, minlength=K).astype(np.intp)
    sums = np.zeros((K, X.shape[1]))
    for j in range(X.shape[1]):
        sums[:, j] = np.bincount(labels, weights=X[:, j], minlength=K)
    return sums, counts
