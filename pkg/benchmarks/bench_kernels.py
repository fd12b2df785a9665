"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py --n 200000 --k 5 --repeat 5
"""

import argparse
import time

import numpy as np

from driftcast import kernels
from driftcast.clustering import InitStrategy, lloyd_fit
from driftcast.ingestion import generate_synthetic


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--n", type=int, default=200_000)
    ap.add_argument("--k", type=int, default=5)
    ap.add_argument("--fit-days", type=int, default=20_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    X = rng.uniform(0, 300, size=(args.n, 4))
    C = X[rng.choice(args.n, args.k, replace=False)]
    labels = rng.integers(0, args.k, size=args.n)
    ds = generate_synthetic(1, args.fit_days)

    rows = []
    results = {}
    for name in sorted(kernels.BACKENDS):
        prev = kernels.use_backend(name)
        try:
            t_assign_l1 = best_of(lambda: kernels.assign(X, C, "manhattan"), args.repeat)
            t_assign_l2 = best_of(lambda: kernels.assign(X, C, "euclidean"), args.repeat)
            t_sums = best_of(lambda: kernels.cluster_sums(X, labels, args.k), args.repeat)
            t_fit = best_of(lambda: lloyd_fit(ds, args.k, "euclidean", InitStrategy.random(3)), max(1, args.repeat // 2))
            results[name] = (kernels.assign(X, C, "euclidean"), lloyd_fit(ds, args.k, "euclidean", InitStrategy.random(3)))
        finally:
            kernels.use_backend(prev)
        rows.append((name, t_assign_l1, t_assign_l2, t_sums, t_fit))

    print(f"n={args.n} d=4 K={args.k}; lloyd_fit on {args.fit_days} synthetic days; best of {args.repeat}")
    print(f"{'backend':<8} {'assign L1':>11} {'assign L2':>11} {'sums':>11} {'lloyd_fit':>11}")
    for name, *ts in rows:
        print(f"{name:<8} " + " ".join(f"{t * 1e3:9.2f}ms" for t in ts))
    if len(rows) == 2:
        base = {r[0]: r[1:] for r in rows}
        speed = [p / c for c, p in zip(base["cython"], base["python"])]
        print(f"{'speedup':<8} " + " ".join(f"{s:10.2f}x" for s in speed))
        (la, da), fa = results["cython"]
        (lb, db), fb = results["python"]
        same = np.array_equal(la, lb) and da.tobytes() == db.tobytes() and fa == fb
        print(f"bit-identical results across backends: {same}")


if __name__ == "__main__":
    main()
