#!/usr/bin/env python3
"""Benchmark the dense and sparse graph samplers across network sizes."""

import argparse
import math
import time

import numpy as np

from degreenet.sampler import sample_graph, sample_graph_sparse
from degreenet.weights import WeightVector


def time_sampler(fn, weights, repeats):
    fn(weights, seed=0)  # warm-up
    t0 = time.perf_counter()
    for r in range(repeats):
        fn(weights, seed=1, replicate_id=r)
    return (time.perf_counter() - t0) / repeats


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--zeta", type=float, default=4.0,
                        help="sparsity parameter: weights are sqrt(zeta/n)")
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--max-n", type=int, default=10**6)
    args = parser.parse_args()

    print(f"{'n':>9}  {'dense (s)':>10}  {'sparse (s)':>10}  {'ratio':>7}")
    sizes = [10**3, 10**4, 10**5, 10**6]
    for n in [s for s in sizes if s <= args.max_n]:
        w = WeightVector(values=np.full(n, math.sqrt(args.zeta / n)),
                         model_tag="benchmark")
        sparse_t = time_sampler(sample_graph_sparse, w, args.repeats)
        if n <= 10**4:
            dense_t = time_sampler(sample_graph, w, args.repeats)
            print(f"{n:>9}  {dense_t:>10.4f}  {sparse_t:>10.4f}  "
                  f"{dense_t / sparse_t:>6.1f}x")
        else:
            print(f"{n:>9}  {'-':>10}  {sparse_t:>10.4f}  {'-':>7}")


if __name__ == "__main__":
    main()
