"""
Choosing S and T
================

Larger S buys accuracy with online time. Raising T shrinks the stranger
error but pushes more mass into the neighbor approximation.
"""

import time

import numpy as np

from tparwr import bound_report, generate_block_graph, preprocess, query, sample_seeds

g = generate_block_graph(10000, 80000, 200, 0.9, rng_seed=1)
seeds = sample_seeds(g, 20, 0)


def sweep(s, t):
    a = preprocess(g, 0.15, 1e-9, t)
    t0 = time.perf_counter()
    for seed in seeds:
        query(g, a, seed, s)
    ms = 1e3 * (time.perf_counter() - t0) / len(seeds)
    reps = [bound_report(g, seed, s, t, artifact=a, ks=()) for seed in seeds]
    return ms, [np.mean([getattr(x, p).l1_error for x in reps])
                for p in ("total", "neighbor", "stranger")]


print("T = 10")
for s in range(2, 9):
    ms, (tot, nb, st) = sweep(s, 10)
    print(f"  S={s}  {ms:6.2f} ms  total={tot:.4f}")

print("S = 5")
for t in (6, 8, 10, 15, 20, 30):
    ms, (tot, nb, st) = sweep(5, t)
    print(f"  T={t:2d}  total={tot:.4f}  neighbor={nb:.4f}  stranger={st:.4f}")
