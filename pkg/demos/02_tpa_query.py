"""
Two-phase approximate queries
=============================

Preprocess the PageRank tail once, then answer seeds with only S sweeps.
"""

import sys
import time

import numpy as np

from tparwr import (exact_rwr, generate_block_graph, load_edge_list, preprocess, query,
                    query_na, recall_at_k)

if len(sys.argv) > 1:
    g, ids = load_edge_list(sys.argv[1])
else:
    g = generate_block_graph(20000, 160000, 400, 0.9, rng_seed=0)
print(g)

S, T = 5, 15
t0 = time.perf_counter()
artifact = preprocess(g, 0.15, 1e-9, T)
print(f"preprocess {1e3 * (time.perf_counter() - t0):.1f} ms, "
      f"tail mass {artifact.stranger_scores.sum():.6f} (0.85^{T} = {0.85 ** T:.6f})")

seed = 42
t0 = time.perf_counter()
approx = query(g, artifact, seed, S)
online = time.perf_counter() - t0
t0 = time.perf_counter()
exact = exact_rwr(g, seed)
full = time.perf_counter() - t0
print(f"online {1e3 * online:.2f} ms vs exact {1e3 * full:.2f} ms")

print("L1 error", np.abs(exact - approx).sum())
for k in (10, 100, 1000):
    print(f"recall@{k}", recall_at_k(exact, approx, k))

# without the stranger term the top of the ranking barely changes
na = query_na(g, seed, S, T)
print("TPA-NA recall@100", recall_at_k(exact, na, 100))
