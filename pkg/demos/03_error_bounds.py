"""
Error against the closed-form bounds
====================================

Neighbor, stranger and total L1 errors over a handful of seeds.
"""

from tparwr import bound_report, generate_block_graph, preprocess, sample_seeds
from tparwr.metrics import format_table, summarize

g = generate_block_graph(10000, 80000, 200, 0.9, rng_seed=3)
S, T = 5, 15
artifact = preprocess(g, 0.15, 1e-9, T)

rows = []
for seed in sample_seeds(g, 30, 0):
    rows.append(bound_report(g, seed, S, T, artifact=artifact, ks=(100, 500)).to_row())

# bounds are 2(1-c)^S - 2(1-c)^T, 2(1-c)^T and 2(1-c)^S
print(format_table(summarize(rows), "block graph, S=5, T=15"))
