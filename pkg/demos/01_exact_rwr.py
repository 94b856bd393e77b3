"""
Exact random walk with restart
==============================

Scores from the cumulative power iteration next to a dense linear solve.
"""

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from tparwr import exact_rwr, generate_random_graph, pagerank
from tparwr.cpi import interim_vectors

# a small directed graph; nodes without out-edges get a self-loop
g = generate_random_graph(200, 800, rng_seed=1)
print(g)

# every interim vector carries c (1-c)^i of the mass, so the sum is a
# geometric series that stops once a term drops below the tolerance
c = 0.15
for i, x in zip(range(6), interim_vectors(g, [0], c)):
    print(i, x.sum(), c * (1 - c) ** i)

r = exact_rwr(g, 0, c)

# the same vector from (I - (1-c) A_norm.T) r = c q
n = g.node_count
src, dst = g.edges()
P = sp.csc_matrix((1.0 / g.out_degree[src], (dst, src)), shape=(n, n))
q = np.zeros(n)
q[0] = 1.0
direct = spla.spsolve(sp.identity(n, format="csc") - (1 - c) * P, c * q)
print("max |cpi - solve| =", np.abs(r - direct).max())

# PageRank is the same series seeded on every node
p = pagerank(g, c).scores
print("pagerank mass", p.sum(), "top nodes", np.argsort(-p)[:5])
