"""Empirical statistics behind the two approximations.

* Column spread of ``(A_norm.T)^i``: as ``i`` grows, columns get denser and
  closer to each other in L1, which is why a PageRank tail can stand in for
  a seed's tail.
* Block structure: on community-structured graphs the family part barely
  moves under ``S`` further undamped sweeps.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cpi import DEFAULT_RESTART_PROB, DEFAULT_TOLERANCE
from .graph import Graph, generate_random_graph
from .tpa import family_part

DEFAULT_SAMPLE_SIZE = 1000
_BLOCK = 64


def default_sample_size(g: Graph) -> int:
    return min(g.node_count - 1, DEFAULT_SAMPLE_SIZE)


def matrix_power_columns(g: Graph, columns, i: int) -> np.ndarray:
    """Columns ``columns`` of ``(A_norm.T)^i`` as an (n, k) dense array."""
    columns = np.atleast_1d(np.asarray(columns, dtype=np.int64))
    out = np.zeros((g.node_count, columns.size))
    out[columns, np.arange(columns.size)] = 1.0
    for _ in range(i):
        out = g.spread(out)
    return out


@dataclass
class ColumnStats:
    iterations: list
    c_values: np.ndarray      # (seeds, iterations)
    mean_nnz: np.ndarray      # (seeds, iterations)
    sampled: bool
    sample_size: int


def column_difference_profile(g: Graph, seeds: Sequence[int], iterations: Sequence[int],
                              sample_size: int | None = None, rng_seed: int = 0) -> ColumnStats:
    """``C_i`` and mean column nnz for several seeds and powers at once.

    One column sample is shared by all seeds; a seed's own column is dropped
    from its comparison set. ``C_i = (1/n) sum_{j != s} ||c_s - c_j||_1`` is
    estimated as ``(n-1)/n`` times the sample mean, which is exact under full
    enumeration.
    """
    n = g.node_count
    seeds = np.atleast_1d(np.asarray(seeds, dtype=np.int64))
    iterations = sorted({int(i) for i in iterations})
    if not iterations or iterations[0] < 1:
        raise ValueError("iterations must be >= 1")
    if seeds.min() < 0 or seeds.max() >= n:
        raise ValueError("seed out of range")
    if n < 2:
        raise ValueError("need at least two nodes")
    if sample_size is None:
        sample_size = default_sample_size(g)
    if sample_size < 1:
        raise ValueError("sample_size must be >= 1")
    sampled = sample_size < n - 1
    if sampled:
        sample = np.sort(np.random.default_rng(rng_seed).choice(n, sample_size, replace=False))
    else:
        sample = np.arange(n)

    dist_sum = np.zeros((seeds.size, len(iterations)))
    nnz_sum = np.zeros((seeds.size, len(iterations)))
    counts = np.array([np.sum(sample != s) for s in seeds], dtype=np.float64)

    seed_cols = matrix_power_columns(g, seeds, 0)
    seed_levels = []
    level = 0
    for i in iterations:
        for _ in range(i - level):
            seed_cols = g.spread(seed_cols)
        level = i
        seed_levels.append(seed_cols)

    for start in range(0, sample.size, _BLOCK):
        cols = sample[start:start + _BLOCK]
        block = matrix_power_columns(g, cols, 0)
        level = 0
        for t, i in enumerate(iterations):
            for _ in range(i - level):
                block = g.spread(block)
            level = i
            nnz = np.count_nonzero(block, axis=0)
            for si, s in enumerate(seeds):
                keep = cols != s
                d = np.abs(block[:, keep] - seed_levels[t][:, si:si + 1]).sum(axis=0)
                dist_sum[si, t] += d.sum()
                nnz_sum[si, t] += nnz[keep].sum()

    scale = (n - 1) / n
    return ColumnStats(iterations, scale * dist_sum / counts[:, None],
                       nnz_sum / counts[:, None], sampled, int(sample.size))


def column_difference_stat(g: Graph, seed: int, i: int, sample_size: int | None = None,
                           rng_seed: int = 0) -> tuple[float, float]:
    """``(C_i estimate, mean nnz per column)`` for one seed and one power."""
    if i < 1:
        raise ValueError("i must be >= 1")
    stats = column_difference_profile(g, [seed], [i], sample_size, rng_seed)
    return float(stats.c_values[0, 0]), float(stats.mean_nnz[0, 0])


def block_structure_stat(g: Graph, seed: int, family_end: int,
                         c: float = DEFAULT_RESTART_PROB,
                         tolerance: float = DEFAULT_TOLERANCE) -> float:
    """``||A_bar^S f - f||_1`` where ``f`` is the family part of ``seed``."""
    if family_end < 1:
        raise ValueError("S must be >= 1")
    f = family_part(g, seed, family_end, c, tolerance)
    moved = f
    for _ in range(family_end):
        moved = g.spread(moved)
    return float(np.abs(moved - f).sum())


def random_counterpart(g: Graph, rng_seed: int) -> Graph:
    """Uniform random digraph with the same node count and input edge count."""
    m = g.edge_count
    if g.dangling_policy.value == "selfloop":
        m -= int(g.sink_mask.sum())
    return generate_random_graph(g.node_count, m, rng_seed, g.dangling_policy)


def sample_seeds(g: Graph, count: int, rng_seed: int) -> np.ndarray:
    """Distinct seeds drawn uniformly from nodes that had out-edges in the input."""
    pool = np.flatnonzero(~g.sink_mask)
    if pool.size == 0:
        pool = np.arange(g.node_count)
    count = min(int(count), pool.size)
    rng = np.random.default_rng(rng_seed)
    return np.sort(rng.choice(pool, size=count, replace=False))
