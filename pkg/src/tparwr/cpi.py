"""Cumulative power iteration (CPI).

RWR is the sum of interim vectors ``x(i) = c * ((1 - c) A_norm.T)^i q``. Each
interim vector is one propagation sweep from the previous one, so any window
``[start, terminal]`` of the series can be accumulated in a single pass.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .graph import Graph, propagation_sweep

DEFAULT_RESTART_PROB = 0.15
DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class CpiParams:
    restart_prob: float = DEFAULT_RESTART_PROB
    tolerance: float = DEFAULT_TOLERANCE
    start_iter: int = 0
    terminal_iter: float = math.inf  # inf means "until the tolerance break"

    def __post_init__(self):
        if not 0.0 < self.restart_prob < 1.0:
            raise ValueError(f"restart_prob must lie in (0, 1), got {self.restart_prob}")
        if not self.tolerance > 0.0:
            raise ValueError(f"tolerance must be > 0, got {self.tolerance}")
        if self.start_iter < 0:
            raise ValueError("start_iter must be >= 0")
        if self.terminal_iter < self.start_iter:
            raise ValueError("terminal_iter must be >= start_iter")


@dataclass
class CpiResult:
    scores: np.ndarray
    iterations_run: int
    converged: bool
    residual_l1: float


def seed_vector(g: Graph, seeds: Sequence[int] | int) -> np.ndarray:
    """``q`` with ``1/|seeds|`` on each seed."""
    ids = np.atleast_1d(np.asarray(seeds, dtype=np.int64))
    if ids.size == 0:
        raise ValueError("seed set must not be empty")
    if ids.min() < 0 or ids.max() >= g.node_count:
        bad = ids[(ids < 0) | (ids >= g.node_count)][0]
        raise ValueError(f"seed {bad} is not a node id in [0, {g.node_count})")
    if np.unique(ids).size != ids.size:
        raise ValueError("seed set contains duplicates")
    q = np.zeros(g.node_count, dtype=np.float64)
    q[ids] = 1.0 / ids.size
    return q


def interim_vectors(g: Graph, seeds, c: float) -> Iterator[np.ndarray]:
    """Yield ``x(0), x(1), ...`` forever; the caller decides when to stop."""
    x = c * seed_vector(g, seeds)
    while True:
        yield x
        x = propagation_sweep(g, x, c)


def cpi_windows(g: Graph, seeds, cuts: Sequence[int], c: float = DEFAULT_RESTART_PROB,
                tolerance: float = DEFAULT_TOLERANCE) -> tuple[list[np.ndarray], CpiResult]:
    """Accumulate consecutive windows split at ``cuts`` in one pass.

    With ``cuts = [S, T]`` the windows are ``[0, S-1]``, ``[S, T-1]`` and
    ``[T, inf)``. The second return value summarises the whole run, with
    ``scores`` holding the sum of all windows.
    """
    cuts = [int(k) for k in cuts]
    if any(k < 0 for k in cuts) or any(a > b for a, b in zip(cuts, cuts[1:])):
        raise ValueError("cuts must be non-negative and non-decreasing")
    parts = [np.zeros(g.node_count) for _ in range(len(cuts) + 1)]
    total = np.zeros(g.node_count)
    norm, converged, i = math.nan, False, 0
    for i, x in enumerate(interim_vectors(g, seeds, c)):
        slot = int(np.searchsorted(cuts, i, side="right"))
        parts[slot] += x
        total += x
        norm = float(np.abs(x).sum())
        if i >= 1 and norm < tolerance:
            converged = True
            break
    return parts, CpiResult(total, i, converged, norm)


def cpi_run(g: Graph, seeds, params: CpiParams = CpiParams()) -> CpiResult:
    """Sum ``x(i)`` over ``start_iter <= i <= terminal_iter``.

    ``x(0)`` is included when ``start_iter == 0``. The loop breaks after the
    first sweep whose interim vector has L1 norm below the tolerance; that
    check wins over the terminal bound when both fire at the same ``i``.
    """
    c = params.restart_prob
    r = np.zeros(g.node_count, dtype=np.float64)
    norm, converged, i = math.nan, False, 0
    for i, x in enumerate(interim_vectors(g, seeds, c)):
        if i >= params.start_iter:
            r += x
        norm = float(np.abs(x).sum())
        if i >= 1 and norm < params.tolerance:
            converged = True
            break
        if i >= params.terminal_iter:
            break
    return CpiResult(r, i, converged, norm)


def exact_rwr(g: Graph, seed: int, c: float = DEFAULT_RESTART_PROB,
              tolerance: float = DEFAULT_TOLERANCE) -> np.ndarray:
    """RWR scores for a single seed, solving ``r = (1-c) A_norm.T r + c q``."""
    return cpi_run(g, [int(seed)], CpiParams(c, tolerance)).scores


def pagerank(g: Graph, c: float = DEFAULT_RESTART_PROB, tolerance: float = DEFAULT_TOLERANCE,
             start_iter: int = 0, terminal_iter: float = math.inf) -> CpiResult:
    """PageRank, or a window of its CPI series, with every node as a seed."""
    return cpi_run(g, np.arange(g.node_count),
                   CpiParams(c, tolerance, start_iter, terminal_iter))


def expected_iterations(c: float, tolerance: float) -> int:
    """Sweeps until ``c (1-c)^i < tolerance`` on a stochastic graph."""
    bound = math.log(tolerance / c) / math.log(1.0 - c)
    i = max(1, math.ceil(bound))
    # ceil lands on the boundary when the ratio is an exact power
    return i + 1 if c * (1.0 - c) ** i >= tolerance else i
