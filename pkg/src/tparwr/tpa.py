"""Two-phase approximate RWR.

Offline, the tail ``[T, inf)`` of the PageRank series stands in for the
seed-specific stranger part. Online, only the family part ``[0, S-1]`` is
propagated from the seed; the neighbor part ``[S, T-1]`` is the family part
rescaled to the neighbor part's known L1 mass.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cpi import DEFAULT_RESTART_PROB, DEFAULT_TOLERANCE, CpiParams, cpi_run, pagerank
from .graph import Graph

DEFAULT_FAMILY_END = 5
DEFAULT_STRANGER_START = 10


class StaleArtifactError(ValueError):
    """The artifact was preprocessed on a different graph."""


@dataclass(frozen=True)
class TpaParams:
    family_end: int = DEFAULT_FAMILY_END          # S
    stranger_start: int = DEFAULT_STRANGER_START  # T
    restart_prob: float = DEFAULT_RESTART_PROB
    tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self):
        check_split(self.family_end, self.stranger_start)
        CpiParams(self.restart_prob, self.tolerance)


def check_split(family_end: int, stranger_start: int) -> None:
    if family_end < 1:
        raise ValueError(f"S must be >= 1, got {family_end}")
    if not stranger_start > family_end:
        raise ValueError(f"S must be smaller than T, got S={family_end}, T={stranger_start}")


@dataclass(frozen=True, eq=False)
class StrangerArtifact:
    stranger_scores: np.ndarray = field(repr=False)
    graph_fingerprint: int
    restart_prob: float
    tolerance: float
    stranger_start: int

    @property
    def node_count(self) -> int:
        return self.stranger_scores.size

    def check_graph(self, g: Graph) -> None:
        if self.graph_fingerprint != g.fingerprint or self.node_count != g.node_count:
            raise StaleArtifactError(
                f"artifact fingerprint {self.graph_fingerprint:016x} (n={self.node_count}) does "
                f"not match graph fingerprint {g.fingerprint:016x} (n={g.node_count})")

    def __eq__(self, other):
        if not isinstance(other, StrangerArtifact):
            return NotImplemented
        return (self.graph_fingerprint == other.graph_fingerprint
                and self.restart_prob == other.restart_prob
                and self.tolerance == other.tolerance
                and self.stranger_start == other.stranger_start
                and self.stranger_scores.tobytes() == other.stranger_scores.tobytes())


def preprocess(g: Graph, c: float = DEFAULT_RESTART_PROB, tolerance: float = DEFAULT_TOLERANCE,
               stranger_start: int = DEFAULT_STRANGER_START) -> StrangerArtifact:
    """Stranger approximation: PageRank CPI window ``[T, inf)``."""
    if stranger_start < 1:
        raise ValueError(f"T must be >= 1, got {stranger_start}")
    scores = pagerank(g, c, tolerance, start_iter=stranger_start).scores
    scores.setflags(write=False)
    return StrangerArtifact(scores, g.fingerprint, float(c), float(tolerance),
                            int(stranger_start))


def neighbor_scale_factor(c: float, family_end: int, stranger_start: float) -> float:
    """``((1-c)^S - (1-c)^T) / (1 - (1-c)^S)``; ``T`` may be ``math.inf``."""
    if family_end < 1:
        raise ValueError("S must be >= 1")
    if stranger_start < family_end:
        raise ValueError("T must be >= S")
    decay = 1.0 - c
    head = decay ** family_end
    tail = 0.0 if math.isinf(stranger_start) else decay ** stranger_start
    return (head - tail) / (1.0 - head)


def family_part(g: Graph, seed: int, family_end: int, c: float = DEFAULT_RESTART_PROB,
                tolerance: float = DEFAULT_TOLERANCE) -> np.ndarray:
    return cpi_run(g, [int(seed)], CpiParams(c, tolerance, 0, family_end - 1)).scores


def query(g: Graph, artifact: StrangerArtifact, seed: int,
          family_end: int = DEFAULT_FAMILY_END) -> np.ndarray:
    """Approximate RWR: family part + rescaled family part + stranger vector."""
    artifact.check_graph(g)
    check_split(family_end, artifact.stranger_start)
    c = artifact.restart_prob
    family = family_part(g, seed, family_end, c, artifact.tolerance)
    scale = neighbor_scale_factor(c, family_end, artifact.stranger_start)
    return family + scale * family + artifact.stranger_scores


def query_na(g: Graph, seed: int, family_end: int = DEFAULT_FAMILY_END,
             stranger_start: int = DEFAULT_STRANGER_START, c: float = DEFAULT_RESTART_PROB,
             tolerance: float = DEFAULT_TOLERANCE) -> np.ndarray:
    """Ablation without the stranger term; its L1 mass is ``1 - (1-c)^T``."""
    check_split(family_end, stranger_start)
    family = family_part(g, seed, family_end, c, tolerance)
    return family + neighbor_scale_factor(c, family_end, stranger_start) * family
