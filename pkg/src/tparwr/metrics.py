"""Accuracy measures for approximate score vectors."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import rankdata

from .cpi import DEFAULT_RESTART_PROB, DEFAULT_TOLERANCE, cpi_windows
from .graph import Graph
from .tpa import StrangerArtifact, check_split, neighbor_scale_factor, preprocess

DEFAULT_KS = (100, 500, 1000)


class UndefinedCorrelationError(ValueError):
    """Spearman correlation is undefined for a vector whose entries are all tied."""


def _pair(a, b) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    return a, b


def l1_error(a, b) -> float:
    a, b = _pair(a, b)
    return float(np.abs(a - b).sum())


def top_k(scores, k: int) -> np.ndarray:
    """Indices of the ``k`` largest scores; ties go to the smaller node id."""
    scores = np.asarray(scores)
    if not 1 <= k <= scores.size:
        raise ValueError(f"k must lie in [1, {scores.size}], got {k}")
    # stable sort on the negated scores keeps ascending ids within ties
    return np.argsort(-scores, kind="stable")[:k]


def recall_at_k(exact, approx, k: int) -> float:
    exact, approx = _pair(exact, approx)
    hits = np.intersect1d(top_k(exact, k), top_k(approx, k), assume_unique=True)
    return hits.size / k


def spearman(exact, approx) -> float:
    """Pearson correlation of average ranks."""
    exact, approx = _pair(exact, approx)
    if exact.size < 2:
        raise ValueError("spearman needs at least two entries")
    rx, ry = rankdata(exact), rankdata(approx)
    dx, dy = rx - rx.mean(), ry - ry.mean()
    denom = math.sqrt(float(dx @ dx) * float(dy @ dy))
    if denom == 0.0:
        raise UndefinedCorrelationError("all entries of one vector are tied")
    return float(dx @ dy) / denom


@dataclass
class PartError:
    l1_error: float
    theoretical_bound: float

    @property
    def bound_ratio(self) -> float:
        return self.l1_error / self.theoretical_bound if self.theoretical_bound > 0 else math.nan


@dataclass
class ErrorReport:
    """Errors of one approximate vector against CPI ground truth.

    ``neighbor``, ``stranger`` and ``total`` mirror the three column groups of
    the usual error table; recall and Spearman compare the final vectors.
    """
    seed: int
    neighbor: PartError
    stranger: PartError
    total: PartError
    recall_at_k: dict = field(default_factory=dict)
    spearman: float = math.nan

    def to_row(self) -> dict:
        row = {"seed": self.seed}
        for name in ("neighbor", "stranger", "total"):
            part = getattr(self, name)
            row[f"{name}_bound"] = part.theoretical_bound
            row[f"{name}_error"] = part.l1_error
            row[f"{name}_ratio"] = part.bound_ratio
        for k, value in sorted(self.recall_at_k.items()):
            row[f"recall@{k}"] = value
        row["spearman"] = self.spearman
        return row


def error_bounds(c: float, family_end: int, stranger_start: int) -> dict:
    head, tail = (1 - c) ** family_end, (1 - c) ** stranger_start
    return {"neighbor": 2 * head - 2 * tail, "stranger": 2 * tail, "total": 2 * head}


def bound_report(g: Graph, seed: int, family_end: int, stranger_start: int,
                 c: float = DEFAULT_RESTART_PROB, tolerance: float = DEFAULT_TOLERANCE,
                 artifact: StrangerArtifact | None = None,
                 ks: Sequence[int] = DEFAULT_KS) -> ErrorReport:
    """Exact family/neighbor/stranger parts from one CPI pass versus TPA.

    Pass a matching ``artifact`` to avoid recomputing the PageRank tail for
    every seed.
    """
    check_split(family_end, stranger_start)
    if artifact is None:
        artifact = preprocess(g, c, tolerance, stranger_start)
    artifact.check_graph(g)
    if (artifact.restart_prob, artifact.stranger_start) != (c, stranger_start):
        raise ValueError("artifact was preprocessed with different c or T")
    (family, neighbor, stranger), run = cpi_windows(g, [seed], [family_end, stranger_start],
                                                     c, tolerance)
    neighbor_approx = neighbor_scale_factor(c, family_end, stranger_start) * family
    approx = family + neighbor_approx + artifact.stranger_scores
    bounds = error_bounds(c, family_end, stranger_start)
    report = ErrorReport(
        seed=int(seed),
        neighbor=PartError(l1_error(neighbor, neighbor_approx), bounds["neighbor"]),
        stranger=PartError(l1_error(stranger, artifact.stranger_scores), bounds["stranger"]),
        total=PartError(l1_error(run.scores, approx), bounds["total"]),
    )
    report.recall_at_k = {k: recall_at_k(run.scores, approx, k) for k in ks
                          if k <= g.node_count}
    try:
        report.spearman = spearman(run.scores, approx)
    except UndefinedCorrelationError:
        report.spearman = math.nan
    return report


def summarize(rows: Iterable[dict]) -> dict:
    """Mean and population standard deviation of every numeric column."""
    rows = list(rows)
    if not rows:
        raise ValueError("nothing to summarize")
    out = {}
    for key in rows[0]:
        if key == "seed":
            continue
        values = np.array([r[key] for r in rows], dtype=np.float64)
        out[key] = (float(np.mean(values)), float(np.std(values)))
    return out


def write_csv(rows: Sequence[dict], fh) -> None:
    writer = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: format_value(v) for k, v in row.items()})


def format_value(v) -> str:
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else str(v)
    return str(v)


def format_table(summary: dict, label: str = "graph") -> str:
    """Neighbor/stranger/total blocks of bound, mean error and percentage."""
    buf = io.StringIO()
    buf.write(f"{'':12s} {'bound (A)':>10s} {'error (B)':>10s} {'std':>8s} {'B/A':>8s}\n")
    for name in ("neighbor", "stranger", "total"):
        bound = summary[f"{name}_bound"][0]
        err, std = summary[f"{name}_error"]
        ratio = err / bound if bound > 0 else math.nan
        buf.write(f"{name:12s} {bound:10.4f} {err:10.4f} {std:8.4f} {100 * ratio:7.2f}%\n")
    for key, (mean, std) in summary.items():
        if key.startswith("recall@") or key == "spearman":
            buf.write(f"{key:12s} {mean:10.4f} (std {std:.4f})\n")
    return f"[{label}]\n" + buf.getvalue()
