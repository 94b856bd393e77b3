"""Directed graphs in CSR form and the score-propagation sweep.

The row-normalized adjacency matrix is never stored. A sweep divides each
source score by its out-degree and pushes it along the out-edges, which is
exactly ``(1 - c) * A_norm.T @ x``.
"""
from __future__ import annotations

import enum
import gzip
import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np
import scipy.sparse as sp

_THREADS = 1


def set_threads(count: int) -> None:
    """Number of worker threads used by sweeps. 1 is the reference mode."""
    global _THREADS
    if count < 1:
        raise ValueError(f"thread count must be >= 1, got {count}")
    _THREADS = int(count)


def get_threads() -> int:
    return _THREADS


class DanglingPolicy(str, enum.Enum):
    SELF_LOOP = "selfloop"
    UNIFORM = "uniform"
    DROP = "drop"

    @classmethod
    def parse(cls, value: "DanglingPolicy | str") -> "DanglingPolicy":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "").replace("-", "")
        for member in cls:
            if member.value == key:
                return member
        raise ValueError(f"unknown dangling policy {value!r}; expected one of "
                         f"{[m.value for m in cls]}")


class EdgeListParseError(ValueError):
    def __init__(self, lineno: int, line: str, reason: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {reason}: {line.strip()!r}")


class Graph:
    """Immutable directed graph with sorted, unique out-edge lists.

    ``sink_mask`` marks nodes that had no out-edges in the input, before the
    dangling policy was applied. Under ``SELF_LOOP`` those nodes carry a
    synthetic self-loop; under the other policies their out-degree stays 0.
    """

    def __init__(self, out_offsets, out_targets, dangling_policy=DanglingPolicy.SELF_LOOP,
                 sink_mask=None):
        offsets = np.ascontiguousarray(out_offsets, dtype=np.int64)
        targets = np.ascontiguousarray(out_targets, dtype=np.int64)
        n = offsets.size - 1
        if n < 1:
            raise ValueError("graph must have at least one node")
        if offsets[0] != 0 or offsets[-1] != targets.size:
            raise ValueError("out_offsets must start at 0 and end at the edge count")
        if np.any(np.diff(offsets) < 0):
            raise ValueError("out_offsets must be non-decreasing")
        if targets.size and (targets.min() < 0 or targets.max() >= n):
            raise ValueError("edge target out of range")
        self.dangling_policy = DanglingPolicy.parse(dangling_policy)
        degree = np.diff(offsets)
        if self.dangling_policy is DanglingPolicy.SELF_LOOP and np.any(degree == 0):
            raise ValueError("SELF_LOOP graphs must not contain zero out-degree nodes")
        if sink_mask is None:
            sink_mask = degree == 0
        self.node_count = n
        self.edge_count = int(targets.size)
        self.out_offsets = offsets
        self.out_targets = targets
        self.out_degree = degree
        self.sink_mask = np.asarray(sink_mask, dtype=bool)
        for arr in (self.out_offsets, self.out_targets, self.out_degree, self.sink_mask):
            arr.setflags(write=False)

    @classmethod
    def from_edges(cls, src, dst, node_count: int | None = None,
                   dangling_policy=DanglingPolicy.SELF_LOOP) -> "Graph":
        """Build from parallel arrays of 0-based ids; duplicates are dropped."""
        src = np.asarray(src, dtype=np.int64).ravel()
        dst = np.asarray(dst, dtype=np.int64).ravel()
        if src.shape != dst.shape:
            raise ValueError("src and dst must have the same length")
        if node_count is None:
            if src.size == 0:
                raise ValueError("cannot infer node count from an empty edge set")
            node_count = int(max(src.max(), dst.max())) + 1
        n = int(node_count)
        if n < 1:
            raise ValueError("graph must have at least one node")
        if src.size and (min(src.min(), dst.min()) < 0 or max(src.max(), dst.max()) >= n):
            raise ValueError("edge endpoint out of range")
        policy = DanglingPolicy.parse(dangling_policy)

        codes = np.unique(src * n + dst)
        degree = np.bincount(codes // n, minlength=n)
        sinks = degree == 0
        if policy is DanglingPolicy.SELF_LOOP and sinks.any():
            loops = np.flatnonzero(sinks)
            codes = np.union1d(codes, loops * n + loops)
        rows = codes // n
        offsets = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n), out=offsets[1:])
        return cls(offsets, codes % n, policy, sink_mask=sinks)

    @cached_property
    def fingerprint(self) -> int:
        """64-bit content hash used to tie persisted artifacts to this graph."""
        h = hashlib.blake2b(digest_size=8)
        h.update(np.array([self.node_count, self.edge_count], dtype="<i8").tobytes())
        h.update(self.out_offsets.astype("<i8").tobytes())
        h.update(self.out_targets.astype("<i8").tobytes())
        h.update(self.dangling_policy.value.encode())
        return int.from_bytes(h.digest(), "little")

    @cached_property
    def _in_matrix(self) -> sp.csr_matrix:
        # rows = destinations, so row-slicing gives thread-independent results
        n = self.node_count
        data = np.ones(self.edge_count, dtype=np.float64)
        adj = sp.csr_matrix((data, self.out_targets, self.out_offsets), shape=(n, n))
        return adj.T.tocsr()

    @cached_property
    def _inv_degree(self) -> np.ndarray:
        inv = np.zeros(self.node_count, dtype=np.float64)
        nz = self.out_degree > 0
        inv[nz] = 1.0 / self.out_degree[nz]
        return inv

    @cached_property
    def _zero_degree(self) -> np.ndarray:
        return np.flatnonzero(self.out_degree == 0)

    def _row_blocks(self, parts: int):
        bounds = np.linspace(0, self.node_count, parts + 1).astype(np.int64)
        return [(int(a), int(b), self._in_matrix[a:b]) for a, b in zip(bounds[:-1], bounds[1:])
                if b > a]

    def spread(self, x: np.ndarray) -> np.ndarray:
        """Undamped sweep ``A_norm.T @ x``; ``x`` may be (n,) or (n, k)."""
        x = np.asarray(x, dtype=np.float64)
        if x.shape[0] != self.node_count:
            raise ValueError(f"score vector has length {x.shape[0]}, graph has "
                             f"{self.node_count} nodes")
        z = x * (self._inv_degree if x.ndim == 1 else self._inv_degree[:, None])
        threads = get_threads()
        if threads == 1 or self.node_count < 2 * threads:
            y = self._in_matrix @ z
        else:
            y = np.empty_like(z)
            blocks = self._blocks_for(threads)
            with ThreadPoolExecutor(max_workers=threads) as pool:
                for (a, b, _), part in zip(blocks, pool.map(lambda blk: blk[2] @ z, blocks)):
                    y[a:b] = part
        if self.dangling_policy is DanglingPolicy.UNIFORM and self._zero_degree.size:
            y += x[self._zero_degree].sum(axis=0) / self.node_count
        return np.asarray(y)

    def _blocks_for(self, threads: int):
        cache = self.__dict__.setdefault("_block_cache", {})
        if threads not in cache:
            cache[threads] = self._row_blocks(threads)
        return cache[threads]

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        return np.repeat(np.arange(self.node_count), self.out_degree), self.out_targets.copy()

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.node_count == other.node_count
                and self.edge_count == other.edge_count
                and self.dangling_policy is other.dangling_policy
                and np.array_equal(self.out_offsets, other.out_offsets)
                and np.array_equal(self.out_targets, other.out_targets))

    __hash__ = None

    def __repr__(self):
        return (f"Graph(n={self.node_count}, m={self.edge_count}, "
                f"dangling_policy={self.dangling_policy.value})")


@dataclass(frozen=True)
class NodeIdMap:
    internal_to_external: np.ndarray
    external_to_internal: dict = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        if self.external_to_internal is None:
            lookup = {int(label): i for i, label in enumerate(self.internal_to_external)}
            object.__setattr__(self, "external_to_internal", lookup)
        if len(self.external_to_internal) != len(self.internal_to_external):
            raise ValueError("node labels are not unique")

    def __len__(self):
        return len(self.internal_to_external)

    def to_internal(self, label: int) -> int:
        try:
            return self.external_to_internal[int(label)]
        except KeyError:
            raise KeyError(f"node label {label} not present in graph") from None

    def to_external(self, ids) -> np.ndarray:
        return self.internal_to_external[np.asarray(ids, dtype=np.int64)]

    @classmethod
    def identity(cls, n: int) -> "NodeIdMap":
        return cls(np.arange(n, dtype=np.int64))


def _open_text(path: Path):
    if path.suffix == ".gz":
        return gzip.open(path, "rt", encoding="utf-8")
    return open(path, "r", encoding="utf-8")


def load_edge_list(path, dangling_policy=DanglingPolicy.SELF_LOOP) -> tuple[Graph, NodeIdMap]:
    """Read a whitespace-separated ``src dst`` edge list.

    Lines starting with ``#`` or ``%`` are comments. Columns after the second
    (signs, weights, timestamps) are ignored. Labels are remapped to dense ids
    in ascending label order.
    """
    path = Path(path)
    src, dst = [], []
    with _open_text(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped[0] in "#%":
                continue
            tokens = stripped.split()
            if len(tokens) < 2:
                raise EdgeListParseError(lineno, line, "expected 'src dst'")
            try:
                u, v = int(tokens[0]), int(tokens[1])
            except ValueError:
                raise EdgeListParseError(lineno, line, "non-integer node label") from None
            if u < 0 or v < 0:
                raise EdgeListParseError(lineno, line, "negative node label")
            src.append(u)
            dst.append(v)
    if not src:
        raise ValueError(f"{path}: edge list is empty")
    raw = np.array([src, dst], dtype=np.int64)
    labels, inverse = np.unique(raw, return_inverse=True)
    inverse = inverse.reshape(raw.shape)
    graph = Graph.from_edges(inverse[0], inverse[1], labels.size, dangling_policy)
    return graph, NodeIdMap(labels)


def dump_edge_list(g: Graph, path) -> None:
    """Write ``g`` with internal ids in the same format ``load_edge_list`` reads."""
    src, dst = g.edges()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# n={g.node_count} m={g.edge_count}\n")
        np.savetxt(fh, np.column_stack([src, dst]), fmt="%d")


def _pairs_from_codes(codes: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    # code in [0, n(n-1)) enumerates ordered pairs (u, v) with u != v
    u = codes // (n - 1)
    r = codes % (n - 1)
    return u, r + (r >= u)


def generate_random_graph(node_count: int, edge_count: int, rng_seed: int,
                          dangling_policy=DanglingPolicy.SELF_LOOP) -> Graph:
    """Uniformly random simple digraph with exactly ``edge_count`` sampled edges.

    The dangling policy is applied after sampling, so a SELF_LOOP result can
    have more edges than requested.
    """
    n, m = int(node_count), int(edge_count)
    if n < 1:
        raise ValueError("node_count must be >= 1")
    capacity = n * (n - 1)
    if m < 0 or m > capacity:
        raise ValueError(f"cannot place {m} distinct edges on {n} nodes "
                         f"(at most {capacity} without self-loops)")
    rng = np.random.default_rng(rng_seed)
    if m == 0:
        codes = np.empty(0, dtype=np.int64)
    elif m > n * n / 4:
        codes = rng.permutation(capacity)[:m]
    else:
        codes = np.empty(0, dtype=np.int64)
        while codes.size < m:
            draw = rng.integers(0, capacity, size=int((m - codes.size) * 1.1) + 16)
            merged = np.concatenate([codes, draw])
            _, first = np.unique(merged, return_index=True)
            codes = merged[np.sort(first)][:m]
    u, v = _pairs_from_codes(codes.astype(np.int64), n) if n > 1 else (codes, codes)
    return Graph.from_edges(u, v, n, dangling_policy)


def generate_block_graph(node_count: int, edge_count: int, block_count: int,
                         intra_fraction: float, rng_seed: int, degree_exponent: float = 2.5,
                         dangling_policy=DanglingPolicy.SELF_LOOP) -> Graph:
    """Community-structured digraph: a degree-heterogeneous planted partition.

    Nodes are split into ``block_count`` contiguous blocks. Each node gets a
    Pareto weight; edge sources are drawn by weight, and a target is drawn by
    weight from the source's own block with probability ``intra_fraction``,
    otherwise from the whole graph. Self-loops and duplicates are rejected.
    """
    n, m, k = int(node_count), int(edge_count), int(block_count)
    if not 1 <= k <= n:
        raise ValueError("block_count must lie in [1, node_count]")
    if m > n * (n - 1) // 2:
        raise ValueError("edge_count too large for rejection sampling")
    if not 0.0 <= intra_fraction <= 1.0:
        raise ValueError("intra_fraction must lie in [0, 1]")
    rng = np.random.default_rng(rng_seed)
    weights = rng.pareto(degree_exponent - 1.0, size=n) + 1.0
    cum = np.cumsum(weights)
    bounds = np.linspace(0, n, k + 1).astype(np.int64)
    block_of = np.repeat(np.arange(k), np.diff(bounds))
    cum_lo = np.concatenate([[0.0], cum])[bounds[:-1]]
    cum_hi = cum[bounds[1:] - 1]

    codes = np.empty(0, dtype=np.int64)
    while codes.size < m:
        size = int((m - codes.size) * 1.2) + 64
        src = np.minimum(np.searchsorted(cum, rng.random(size) * cum[-1], side="right"), n - 1)
        b = block_of[src]
        local = rng.random(size) < intra_fraction
        lo = np.where(local, cum_lo[b], 0.0)
        hi = np.where(local, cum_hi[b], cum[-1])
        dst = np.minimum(np.searchsorted(cum, lo + rng.random(size) * (hi - lo), side="right"),
                         n - 1)
        keep = src != dst
        merged = np.concatenate([codes, src[keep] * n + dst[keep]])
        _, first = np.unique(merged, return_index=True)
        codes = merged[np.sort(first)][:m]
    return Graph.from_edges(codes // n, codes % n, n, dangling_policy)


def propagation_sweep(g: Graph, x: np.ndarray, c: float) -> np.ndarray:
    """One damped step: ``y[v] = (1 - c) * sum_{u -> v} x[u] / deg(u)``."""
    if not 0.0 < c < 1.0:
        raise ValueError(f"restart probability must lie in (0, 1), got {c}")
    return (1.0 - c) * g.spread(x)
