"""Supplementary: the Slashdot trend checks rerun on a synthetic community graph.

These do not stand in for the real-data acceptance criteria. A planted
partition graph has far weaker community structure than a social network, so
only directional trends and structural properties are asserted here; the
error ratios are printed for reference.
"""
import time

import numpy as np
import pytest

from tparwr import (block_structure_stat, bound_report, column_difference_profile, exact_rwr,
                    generate_block_graph, preprocess, query, query_na, random_counterpart,
                    recall_at_k, sample_seeds)
from tparwr.metrics import summarize

C, EPS, S, T = 0.15, 1e-9, 5, 15

pytestmark = pytest.mark.slow


@pytest.fixture(scope="module")
def proxy():
    g = generate_block_graph(10000, 80000, 200, 0.9, rng_seed=0)
    return g, sample_seeds(g, 30, 0)


@pytest.fixture(scope="module")
def proxy_eval(proxy):
    g, seeds = proxy
    artifact = preprocess(g, C, EPS, T)
    rows, online, exact_times, na_recall, gaps = [], [], [], [], []
    for seed in seeds:
        t0 = time.perf_counter()
        approx = query(g, artifact, seed, S)
        online.append(time.perf_counter() - t0)
        t0 = time.perf_counter()
        exact = exact_rwr(g, seed, C, EPS)
        exact_times.append(time.perf_counter() - t0)
        rows.append(bound_report(g, seed, S, T, C, EPS, artifact, ks=(100,)).to_row())
        na = query_na(g, seed, S, T, C, EPS)
        na_recall.append(recall_at_k(exact, na, 100))
        gaps.append(np.abs(approx - na).sum())
    return summarize(rows), np.mean(online), np.mean(exact_times), np.mean(na_recall), gaps


def test_proxy_error_ratios_within_bounds(proxy_eval):
    summary = proxy_eval[0]
    print({k: round(summary[k][0], 4) for k in
           ("total_ratio", "neighbor_ratio", "stranger_ratio", "recall@100", "spearman")})
    for part in ("total", "neighbor", "stranger"):
        assert 0 < summary[f"{part}_ratio"][0] < 1


def test_proxy_speedup(proxy_eval):
    _, online, exact, _, _ = proxy_eval
    assert exact / online >= 5


def test_proxy_na_ablation(proxy_eval):
    summary, _, _, na_recall, gaps = proxy_eval
    assert summary["recall@100"][0] >= na_recall
    for gap in gaps:
        assert abs(gap - (1 - C) ** T) <= EPS / C


def test_proxy_block_structure(proxy):
    g, seeds = proxy
    r = random_counterpart(g, 0)
    real = np.mean([block_structure_stat(g, s, S) for s in seeds])
    rand = np.mean([block_structure_stat(r, s, S) for s in sample_seeds(r, 30, 0)])
    assert real < rand


def test_proxy_column_spread(proxy):
    g, seeds = proxy
    stats = column_difference_profile(g, seeds, [1, 7], sample_size=300, rng_seed=0)
    c1, c7 = stats.c_values.mean(axis=0)
    nnz1, nnz7 = stats.mean_nnz.mean(axis=0)
    assert stats.sampled
    assert c7 < c1 and nnz7 > nnz1


def _errors(g, seeds, s, t):
    artifact = preprocess(g, C, EPS, t)
    reports = [bound_report(g, seed, s, t, C, EPS, artifact, ks=()) for seed in seeds]
    return {p: np.mean([getattr(r, p).l1_error for r in reports])
            for p in ("total", "neighbor", "stranger")}


def test_proxy_parameter_trends(proxy):
    g, seeds = proxy
    assert _errors(g, seeds, 7, 10)["total"] < _errors(g, seeds, 2, 10)["total"]
    t6, t20 = _errors(g, seeds, 5, 6), _errors(g, seeds, 5, 20)
    assert t20["stranger"] < t6["stranger"]
    assert t20["neighbor"] > t6["neighbor"]
