"""Command-line front end: preprocess, query, evaluate, sweep, analyze.

Primary CSV outputs are deterministic for fixed flags. Wall-clock timings go
to stdout and to a ``<out>.timing.csv`` sidecar next to the primary file.
"""
from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import analysis, metrics
from .cpi import DEFAULT_RESTART_PROB, DEFAULT_TOLERANCE, exact_rwr
from .graph import DanglingPolicy, load_edge_list, set_threads
from .persistence import artifact_size, load_artifact, save_artifact
from .tpa import (DEFAULT_FAMILY_END, DEFAULT_STRANGER_START, StaleArtifactError, preprocess,
                  query, query_na)


def _ms(seconds: float) -> float:
    return round(1000.0 * seconds, 3)


def _timing_path(out: Path) -> Path:
    return out.with_name(out.stem + ".timing.csv")


def _load(args):
    t0 = time.perf_counter()
    g, ids = load_edge_list(args.graph, args.dangling)
    print(f"loaded {args.graph}: n={g.node_count} m={g.edge_count} "
          f"sinks={int(g.sink_mask.sum())} policy={g.dangling_policy.value} "
          f"({_ms(time.perf_counter() - t0)} ms)")
    return g, ids


def _write_rows(rows, path: Path):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        metrics.write_csv(rows, fh)


def _parse_range(text: str) -> list[int]:
    try:
        lo, hi = (int(p) for p in text.split(".."))
    except ValueError:
        raise argparse.ArgumentTypeError(f"range must look like A..B, got {text!r}") from None
    if hi < lo:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return list(range(lo, hi + 1))


def cmd_preprocess(args) -> int:
    g, _ = _load(args)
    t0 = time.perf_counter()
    artifact = preprocess(g, args.c, args.epsilon, args.T)
    elapsed = time.perf_counter() - t0
    size = save_artifact(artifact, args.out)
    print(f"preprocess_ms={_ms(elapsed)} artifact_bytes={size} out={args.out}")
    return 0


def _print_scores(scores, ids, k):
    order = metrics.top_k(scores, k)
    labels = ids.to_external(order)
    for rank, (node, label) in enumerate(zip(order, labels), start=1):
        print(f"{rank}\t{label}\t{scores[node]!r}")


def cmd_query(args) -> int:
    g, ids = _load(args)
    artifact = load_artifact(args.artifact)
    artifact.check_graph(g)
    if args.S >= artifact.stranger_start:
        raise _UsageError(f"--S {args.S} must be smaller than the artifact's "
                          f"T={artifact.stranger_start}")
    seed = ids.to_internal(args.seed)
    c, eps, t = artifact.restart_prob, artifact.tolerance, artifact.stranger_start
    t0 = time.perf_counter()
    if args.na:
        scores = query_na(g, seed, args.S, t, c, eps)
    else:
        scores = query(g, artifact, seed, args.S)
    online = time.perf_counter() - t0
    k = args.top_k if args.top_k is not None else g.node_count
    _print_scores(scores, ids, min(k, g.node_count))
    print(f"online_ms={_ms(online)}")
    if args.exact:
        t0 = time.perf_counter()
        exact = exact_rwr(g, seed, c, eps)
        print(f"exact_ms={_ms(time.perf_counter() - t0)}")
        report = metrics.bound_report(g, seed, args.S, t, c, eps, artifact=artifact)
        summary = {k: (v, 0.0) for k, v in report.to_row().items() if k != "seed"}
        print(metrics.format_table(summary, label=f"seed {args.seed}"), end="")
        if args.na:
            print(f"tpa_na_l1_error={metrics.l1_error(exact, scores)!r}")
    return 0


def _evaluate_seeds(g, seeds, s, t, c, eps, ks, artifact):
    rows, online, exact_times = [], [], []
    for seed in seeds:
        t0 = time.perf_counter()
        approx = query(g, artifact, seed, s)
        online.append(time.perf_counter() - t0)
        t0 = time.perf_counter()
        exact = exact_rwr(g, seed, c, eps)
        exact_times.append(time.perf_counter() - t0)
        row = metrics.bound_report(g, seed, s, t, c, eps, artifact=artifact, ks=ks).to_row()
        na = query_na(g, seed, s, t, c, eps)
        row["na_l1_error"] = metrics.l1_error(exact, na)
        for k in ks:
            if k <= g.node_count:
                row[f"na_recall@{k}"] = metrics.recall_at_k(exact, na, k)
        rows.append(row)
    return rows, online, exact_times


def cmd_evaluate(args) -> int:
    if args.S >= args.T:
        raise _UsageError(f"--S {args.S} must be smaller than --T {args.T}")
    g, ids = _load(args)
    t0 = time.perf_counter()
    artifact = preprocess(g, args.c, args.epsilon, args.T)
    prep = time.perf_counter() - t0
    seeds = analysis.sample_seeds(g, args.num_seeds, args.rng_seed)
    rows, online, exact_times = _evaluate_seeds(g, seeds, args.S, args.T, args.c, args.epsilon,
                                                args.k, artifact)
    summary = metrics.summarize(rows)
    out = {"graph": Path(args.graph).name, "n": g.node_count, "m": g.edge_count,
           "S": args.S, "T": args.T, "c": args.c, "epsilon": args.epsilon,
           "num_seeds": len(seeds)}
    for key, (mean, std) in summary.items():
        out[key] = mean
        if key.endswith("_error") or key == "spearman":
            out[f"{key}_std"] = std
    _write_rows([out], Path(args.out))
    if args.per_seed:
        for row in rows:
            row["seed"] = int(ids.to_external(row["seed"]))
        _write_rows(rows, Path(args.per_seed))
    timing = {"preprocess_ms": _ms(prep), "mean_online_ms": _ms(np.mean(online)),
              "mean_exact_ms": _ms(np.mean(exact_times)),
              "artifact_bytes": artifact_size(g.node_count)}
    _write_rows([timing], _timing_path(Path(args.out)))
    print(metrics.format_table(summary, label=Path(args.graph).name), end="")
    print(" ".join(f"{k}={v}" for k, v in timing.items()))
    return 0


def cmd_sweep(args) -> int:
    values = args.range
    pairs = [(v, args.fixed) if args.vary == "S" else (args.fixed, v) for v in values]
    for s, t in pairs:
        if s < 1 or s >= t:
            raise _UsageError(f"invalid split S={s}, T={t}: need 1 <= S < T")
    g, _ = _load(args)
    seeds = analysis.sample_seeds(g, args.num_seeds, args.rng_seed)
    rows, timing_rows = [], []
    artifacts = {}
    for value, (s, t) in zip(values, pairs):
        if t not in artifacts:
            artifacts[t] = preprocess(g, args.c, args.epsilon, t)
        artifact = artifacts[t]
        errors, na_errors, sa_errors, online = [], [], [], []
        for seed in seeds:
            t0 = time.perf_counter()
            query(g, artifact, seed, s)
            online.append(time.perf_counter() - t0)
            report = metrics.bound_report(g, seed, s, t, args.c, args.epsilon,
                                          artifact=artifact, ks=())
            errors.append(report.total.l1_error)
            na_errors.append(report.neighbor.l1_error)
            sa_errors.append(report.stranger.l1_error)
        rows.append({"param_value": value, "S": s, "T": t,
                     "mean_l1_error": float(np.mean(errors)),
                     "na_error": float(np.mean(na_errors)),
                     "sa_error": float(np.mean(sa_errors))})
        timing_rows.append({"param_value": value, "mean_online_ms": _ms(np.mean(online))})
        print(f"{args.vary}={value}: l1={rows[-1]['mean_l1_error']:.4f} "
              f"na={rows[-1]['na_error']:.4f} sa={rows[-1]['sa_error']:.4f} "
              f"online_ms={timing_rows[-1]['mean_online_ms']}")
    _write_rows(rows, Path(args.out))
    _write_rows(timing_rows, _timing_path(Path(args.out)))
    return 0


def cmd_analyze(args) -> int:
    g, _ = _load(args)
    graphs = [(Path(args.graph).name, g)]
    if args.random_counterpart:
        graphs.append(("random", analysis.random_counterpart(g, args.rng_seed)))
    rows = []
    for label, graph in graphs:
        seeds = analysis.sample_seeds(graph, args.num_seeds, args.rng_seed)
        if args.mode == "ci":
            stats = analysis.column_difference_profile(graph, seeds, args.iterations,
                                                       args.sample_size, args.rng_seed)
            for t, i in enumerate(stats.iterations):
                rows.append({"graph_label": label, "i": i,
                             "C_i": float(stats.c_values[:, t].mean()),
                             "mean_nnz": float(stats.mean_nnz[:, t].mean()),
                             "sampled_columns": stats.sample_size,
                             "sampled": stats.sampled})
        else:
            values = [analysis.block_structure_stat(graph, s, args.S, args.c, args.epsilon)
                      for s in seeds]
            rows.append({"graph_label": label, "S": args.S, "stat": float(np.mean(values)),
                         "stat_std": float(np.std(values))})
        print(rows[-1])
    _write_rows(rows, Path(args.out))
    return 0


class _UsageError(Exception):
    pass


def _common(p: argparse.ArgumentParser, graph=True):
    if graph:
        p.add_argument("--graph", required=True, help="edge list (.txt or .gz)")
        p.add_argument("--dangling", default=DanglingPolicy.SELF_LOOP.value,
                       choices=[m.value for m in DanglingPolicy])
    p.add_argument("--threads", type=int, default=1, help="1 = deterministic reference mode")


def _params(p: argparse.ArgumentParser):
    p.add_argument("--c", type=float, default=DEFAULT_RESTART_PROB, help="restart probability")
    p.add_argument("--epsilon", type=float, default=DEFAULT_TOLERANCE)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tparwr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", help="compute and save the stranger vector")
    _common(p)
    _params(p)
    p.add_argument("--T", type=int, default=DEFAULT_STRANGER_START)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("query", help="approximate RWR for one seed")
    _common(p)
    p.add_argument("--artifact", required=True)
    p.add_argument("--seed", type=int, required=True, help="external node label")
    p.add_argument("--S", type=int, default=DEFAULT_FAMILY_END)
    p.add_argument("--top-k", type=int, default=None)
    p.add_argument("--exact", action="store_true", help="also compute exact RWR and errors")
    p.add_argument("--na", action="store_true", help="omit the stranger term")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("evaluate", help="error table over random seeds")
    _common(p)
    _params(p)
    p.add_argument("--S", type=int, default=DEFAULT_FAMILY_END)
    p.add_argument("--T", type=int, default=DEFAULT_STRANGER_START)
    p.add_argument("--num-seeds", type=int, default=30)
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--k", type=int, nargs="+", default=list(metrics.DEFAULT_KS))
    p.add_argument("--per-seed", default=None, help="optional CSV with one row per seed")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep", help="vary S or T and record errors")
    _common(p)
    _params(p)
    p.add_argument("--vary", choices=["S", "T"], required=True)
    p.add_argument("--range", type=_parse_range, required=True, help="inclusive A..B")
    p.add_argument("--fixed", type=int, required=True, help="value of the other parameter")
    p.add_argument("--num-seeds", type=int, default=30)
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("analyze", help="column-spread or block-structure statistics")
    _common(p)
    _params(p)
    p.add_argument("--mode", choices=["ci", "block"], required=True)
    p.add_argument("--iterations", type=int, nargs="+", default=[1, 3, 5, 7])
    p.add_argument("--sample-size", type=int, default=None)
    p.add_argument("--S", type=int, default=DEFAULT_FAMILY_END)
    p.add_argument("--num-seeds", type=int, default=30)
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--random-counterpart", action="store_true",
                   help="repeat on a uniform random graph with the same n and m")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_analyze)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        set_threads(args.threads)
        return args.func(args)
    except _UsageError as exc:
        parser.error(str(exc))
    except (ValueError, KeyError, OSError, StaleArtifactError) as exc:
        print(f"tparwr: error: {exc}", file=sys.stderr)
        return 1
    finally:
        set_threads(1)


if __name__ == "__main__":
    sys.exit(main())
