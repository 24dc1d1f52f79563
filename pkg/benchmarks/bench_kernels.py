"""Benchmark the compiled BFS kernels against the pure-Python fallback.

The backend is chosen once at import time (ECOTAIL_PURE_PYTHON=1 forces the
fallback), so the comparison re-runs this script in a subprocess per backend
and prints a small table.  Pass --headline to also time the desk-scale graph
(60k nodes / 500k edges) on the default backend.

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --nodes 5000 --edges 40000 --workers 8
"""

import argparse
import json
import os
import subprocess
import sys
import time


def _measure(n_nodes, n_edges, workers, seed):
    import numpy as np

    from ecotail import _kernels
    from ecotail.graphs import build_directed_graph, global_efficiency, local_efficiency

    sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "tests"))
    import synth

    graph = build_directed_graph(synth.big_benchmark_edges(n_nodes, n_edges, seed))
    indptr, indices = graph.undirected_csr()

    t0 = time.perf_counter()
    hist = _kernels.pair_distance_histogram(indptr, indices, workers)
    t_glob = time.perf_counter() - t0

    t0 = time.perf_counter()
    values = _kernels.local_efficiency_values(indptr, indices, workers)
    t_loc = time.perf_counter() - t0

    return {
        "backend": _kernels.backend_name(),
        "global_seconds": t_glob,
        "local_seconds": t_loc,
        "checksum": int(hist.sum()),
        "local_mean": float(np.mean(values)) if len(values) else 0.0,
        "global_efficiency": global_efficiency(graph, workers=workers),
        "local_efficiency": local_efficiency(graph, workers=workers),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=3000)
    ap.add_argument("--edges", type=int, default=15000)
    ap.add_argument("--workers", type=int, default=4)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--headline", action="store_true",
                    help="also time 60k nodes / 500k edges on the default backend")
    ap.add_argument("--emit", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()

    if args.emit:  # child process: measure on whatever backend import picked
        print(json.dumps(_measure(args.nodes, args.edges, args.workers, args.seed)))
        return 0

    results = []
    for pure in (False, True):
        env = dict(os.environ)
        env.pop("ECOTAIL_PURE_PYTHON", None)
        if pure:
            env["ECOTAIL_PURE_PYTHON"] = "1"
        cmd = [sys.executable, os.path.abspath(__file__), "--emit",
               "--nodes", str(args.nodes), "--edges", str(args.edges),
               "--workers", str(args.workers), "--seed", str(args.seed)]
        out = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True)
        results.append(json.loads(out.stdout.strip().splitlines()[-1]))

    print(f"graph: {args.nodes} nodes, {args.edges} edges, workers={args.workers}")
    print(f"{'backend':<10} {'global (s)':>12} {'local (s)':>12}")
    for r in results:
        print(f"{r['backend']:<10} {r['global_seconds']:>12.3f} {r['local_seconds']:>12.3f}")
    a, b = results
    if a["backend"] == b["backend"]:
        print("note: compiled extension unavailable; both runs used the fallback")
    else:
        for key in ("checksum", "local_mean", "global_efficiency", "local_efficiency"):
            assert a[key] == b[key], f"backends disagree on {key}: {a[key]} vs {b[key]}"
        speedup = b["global_seconds"] / a["global_seconds"]
        print(f"agreement: exact on all outputs; compiled is {speedup:.1f}x on global")

    if args.headline:
        r = _measure(60_000, 500_000, args.workers, 99)
        print(f"headline ({r['backend']}): global {r['global_seconds']:.1f}s, "
              f"local {r['local_seconds']:.3f}s, "
              f"E_glob={r['global_efficiency']:.4f}, E_loc={r['local_efficiency']:.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
