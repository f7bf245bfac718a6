#!/usr/bin/env python3
"""Compare the numba loop kernels with the numpy fallbacks.

Times each kernel on inputs shaped like one underlying graph of the n = 6 and
n = 7 scans, checks the two variants agree, then times a full scan under each
setting of SIGNEDTURAN_DISABLE_NUMBA in a fresh interpreter.

    python benchmarks/bench_kernels.py --runs 5 --json bench.json
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

from signedturan import _accel, kernels
from signedturan.search import layout, vertex_pairs

SEED = 42


def best_of(func, args, runs):
    func(*args)  # warm-up, includes compilation
    times = []
    for _ in range(runs):
        start = time.perf_counter()
        func(*args)
        times.append(time.perf_counter() - start)
    return min(times)


def kernel_inputs(n):
    """Inputs for the densest underlying graph on n vertices."""
    lay = layout(n, (1 << len(vertex_pairs(n))) - 1)
    codes = np.arange(1 << len(lay.free_edges), dtype=np.uint64)
    us = np.array([u for u, _ in lay.free_edges], dtype=np.int64)
    vs = np.array([v for _, v in lay.free_edges], dtype=np.int64)
    base = lay.base_matrix()
    mats = kernels._signed_batch_numpy(base, us, vs, codes)
    tri = np.array(sorted({t for q in [tuple(range(n))] for t in lay.star_masks(q)}), dtype=np.uint64)
    sizes = np.array([n, 3], dtype=np.int64)
    ptr = np.array([0, tri.size, tri.size + 1], dtype=np.int64)
    masks = np.concatenate([tri, tri[:1]])
    return {
        "signed_batch": (base, us, vs, codes),
        "eigh_batch": (mats, True),
        "even_on_all": (codes, tri),
        "max_balanced_clique": (codes, sizes, ptr, masks),
    }


def compare(n, runs):
    rows = []
    for name, args in kernel_inputs(n).items():
        loop = getattr(kernels, f"_{name}_loop")
        numpy_fn = getattr(kernels, f"_{name}_numpy")
        a, b = loop(*args), numpy_fn(*args)
        a, b = (a[0], b[0]) if isinstance(a, tuple) else (a, b)
        rows.append({
            "n": n,
            "kernel": name,
            "batch": int(args[0].shape[0]) if name != "signed_batch" else int(args[3].shape[0]),
            "loop_s": best_of(loop, args, runs),
            "numpy_s": best_of(numpy_fn, args, runs),
            "agree": bool(np.allclose(a, b, atol=1e-9)),
        })
    return rows


def scan_time(n, disable):
    code = (
        "import time; from signedturan.search import scan; t = time.perf_counter();"
        f"scan({n}, list(range(3, {n})), index=True, c3=True, lemmas=True);"
        "print(time.perf_counter() - t)"
    )
    env = dict(os.environ, SIGNEDTURAN_DISABLE_NUMBA="1" if disable else "0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("--runs", type=int, default=5)
    parser.add_argument("--orders", type=int, nargs="+", default=[6, 7])
    parser.add_argument("--scan-n", type=int, default=5, help="order for the end-to-end scan timing")
    parser.add_argument("--json", help="also write results here")
    args = parser.parse_args()

    if not _accel.USE_NUMBA:
        print("numba is off in this process; loop timings are interpreted Python", file=sys.stderr)

    rows = [row for n in args.orders for row in compare(n, args.runs)]
    print(f"{'n':>2} {'kernel':<20} {'batch':>7} {'loop ms':>10} {'numpy ms':>10} {'speedup':>8} agree")
    for r in rows:
        speed = r["numpy_s"] / r["loop_s"] if r["loop_s"] else float("inf")
        print(f"{r['n']:>2} {r['kernel']:<20} {r['batch']:>7} {1e3 * r['loop_s']:>10.2f} "
              f"{1e3 * r['numpy_s']:>10.2f} {speed:>7.2f}x {r['agree']}")

    scans = {"n": args.scan_n, "numba_s": scan_time(args.scan_n, False), "numpy_s": scan_time(args.scan_n, True)}
    print(f"full scan n={scans['n']}: numba {scans['numba_s']:.2f}s, numpy {scans['numpy_s']:.2f}s")

    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"kernels": rows, "scan": scans}, fh, indent=2)
    return 0 if all(r["agree"] for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
