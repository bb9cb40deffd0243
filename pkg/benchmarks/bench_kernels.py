"""Compare the numba and numpy paths of the permutation kernels.

Part 1 times each kernel pair in-process on random permutation rows (the
compiled functions are warmed up first, so JIT time is excluded). Part 2
runs a few end-to-end workloads (group loading, class enumeration and
analysis) in two subprocesses, one of them with
``GGRAPH_DISABLE_NUMBA=1``, and reports wall times (warm-up excluded there
too).

    python benchmarks/bench_kernels.py [--repeat N] [--skip-end-to-end]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

from ggraph import kernels

END_TO_END = r"""
import json, random, sys, time
from ggraph.gggraph import ClassUnion, analyze, brute_force_component, order_p_classes
from ggraph.groups import alt, load_group
from ggraph import kernels

def run(name, p, pick):
    gf = load_group(name)
    classes, S = order_p_classes(gf.group, p, random.Random(0))
    gf.name_classes(classes)
    c = next(c for c in classes if c.display_name() == pick) if pick else classes[0]
    return ClassUnion.single(gf.group, c, classes, sylow=S)

# warm-up
CU = run("alt:5", 2, None)
analyze(CU); brute_force_component(CU)
out = {"backend": kernels.backend()}
for label, name, p, pick, oracle in [
    ("M11 3A pipeline", "m11", 3, "3A", False),
    ("J2 5C pipeline", "j2", 5, "5C", False),
    ("HS 5C pipeline", "hs", 5, "5C", False),
    ("M11 2A oracle", "m11", 2, None, True),
    ("Sym(8) 7-cycles oracle", "sym:8", 7, None, True),
]:
    t0 = time.perf_counter()
    CU = run(name, p, pick)
    brute_force_component(CU) if oracle else analyze(CU)
    out[label] = time.perf_counter() - t0
json.dump(out, sys.stdout)
"""


def _best(fn, *args, repeat: int) -> float:
    fn(*args)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def kernel_table(repeat: int) -> list[tuple[str, float, float]]:
    rng = np.random.default_rng(0)
    n = 100
    X = np.array([rng.permutation(n) for _ in range(20_000)], dtype=np.int32)
    V = X[:1500]
    A, B = X[:300], X[300:600]
    g = X[0]
    cases = [
        ("element_orders 20000x100", kernels._orders_loop, kernels._orders_numpy, (X,)),
        ("power_rows e=37", kernels._power_loop, kernels._power_numpy, (X, 37)),
        ("commuting_with 20000x100", kernels._commuting_with_loop, kernels._commuting_with_numpy, (g, X)),
        ("commuting_pairs 1500 rows", kernels._commuting_loop, kernels._commuting_numpy, (V,)),
        ("product_rows 300x300", kernels._product_loop, kernels._product_numpy, (A, B)),
    ]
    rows = []
    for label, loop, vec, args in cases:
        rows.append((label, _best(loop, *args, repeat=repeat), _best(vec, *args, repeat=repeat)))
    return rows


def end_to_end() -> dict[str, dict]:
    out = {}
    for disabled in ("0", "1"):
        env = dict(os.environ, GGRAPH_DISABLE_NUMBA=disabled)
        res = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True, check=True)
        d = json.loads(res.stdout)
        out[d.pop("backend")] = d
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--skip-end-to-end", action="store_true")
    args = ap.parse_args(argv)
    if not kernels.HAVE_NUMBA:
        print("numba is unavailable or disabled: both columns run the same Python/numpy code")
    print(f"{'kernel':32} {'loop/numba':>12} {'numpy':>12} {'speedup':>8}")
    for label, a, b in kernel_table(args.repeat):
        print(f"{label:32} {a * 1e3:10.2f}ms {b * 1e3:10.2f}ms {b / a:7.1f}x")
    if not args.skip_end_to_end:
        res = end_to_end()
        print()
        print(f"{'workload':32} " + " ".join(f"{k:>12}" for k in res))
        for label in next(iter(res.values())):
            print(f"{label:32} " + " ".join(f"{res[k][label]:11.2f}s" for k in res))
    return 0


if __name__ == "__main__":
    sys.exit(main())
