"""Compiled kernels against the numpy fallback on the hot loops.

    python3 benchmarks/bench_kernels.py [--repeat N] [--end-to-end]

Prints one line per kernel and group with the best time of each backend and
the speedup.  Results of both backends are compared before timing.  With
--end-to-end it also times one verify-all run per backend in a fresh process
(GLPSH_PURE_PYTHON selects the fallback) and checks the outputs match.
"""

import argparse
import os
import subprocess
import sys
import time
import timeit

import numpy as np

from glpsh import _pykernels
from glpsh.groups import gl

try:
    from glpsh import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def cases(G):
    T = G.table
    rng = np.random.default_rng(0)
    gens = [int(x) for x in rng.integers(0, G.order, size=2)]
    H = np.sort(_pykernels.closure(T, [gens[0]], G.identity))
    K = np.sort(_pykernels.closure(T, gens, G.identity))
    perms = np.stack([G.conj_perm(s) for s in G.generators])
    mt = (G.mats, G.keys, G.q, G.field.add, G.field.mul, G.n)
    return {
        "mul_table": (mt, np.array_equal),
        "closure": ((T, gens, G.identity), lambda a, b: np.array_equal(np.sort(a), np.sort(b))),
        "double_cosets": ((T, H, K), lambda a, b: all(np.array_equal(x, y) for x, y in zip(a, b))),
        "orbit_labels": ((perms,), np.array_equal),
    }


def best(fn, args, repeat):
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


E2E = [sys.executable, "-m", "glpsh.cli", "verify-all", "--group", "gl:2:3", "--checks", "mackey,hh-relations"]


def end_to_end():
    outs = {}
    for backend, flag in (("python", "1"), ("cython", "0")):
        env = dict(os.environ, GLPSH_PURE_PYTHON=flag)
        start = time.perf_counter()
        res = subprocess.run(E2E, env=env, capture_output=True, check=False)
        outs[backend] = (time.perf_counter() - start, res.stdout)
    (tp, op), (tc, oc) = outs["python"], outs["cython"]
    print(f"verify-all gl:2:3 mackey,hh-relations: python {tp:.1f}s, cython {tc:.1f}s, "
          f"{tp / tc:.2f}x, outputs {'match' if op == oc else 'DIFFER'}")
    return 0 if op == oc else 2


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--groups", default="2:3,3:2,2:5,3:3", help="n:q list")
    ap.add_argument("--end-to-end", action="store_true")
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels not built; nothing to compare", file=sys.stderr)
        return 1
    print(f"{'kernel':<14} {'group':<9} {'python':>10} {'cython':>10} {'speedup':>8}")
    for spec in args.groups.split(","):
        n, q = (int(v) for v in spec.split(":"))
        G = gl(n, q)
        if G.table is None:
            print(f"{'(skipped)':<14} GL({n},{q}) order {G.order} has no multiplication table")
            continue
        for name, (kargs, same) in cases(G).items():
            py, cy = getattr(_pykernels, name), getattr(_ckernels, name)
            if not same(py(*kargs), cy(*kargs)):
                print(f"{name}: backends disagree on GL({n},{q})", file=sys.stderr)
                return 2
            tp, tc = best(py, kargs, args.repeat), best(cy, kargs, args.repeat)
            print(f"{name:<14} GL({n},{q})   {tp * 1e3:>8.2f}ms {tc * 1e3:>8.2f}ms {tp / tc:>7.1f}x")
    if args.end_to_end:
        return end_to_end()
    return 0


if __name__ == "__main__":
    sys.exit(main())
