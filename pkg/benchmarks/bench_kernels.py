"""Timing comparison of the compiled and pure-Python kernel backends.

Runs each hot kernel on a fixed workload with both implementations and
reports per-call times and the speedup, then times one end-to-end matrix
build per backend by toggling the selection environment variable in a
subprocess (backend choice is an import-time decision).

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time

from ellsixj import _kernels_py as kpy

try:
    from ellsixj import _kernels_cy as kcy
except ImportError:
    kcy = None


def _time(fn, args_list, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for args in args_list:
            fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best / len(args_list)


def kernel_workloads() -> dict:
    q, p = 0.41 + 0j, 0.17 + 0j
    thetas = [
        (complex(0.3 + 0.1 * j, 0.2 - 0.05 * j), p, 24) for j in range(200)
    ]
    epochs = [
        (complex(0.8, 0.1 * j % 7), q, p, 6, 24) for j in range(200)
    ]
    bs = (0.9 + 0.1j, 1.2 - 0.2j, 0.7 + 0j, 1.1 + 0.3j, 0.8 - 0.1j, q**-4)
    vwps = [((0.9 + 0.05j) * (1 + 0.001 * j), bs, q, p, q, 4, 24) for j in range(60)]
    phis = [
        ((q**-3, 0.4 + 0.1j, q**-2), (q**-5, 0.9 + 0j), q, q, 3, 1)
        for _ in range(200)
    ]
    return {"theta": thetas, "epoch": epochs, "vwp_sum": vwps, "phi_sum": phis}


def end_to_end(backend_env: str) -> float:
    code = (
        "import time\n"
        "from ellsixj import ParamQuad, R_explicit, make_context\n"
        "ctx = make_context(0.41+0j, p=0.17+0j)\n"
        "quad = ParamQuad(1.1+0.2j, 0.8-0.1j, 1.3+0j, 0.7+0.3j, 5, ctx)\n"
        "R_explicit(quad)\n"
        "t0 = time.perf_counter()\n"
        "for _ in range(20): R_explicit(quad)\n"
        "print((time.perf_counter() - t0) / 20)\n"
    )
    env = dict(os.environ)
    if backend_env:
        env["SIXJ_PURE_PYTHON"] = backend_env
    else:
        env.pop("SIXJ_PURE_PYTHON", None)
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True
    )
    return float(out.stdout.strip())


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    if kcy is None:
        print("compiled kernels unavailable; nothing to compare")
        return

    print(f"{'kernel':<10} {'python':>12} {'cython':>12} {'speedup':>9}")
    for name, work in kernel_workloads().items():
        tp = _time(getattr(kpy, name), work, args.repeat)
        tc = _time(getattr(kcy, name), work, args.repeat)
        print(f"{name:<10} {tp * 1e6:>10.2f}us {tc * 1e6:>10.2f}us {tp / tc:>8.1f}x")

    tp = end_to_end("1")
    tc = end_to_end("")
    print(
        f"{'R (N=5)':<10} {tp * 1e3:>10.2f}ms {tc * 1e3:>10.2f}ms {tp / tc:>8.1f}x"
    )


if __name__ == "__main__":
    main()
