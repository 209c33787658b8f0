#!/usr/bin/env python3
"""Benchmark the numba-compiled integrator kernel against the pure-Python
fallback on identical inputs, and report how closely the two paths agree.

Run from the repository root:

    python3 benchmarks/bench_backends.py --steps 200000 --repeats 3
"""

import argparse
import time

import numpy as np

from heterojj import JunctionParams, PhaseState
from heterojj import _kernels
from heterojj.dynamics import _kernel_coeffs


def run_kernel(kernel, state, dt, n_steps, coeffs):
    out = np.empty((n_steps + 1, 4))
    status = kernel(state.theta, state.psi, state.theta_dot, state.psi_dot,
                    dt, n_steps, 1, *coeffs, out)
    assert status == -1
    return out


def time_kernel(kernel, state, dt, n_steps, coeffs, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        run_kernel(kernel, state, dt, n_steps, coeffs)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", type=int, default=200_000)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--dt", type=float, default=1e-3)
    args = parser.parse_args()

    params = JunctionParams.from_ratios(100.0, 2.0, 1.0, 0.1, 0.1, 1, 0.0)
    state = PhaseState(0.05, 0.02, 0.0, 0.0)
    coeffs = _kernel_coeffs(params)

    print(f"integrator benchmark: {args.steps} steps, dt={args.dt}, "
          f"best of {args.repeats}")

    t_py = time_kernel(_kernels.rk4_python, state, args.dt, args.steps,
                       coeffs, args.repeats)
    print(f"  python kernel : {t_py:8.4f} s "
          f"({args.steps / t_py / 1e6:.2f} Msteps/s)")

    if _kernels.rk4_numba is None:
        print("  numba kernel  : unavailable (numba not importable)")
        return

    run_kernel(_kernels.rk4_numba, state, args.dt, 10, coeffs)  # JIT warmup
    t_nb = time_kernel(_kernels.rk4_numba, state, args.dt, args.steps,
                       coeffs, args.repeats)
    print(f"  numba kernel  : {t_nb:8.4f} s "
          f"({args.steps / t_nb / 1e6:.2f} Msteps/s)")
    print(f"  speedup       : {t_py / t_nb:8.1f}x")

    out_py = run_kernel(_kernels.rk4_python, state, args.dt, args.steps, coeffs)
    out_nb = run_kernel(_kernels.rk4_numba, state, args.dt, args.steps, coeffs)
    print(f"  max |difference| between paths: "
          f"{float(np.max(np.abs(out_py - out_nb))):.3e}")


if __name__ == "__main__":
    main()
