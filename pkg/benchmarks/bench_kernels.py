"""Benchmark the compiled propagation kernel against the pure-numpy fallback.

Runs the same initialization trajectory through both implementations, checks
they agree to machine precision, and reports wall time per trajectory.

Usage: python benchmarks/bench_kernels.py [--repeats N]
"""
import argparse
import time

import numpy as np

from fluxinit._kernels import KERNEL_IMPL
from fluxinit._kernels._reduced_py import propagate_reduced as propagate_py
from fluxinit.dynamics import DEFAULT_INTEGRATION_DT
from fluxinit.pulses import RampSpec, make_schedule, omega0_for_plateau
from fluxinit.reduced import TWO_PI

try:
    from fluxinit._kernels._reduced_cy import propagate_reduced as propagate_cy
except ImportError:
    propagate_cy = None


def build_problem(T=500.0, T_pre=10.0, plateau=0.071, dt=DEFAULT_INTEGRATION_DT):
    spec = RampSpec(theta_f=np.pi / 4.0, T=T, dt=1.0)
    schedule = make_schedule(spec, T_pre, 0.0, 0.0, omega0_for_plateau(spec, plateau))
    t0, t1 = float(schedule.times[0]), float(schedule.times[-1])
    n = int(round((t1 - t0) / dt))
    step = (t1 - t0) / n
    t_nodes = t0 + step * np.arange(n + 1)
    omega_nodes = TWO_PI * np.asarray(schedule.omega_at(t_nodes), dtype=float)
    omega_mid = TWO_PI * np.asarray(schedule.omega_at(t_nodes[:-1] + step / 2.0), dtype=float)
    psi0 = np.array([1.0, 0.0, 0.0], dtype=complex)
    return omega_nodes, omega_mid, TWO_PI * 0.0, TWO_PI * 0.056, 1.0 / 40.0, step, psi0


def run(fn, problem, repeats):
    best = float("inf")
    out = None
    for _ in range(repeats):
        start = time.perf_counter()
        out = fn(*problem)
        best = min(best, time.perf_counter() - start)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    problem = build_problem()
    n_steps = problem[1].size
    print(f"active kernel at import: {KERNEL_IMPL}")
    print(f"problem: 510 ns trajectory, {n_steps} RK4 steps")

    t_py, out_py = run(propagate_py, problem, args.repeats)
    print(f"pure python : {t_py * 1e3:9.2f} ms/trajectory")

    if propagate_cy is None:
        print("compiled    : not available (install built without a C compiler)")
        return

    t_cy, out_cy = run(propagate_cy, problem, args.repeats)
    diff = float(np.max(np.abs(np.asarray(out_cy) - out_py)))
    print(f"compiled    : {t_cy * 1e3:9.2f} ms/trajectory")
    print(f"speedup     : {t_py / t_cy:9.1f}x")
    print(f"max |diff|  : {diff:.3e}")
    assert diff < 1e-12, "kernels disagree"


if __name__ == "__main__":
    main()
