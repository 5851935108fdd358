"""Benchmark the compiled scattering kernel against the NumPy fallback.

Times `scatter_grid` over batch sizes spanning the call patterns that occur
in practice (scalar root-finding probes up to full acceptance grids), plus
one end-to-end phase-table build per backend.

Run:  python benchmarks/bench_kernel.py
"""
import time

import numpy as np

from hartman._kernel import available_backends, purepy


def get_backend(name: str):
    if name == "python":
        return purepy
    from hartman._kernel import _cykernel

    return _cykernel


def time_call(fn, *args, min_time: float = 0.2) -> float:
    """Best-of-three mean call time, each sample at least min_time long."""
    best = float("inf")
    for _ in range(3):
        n = 0
        start = time.perf_counter()
        while True:
            fn(*args)
            n += 1
            elapsed = time.perf_counter() - start
            if elapsed > min_time:
                break
        best = min(best, elapsed / n)
    return best


def bench_scatter(sizes=(1, 16, 256, 4096, 65536, 1048576)):
    rng = np.random.default_rng(0)
    g, d = 10.0, 2.0
    backends = {name: get_backend(name) for name in available_backends()}
    print(f"{'batch size':>12} " + " ".join(f"{n:>14}" for n in backends))
    if "compiled" in backends:
        header = f"{'':>12} " + " ".join(f"{'us/call':>14}" for _ in backends)
        print(header + f" {'speedup':>9}")
    rows = []
    for size in sizes:
        k = rng.uniform(0.02, 40.0, size)
        times = {
            name: time_call(impl.scatter_grid, g, d, k)
            for name, impl in backends.items()
        }
        cells = " ".join(f"{times[name] * 1e6:>14.2f}" for name in backends)
        line = f"{size:>12} {cells}"
        if "compiled" in times:
            line += f" {times['python'] / times['compiled']:>8.1f}x"
        print(line)
        rows.append((size, times))
    return rows


def bench_phase_table():
    import os
    import subprocess
    import sys

    code = (
        "import time\n"
        "from hartman import SquarePotential, ATOMIC, build_phase_table\n"
        "import hartman\n"
        "pot = SquarePotential(5.0, 1.5)\n"
        "build_phase_table(pot, ATOMIC, 1e-4)\n"
        "start = time.perf_counter()\n"
        "for _ in range(5):\n"
        "    build_phase_table(pot, ATOMIC, 1e-4)\n"
        "print(hartman.kernel_backend(), (time.perf_counter()-start)/5)\n"
    )
    print("\nphase-table build (v0=5, d=3, k_min=1e-4):")
    for force in ("0", "1"):
        env = dict(os.environ, HARTMAN_PURE_PY=force)
        out = subprocess.run(
            [sys.executable, "-c", code], env=env, capture_output=True, text=True
        ).stdout.strip()
        backend, seconds = out.split()
        print(f"  {backend:>9}: {float(seconds) * 1e3:8.2f} ms")


if __name__ == "__main__":
    print("kernel backends available:", ", ".join(available_backends()))
    bench_scatter()
    if "compiled" in available_backends():
        bench_phase_table()
