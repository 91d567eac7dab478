"""Compare the compiled panel kernel against the NumPy fallback.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat 5]

Two measurements per backend: raw ``gk15_panels`` throughput on a batch of
panels, and one full multi-mode curve point (which also pays for the Python
driver loop in ``quad``).  The end-to-end figure is taken in a subprocess
with ``JCREVIVAL_PURE`` set so each run picks its backend at import.
"""
from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from jcrevival import _gk_py

try:
    from jcrevival import _gk
except ImportError:
    _gk = None

END_TO_END = """
import time, numpy as np
from jcrevival import BACKEND, CalibrationProblem, ResonantSystem, solve_coupling, sweep
sys_ = ResonantSystem()
prob = CalibrationProblem.from_constants(sys_, 0.85)
cal = solve_coupling(prob)
grid = np.linspace(0.0, 100e-6, 51)
start = time.perf_counter()
sweep(grid, sys_, prob.loss, prob.drive, cal)
print(BACKEND, (time.perf_counter() - start) / grid.size)
"""


def panel_batch(n_panels: int = 2048):
    edges = np.linspace(0.0, 5e7, n_panels + 1)
    return edges[:-1].copy(), edges[1:].copy(), 40e-6, 3e5, 2.5e5


def bench_panels(repeat: int) -> dict[str, float]:
    args = panel_batch()
    kernels = {"numpy": _gk_py.gk15_panels}
    if _gk is not None:
        kernels["cython"] = _gk.gk15_panels
    out = {}
    for name, fn in kernels.items():
        number = 200
        best = min(timeit.repeat(lambda: fn(*args), number=number, repeat=repeat)) / number
        out[name] = best / args[0].size
    return out


def bench_point(pure: bool) -> tuple[str, float]:
    env = dict(os.environ)
    if pure:
        env["JCREVIVAL_PURE"] = "1"
    else:
        env.pop("JCREVIVAL_PURE", None)
    proc = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True, check=True)
    backend, seconds = proc.stdout.split()
    return backend, float(seconds)


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    panels = bench_panels(args.repeat)
    print("gk15_panels, 2048 panels per call")
    for name, per_panel in panels.items():
        print(f"  {name:>6}: {per_panel * 1e9:8.1f} ns/panel")
    if "cython" in panels:
        print(f"  speed-up: {panels['numpy'] / panels['cython']:.2f}x")

    print("multi-mode curve point (nbar=0.85, 51 times over 0..100 us)")
    points = dict(bench_point(pure) for pure in (True, False))
    for name, seconds in points.items():
        print(f"  {name:>6}: {seconds * 1e3:8.2f} ms/point")
    if "cython" in points:
        print(f"  speed-up: {points['numpy'] / points['cython']:.2f}x")


if __name__ == "__main__":
    main()
