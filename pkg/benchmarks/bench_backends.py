"""Compare the compiled and pure-Python kernel backends.

Run with ``python benchmarks/bench_backends.py [--repeat N]``.  Each case
is timed with :mod:`timeit` (best of ``repeat`` runs) under both backends.
"""
import argparse
import timeit

import numpy as np

from fibercavity import design, fiber, specfun

CTX = fiber.WavelengthContext(0.778)
HOLEY = fiber.FiberGeometry.silica_rod(1.5, CTX.lambda0)
X = np.linspace(0.01, 40.0, 20_000)
GRID = np.linspace(HOLEY.n_clad + 1e-9, HOLEY.n_core - 1e-9, 2000)

CASES = {
    "J_3 on 20k points": lambda: specfun.jv_array(3, X),
    "K_3 on 20k points": lambda: specfun.kv_array(3, X),
    "residual scan l=1, 2000 pts": lambda: fiber.residual_scan(HOLEY, CTX, 1, GRID),
    "solve_modes d=1.5 um": lambda: fiber.solve_modes(HOLEY, CTX),
    "design point d=440 nm": lambda: design.design_point(440.0, CTX, 1.0),
}


def bench(repeat):
    backends = specfun.available_backends()
    previous = specfun.kernels.NAME
    rows = []
    try:
        for name, fn in CASES.items():
            times = {}
            for b in backends:
                specfun.set_backend(b)
                fn()  # warm caches
                times[b] = min(timeit.repeat(fn, number=1, repeat=repeat))
            rows.append((name, times))
    finally:
        specfun.set_backend(previous)
    return backends, rows


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args()
    backends, rows = bench(args.repeat)
    head = f"{'case':32s}" + "".join(f"{b:>12s}" for b in backends)
    if len(backends) > 1:
        head += f"{'speedup':>10s}"
    print(head)
    for name, t in rows:
        line = f"{name:32s}" + "".join(f"{t[b] * 1e3:10.2f}ms" for b in backends)
        if len(backends) > 1:
            line += f"{t['python'] / t['compiled']:9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
