#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Run from the repository root after building the extension:

    python benchmarks/benchmark_kernels.py
"""
import time

import numpy as np

from kgcoherent._backend import available_backends

CASES = [
    ("moderate ladder (n=2k, j=80)", "ladder_weights", (0.9231, -1.0, 0.426, -11.08, 2000, 80)),
    ("small-field ladder (n=80k, j=40)", "ladder_weights", (0.99920, -1.0, 0.004608, -11.515, 80_000, 40)),
    ("matched-width ladder (n=3k, j=1.1k)", "ladder_weights", (0.0, 1.0, 720.0, -1440.0, 3000, 1100)),
    ("transverse weights (n=3k, j=200)", "transverse_weights", (0.9685, -1.0, 0.714, -45.4, 3000, 200)),
    ("KG weights (n=50k, j=12)", "kg_weight_matrix", (0.99997, -1.0, 1.84e-4, 0.1, -11.5, 50_000, 12)),
]


def run(repeat=3):
    backends = available_backends()
    print(f"backends: {', '.join(backends)}")
    for label, fn_name, args in CASES:
        times = {}
        ref = None
        for name, mod in backends.items():
            fn = getattr(mod, fn_name)
            best = np.inf
            for _ in range(repeat):
                t0 = time.perf_counter()
                out = fn(*args)
                best = min(best, time.perf_counter() - t0)
            times[name] = best
            first = out[0]
            if ref is None:
                ref = first
            else:
                scale = np.max(np.abs(ref)) or 1.0
                assert np.allclose(first, ref, rtol=1e-9, atol=1e-11 * scale), label
        line = f"{label:42s} " + "  ".join(f"{n}: {t * 1e3:9.2f} ms" for n, t in times.items())
        if len(times) == 2:
            line += f"  speedup: {times['python'] / times['compiled']:.1f}x"
        print(line)


if __name__ == "__main__":
    run()
