#!/usr/bin/env python3
"""Benchmark the compiled packet kernels against the pure-Python twins.

Times the three hot operations (XOR, GF(2^8) scale, scaled accumulate) over
several packet sizes, then an end-to-end exhaustive sweep of the 4-cycle
scheme under whichever backend is active. Run after `pip install -e .` so
the extension is built; set RAINBOWCC_PURE=1 to force the fallback for the
end-to-end row.
"""

import random
import timeit

from rainbowcc import _kernels_py as pure

try:
    from rainbowcc import _kernels as compiled
except ImportError:
    compiled = None

SIZES = (64, 1024, 65536)
REPEAT = 5


def best(stmt, number):
    return min(timeit.repeat(stmt, number=number, repeat=REPEAT)) / number


def bench_kernels():
    rng = random.Random(0)
    impls = [("python", pure)] + ([("cython", compiled)] if compiled else [])
    print(f"{'op':<10} {'size':>7} " +
          " ".join(f"{name:>12}" for name, _ in impls) + "   speedup")
    for size in SIZES:
        a = bytes(rng.randrange(256) for _ in range(size))
        b = bytes(rng.randrange(256) for _ in range(size))
        number = max(10, 2 ** 22 // max(size, 1))
        rows = {
            "xor": lambda impl: impl.xor_bytes(a, b),
            "scale*37": lambda impl: impl.gf256_scale(a, 37),
            "axpy*37": None,
        }
        for op, fn in rows.items():
            times = []
            for _, impl in impls:
                if op == "axpy*37":
                    acc = bytearray(b)
                    times.append(best(lambda: impl.gf256_axpy(acc, a, 37),
                                      number))
                else:
                    times.append(best(lambda: fn(impl), number))
            cells = " ".join(f"{t * 1e6:>10.2f}us" for t in times)
            speedup = f"{times[0] / times[-1]:6.1f}x" if len(times) > 1 else "    n/a"
            print(f"{op:<10} {size:>7} {cells}   {speedup}")


def bench_end_to_end():
    from rainbowcc import kernels, schemes, simulator

    def sweep():
        scheme = schemes.scheme_cyclic(4)
        simulator.sweep(scheme, 4, policy=simulator.EXHAUSTIVE,
                        packet_size=1024)

    t = min(timeit.repeat(sweep, number=1, repeat=3))
    print(f"\nend-to-end: exhaustive 4-cycle sweep (256 demands, 1 KiB packets)"
          f" under '{kernels.backend()}' backend: {t:.3f}s")


if __name__ == "__main__":
    bench_kernels()
    bench_end_to_end()
