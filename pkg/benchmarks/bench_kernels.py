"""Compiled versus numpy kernels on the operations the search spends its time in.

Run with ``python benchmarks/bench_kernels.py``. Each row reports the best of
several repeats for both backends and the compiled speedup (numpy time divided
by compiled time). Permutation gates (X, CNOT) bypass both kernels, so the
end-to-end search gains less than the kernel rows suggest.
"""

import argparse
import timeit
from unittest import mock

import numpy as np

from necroswap import kernels
from necroswap.complexity import GateSet, SearchConfig, swap_complexity
from necroswap.statevec import product_state


def _batch(rng, rows, width):
    v = rng.standard_normal((rows, 2 ** width)) + 1j * rng.standard_normal((rows, 2 ** width))
    return np.ascontiguousarray(v / np.linalg.norm(v, axis=1, keepdims=True))


def _best(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def cases(rows, width):
    rng = np.random.default_rng(0)
    states = _batch(rng, rows, width)
    u1 = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    u2 = np.eye(4, dtype=complex)[[0, 1, 3, 2]]
    yield f"apply_1q {rows}x2^{width}", lambda m: (lambda: m.apply_1q(states, width, 1, u1))
    yield f"apply_2q {rows}x2^{width}", lambda m: (lambda: m.apply_2q(states, width, 0, 2, u2))
    yield (f"canonical_quantize {rows}x2^{width}",
           lambda m: (lambda: m.canonical_quantize(states, 1e-12, True)))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rows", type=int, default=4096)
    ap.add_argument("--width", type=int, default=6)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--skip-search", action="store_true")
    args = ap.parse_args(argv)

    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled backend not built; only the numpy fallback is available")
    names = sorted(backends)
    print(f"{'case':36s}" + "".join(f"{n:>12s}" for n in names) + "   speedup")
    for label, make in cases(args.rows, args.width):
        times = [_best(make(backends[n]), args.repeat, 10) for n in names]
        ratio = times[-1] / times[0] if len(times) > 1 else 1.0
        print(f"{label:36s}" + "".join(f"{t * 1e3:10.3f}ms" for t in times)
              + f"   {ratio:5.2f}x")
    if not args.skip_search:
        times = []
        for n in names:
            with mock.patch.multiple(kernels, apply_1q=backends[n].apply_1q,
                                     apply_2q=backends[n].apply_2q,
                                     canonical_quantize=backends[n].canonical_quantize):
                gs = GateSet.default(3)
                cfg = SearchConfig(max_depth=7, phase="exact")
                a, b = product_state("000"), product_state("1--")
                times.append(_best(lambda: swap_complexity(a, b, cfg, gs), 2, 1))
        ratio = times[-1] / times[0] if len(times) > 1 else 1.0
        print(f"{'exact swap search |000>,|1-->':36s}"
              + "".join(f"{t * 1e3:10.1f}ms" for t in times) + f"   {ratio:5.2f}x")


if __name__ == "__main__":
    main()
