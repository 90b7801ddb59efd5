"""Compare the compiled and pure-Python elimination kernels.

    python benchmarks/bench_kernels.py [--repeat N]

Times (1) raw modular row reduction on random dense systems and (2) a full
Killing-space solve routed through each backend.
"""

import argparse
import time

import numpy as np

from nilkilling import catalog, killing
from nilkilling.kernels import available_backends, get_backend
from nilkilling.linalg import PRIME


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_rref(repeat):
    rng = np.random.default_rng(0)
    print("modular rref (rows x cols)")
    for rows, cols in ((200, 70), (1200, 126), (2500, 210)):
        mat = rng.integers(0, 50, size=(rows, cols), dtype=np.int64)
        mat[:, cols // 2:] = 0  # leave a nullspace
        line = f"  {rows:>5} x {cols:<4}"
        for name in available_backends():
            kern = get_backend(name)
            t = best_of(lambda: kern.rref_mod_p(mat.copy(), PRIME), repeat)
            line += f"  {name}: {t * 1e3:9.2f} ms"
        print(line)


def bench_solver(repeat):
    cases = [("quaternionic k=3", catalog.quaternionic(), 3),
             ("h3+h3 k=3", catalog.sum_of(catalog.h3(), catalog.h3()), 3),
             ("free2step3 k=3", catalog.free_two_step(3), 3)]
    print("killing_space end to end")
    for label, alg, k in cases:
        line = f"  {label:<18}"
        for name in available_backends():
            t = best_of(lambda: killing.killing_space(alg, k, backend=name), repeat)
            line += f"  {name}: {t * 1e3:9.2f} ms"
        print(line)


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    print("backends:", ", ".join(available_backends()))
    bench_rref(args.repeat)
    bench_solver(args.repeat)


if __name__ == "__main__":
    main()
