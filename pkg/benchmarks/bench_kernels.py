"""Compare the numba and numpy backends of the hot kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time
import warnings

import numpy as np

from butson.families import evaluate, load_bundled
from butson.kernels import HAVE_NUMBA, count_vanishing_minors, extend_rows

warnings.filterwarnings("ignore")


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def cases():
    D10 = evaluate(load_bundled("D10"), [0, 0, 0], 4, dephased=True)
    H12 = evaluate(load_bundled("H12B"), [0, 2, 2, 2, 0, 2, 0, 0, 2, 0], 4)
    D14 = evaluate(load_bundled("D14"), [0] * 6, 4)
    yield "extend q=4 n=10 m=1", lambda nb: extend_rows(D10.L[:1], 4, nb)
    yield "extend q=4 n=10 m=3", lambda nb: extend_rows(D10.L[:3], 4, nb)
    yield "extend q=4 n=14 m=2", lambda nb: extend_rows(D14.L[:2], 4, nb)
    yield "extend q=6 n=8 m=1", lambda nb: extend_rows(np.zeros((1, 8), dtype=np.int64), 6, nb)
    yield "minors k=3 n=10", lambda nb: count_vanishing_minors(D10.L, 4, 3, nb)
    yield "minors k=4 n=12", lambda nb: count_vanishing_minors(H12.L, 4, 4, nb)
    yield "minors k=5 n=12", lambda nb: count_vanishing_minors(H12.L, 4, 5, nb)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not HAVE_NUMBA:
        print("numba is not installed; only the numpy backend can run")
    print(f"{'kernel':<24}{'numpy s':>10}{'numba s':>10}{'speedup':>9}  same")
    for name, fn in cases():
        t_np, r_np = best_of(lambda: fn(False), args.repeat)
        if HAVE_NUMBA:
            fn(True)  # compile outside the timing
            t_nb, r_nb = best_of(lambda: fn(True), args.repeat)
            same = np.array_equal(np.asarray(r_np), np.asarray(r_nb))
            print(f"{name:<24}{t_np:>10.4f}{t_nb:>10.4f}{t_np / t_nb:>9.1f}  {same}")
        else:
            print(f"{name:<24}{t_np:>10.4f}{'-':>10}{'-':>9}  -")


if __name__ == "__main__":
    main()
