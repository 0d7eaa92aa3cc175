"""Compiled loop kernels vs the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--csv out.csv]

Each kernel is warmed up once (JIT compile) and then timed with timeit;
the best per-call time of ``--repeat`` rounds is reported. Outputs of the
two paths are also compared so a speedup never hides a wrong answer.
"""
import argparse
import csv
import sys
import timeit

import numpy as np

from obitlab import _accel, kernels
from obitlab.fourier import twiddle_table


def _cases(rng):
    def cvec(n):
        return rng.standard_normal(n) + 1j * rng.standard_normal(n)

    x1024, x256, x4096 = cvec(1024), cvec(256), cvec(4096)
    tw = twiddle_table(4096)
    h = np.array([[0.4, 0.2 - 0.9j], [0.2 + 0.9j, -1.1]])
    c0 = np.array([0.6, 0.8j])
    drive = rng.standard_normal(2000)
    sig, taps = rng.standard_normal(4096), rng.standard_normal(64)
    gate = (0.6, 0.8, -0.8, 0.6)
    ph = np.exp(0.3j)
    # name, compiled call, fallback call
    return [
        ("dft N=256", lambda: kernels.dft_loop(x256), lambda: kernels.dft_numpy(x256)),
        ("fft N=4096", lambda: kernels.fft_loop(x4096, tw)[0], lambda: kernels.fft_numpy(x4096, tw)[0]),
        ("1-qubit gate n=12", lambda: kernels.apply_1q_loop(x4096, 12, 5, *gate),
         lambda: kernels.apply_1q_numpy(x4096, 12, 5, *gate)),
        ("cphase n=10", lambda: kernels.apply_cphase_loop(x1024, 10, 7, 2, ph),
         lambda: kernels.apply_cphase_numpy(x1024, 10, 7, 2, ph)),
        ("swap n=10", lambda: kernels.apply_swap_loop(x1024, 10, 1, 8),
         lambda: kernels.apply_swap_numpy(x1024, 10, 1, 8)),
        ("rk4 10k steps", lambda: kernels.rk4_loop(h, c0, 1e-3, 10_000, 1.0),
         lambda: kernels.rk4_python(h, c0, 1e-3, 10_000, 1.0)),
        ("driven rk4 2k samples", lambda: kernels.rk4_driven_loop(h, drive, 1e-3, 0, 1.0),
         lambda: kernels.rk4_driven_python(h, drive, 1e-3, 0, 1.0)),
        ("convolve 4096x64", lambda: kernels.convolve_loop(sig, taps), lambda: kernels.convolve_numpy(sig, taps)),
    ]


def best_time(fn, repeat):
    fn()
    number, _ = timeit.Timer(fn).autorange()
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", help="also write the table here")
    args = p.parse_args(argv)
    if not _accel.HAS_NUMBA:
        print("numba is not installed; nothing to compare", file=sys.stderr)
        return 1

    rows = []
    for name, fast, slow in _cases(np.random.default_rng(args.seed)):
        diff = float(np.max(np.abs(np.asarray(fast()) - np.asarray(slow()))))
        t_fast = best_time(fast, args.repeat)
        t_slow = best_time(slow, args.repeat)
        rows.append({"kernel": name, "numba_us": t_fast * 1e6, "numpy_us": t_slow * 1e6,
                     "speedup": t_slow / t_fast, "max_abs_diff": diff})

    print(f"{'kernel':<24}{'numba [us]':>12}{'numpy [us]':>12}{'speedup':>10}{'max diff':>11}")
    for r in rows:
        print(f"{r['kernel']:<24}{r['numba_us']:>12.1f}{r['numpy_us']:>12.1f}{r['speedup']:>9.1f}x"
              f"{r['max_abs_diff']:>11.1e}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
