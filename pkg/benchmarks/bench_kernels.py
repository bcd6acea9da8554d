"""Timing comparison of the compiled and pure kernel backends.

Runs the two inner loops (trace histogram, relative-trace zero count)
on growing extension fields and prints a table.  Usage:

    python3 benchmarks/bench_kernels.py [--max-log 8]
"""

import argparse
import time

from weillab import kernels
from weillab.ff import Field, Poly, Tower


def _inputs(base: Field, f: Poly, s: int, m: int):
    tower = Tower(base, s)
    top = tower.top
    fdig = [list(tower.embed(c).coeffs) for c in f.coeffs]
    rows = tower.subfield_trace_rows(m) if m > 1 else tower.trace_rows_to_base()
    return base.p, top.e, top.modulus[: top.e], fdig, rows


def _time(fn, args, repeat=3):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--max-log", type=int, default=8,
                        help="largest extension degree s to time (7^s elements)")
    args = parser.parse_args()

    base = Field(7, 1)
    f = Poly.from_ints(base, [1, -1, 0, 1])
    have_compiled = kernels.BACKEND == "compiled"
    if not have_compiled:
        print("compiled backend not built; timing pure backend only")

    print(f"{'kernel':<16} {'s':>3} {'elements':>12} {'pure (s)':>10} "
          f"{'compiled (s)':>13} {'speedup':>8}")
    for s in range(4, args.max_log + 1, 2):
        inputs = _inputs(base, f, s, 1)
        t_pure, h_pure = _time(kernels.pure.trace_histogram, inputs)
        if have_compiled:
            from weillab.kernels import _fastcore
            t_fast, h_fast = _time(_fastcore.trace_histogram, inputs)
            assert h_pure == list(h_fast) or list(h_pure) == list(h_fast)
            ratio = f"{t_pure / t_fast:8.1f}"
        else:
            t_fast, ratio = float("nan"), "     n/a"
        print(f"{'trace_histogram':<16} {s:>3} {7 ** s:>12} {t_pure:>10.4f} "
              f"{t_fast:>13.4f} {ratio}")

    for s in (4, 6):
        inputs = _inputs(base, f, s, 2)
        t_pure, z_pure = _time(kernels.pure.zero_count, inputs)
        if have_compiled:
            from weillab.kernels import _fastcore
            t_fast, z_fast = _time(_fastcore.zero_count, inputs)
            assert z_pure == z_fast
            ratio = f"{t_pure / t_fast:8.1f}"
        else:
            t_fast, ratio = float("nan"), "     n/a"
        print(f"{'zero_count':<16} {s:>3} {7 ** s:>12} {t_pure:>10.4f} "
              f"{t_fast:>13.4f} {ratio}")


if __name__ == "__main__":
    main()
