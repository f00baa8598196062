"""Time orbit enumeration with and without the compiled kernel.

Run from the repository root:

    python3 benchmarks/bench_orbit.py
    python3 benchmarks/bench_orbit.py --repeats 5

Each case enumerates the same orbit through the int64 kernel and through
the pure-Python breadth-first search, verifies the two agree point for
point, and reports the median wall time of each path.
"""

import argparse
import statistics
import time
from fractions import Fraction

from rifslab import HAVE_KERNEL, enumerate_orbit, make_system

CASES = (
    ("{3x, 3x+2} to 3^15",
     [("3", "0"), ("3", "2")], "0", Fraction(3) ** 15),
    ("{2x, 2x+1} to 2^17",
     [("2", "0"), ("2", "1")], "0", Fraction(2) ** 17),
    ("{2x, 3x+1} to 10^7",
     [("2", "0"), ("3", "1")], "5", Fraction(10) ** 7),
    ("{3x, 3x+1, 3x+2} to 3^11",
     [("3", "0"), ("3", "1"), ("3", "2")], "0", Fraction(3) ** 11),
)


def run_case(system, seed, radius, repeats, force_pure):
    times = []
    sample = None
    for _ in range(repeats):
        started = time.perf_counter()
        sample = enumerate_orbit(system, seed, radius, force_pure=force_pure)
        times.append(time.perf_counter() - started)
    return sample, statistics.median(times)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=3,
                        help="timed runs per case, median reported")
    args = parser.parse_args()

    if not HAVE_KERNEL:
        print("compiled kernel not importable; timing the fallback only")

    header = f"{'case':<28} {'points':>8} {'pure':>9} {'kernel':>9} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for label, raw_maps, seed, radius in CASES:
        system = make_system([(Fraction(r), Fraction(b)) for r, b in raw_maps])
        pure_sample, pure_t = run_case(system, Fraction(seed), radius,
                                       args.repeats, force_pure=True)
        if HAVE_KERNEL:
            kern_sample, kern_t = run_case(system, Fraction(seed), radius,
                                           args.repeats, force_pure=False)
            if kern_sample.points != pure_sample.points:
                print(f"{label}: MISMATCH between kernel and fallback")
                return 1
            print(f"{label:<28} {len(pure_sample.points):>8} "
                  f"{pure_t:>8.3f}s {kern_t:>8.3f}s {pure_t / kern_t:>7.1f}x")
        else:
            print(f"{label:<28} {len(pure_sample.points):>8} "
                  f"{pure_t:>8.3f}s {'-':>9} {'-':>8}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
