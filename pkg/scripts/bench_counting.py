"""Wall-clock comparison of brute force and slicing as B grows.

Usage: python3 scripts/bench_counting.py [--forms 3] [--B 5 10 20 40] [--workers 1]

Brute force costs about (2B+1)^3 grid points; slicing visits O(B^(4/3))
hyperplanes, each with a small conic problem.
"""

import argparse

from quadcount.corpus import classical_forms
from quadcount.counting import brute_force_count, sliced_count


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--forms", type=int, default=3)
    ap.add_argument("--B", type=int, nargs="+", default=[5, 10, 20, 40])
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args(argv)

    print(f"{'form':>4} {'B':>5} {'N':>8} {'brute s':>9} {'sliced s':>9} {'slices':>7} {'singular':>8}")
    for i, Q in enumerate(classical_forms(args.forms)):
        for B in args.B:
            a = brute_force_count(Q, B)
            s = sliced_count(Q, B, args.workers)
            flag = "" if a.count == s.count else "  MISMATCH"
            print(f"{i:>4} {B:>5} {a.count:>8} {a.elapsed:>9.2f} {s.elapsed:>9.2f} "
                  f"{s.slices_visited:>7} {s.singular_slices:>8}{flag}")


if __name__ == "__main__":
    main()
