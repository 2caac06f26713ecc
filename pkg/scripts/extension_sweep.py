#!/usr/bin/env python3
"""Sweep the extension solver over two-point carriers.

For a grid of theta values and every exponential phi_0, solve the linear
extension problem order by order and tabulate the solution-set shape, the
system rank, and the null-space dimension.  The expected outcome is
"unique: zero" everywhere.
"""

from __future__ import annotations

import argparse

from hypermoment import CFunction, enumerate_exponentials, extend_moment_sequence, two_point


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--thetas", type=float, nargs="+", default=[0.1, 0.3, 0.5, 0.9, 1.0])
    parser.add_argument("--order", type=int, default=3)
    args = parser.parse_args()

    header = f"{'theta':>6}  {'phi0':>5}  {'alpha':>6}  {'rank':>4}  {'nullity':>7}  solution"
    print(header)
    print("-" * len(header))
    all_trivial = True
    for theta in args.thetas:
        hg = two_point(theta)
        for i, phi0 in enumerate(enumerate_exponentials(hg)):
            entries = {(0,): phi0}
            for k in range(1, args.order + 1):
                sol = extend_moment_sequence(hg, entries, (k,))
                print(
                    f"{theta:>6.2f}  {'m' + str(i):>5}  {k:>6}  {sol.rank:>4}  "
                    f"{sol.nullity:>7}  {sol.describe()}"
                )
                all_trivial = all_trivial and sol.is_trivial()
                if not sol.consistent:
                    break
                entries[(k,)] = CFunction.from_table(dict(zip(sol.points, sol.particular)))
    print("-" * len(header))
    print("every solution set trivial:", all_trivial)
    return 0 if all_trivial else 1


if __name__ == "__main__":
    raise SystemExit(main())
