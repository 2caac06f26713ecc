#!/usr/bin/env python3
"""Walk the three built-in scenarios end to end and print their reports.

1. Real line: phi_k(x) = x^k e^{lambda x} is a rank-1 moment sequence; the
   induced operators obey the generalized Leibniz rule and at lambda = 0 the
   functionals <D_k mu, 1> are the classical moments.
2. Two-point carrier D(theta): the only extension of either exponential to a
   higher-order moment sequence is zero.
3. Chebyshev: phi_k(n) = P_n^(k)(z) is a moment sequence; the induced family
   transfers to the transform side, where <D_k mu, 1> at z = 0 rebuilds the
   transform via the Taylor formula.
"""

from __future__ import annotations

import argparse
import random

from hypermoment import (
    Measure,
    chebyshev,
    check_axioms,
    derivation_from_moments,
    derivative_moments,
    enumerate_exponentials,
    iterated_extension,
    poly_derivative_moments,
    poly_residual,
    real_line,
    realline_moments,
    taylor_reconstruct,
    transform,
    two_point,
    verify_fourier_leibniz,
    verify_leibniz,
    verify_moment_sequence,
)


def sample_measures(hg, points, count, rng):
    out = []
    for _ in range(count):
        support = rng.sample(list(points), k=2)
        out.append(
            Measure.from_items(
                hg, [(x, complex(rng.uniform(-1, 1), rng.uniform(-1, 1))) for x in support]
            )
        )
    return [(out[i], out[(i + 1) % count]) for i in range(count)]


def scenario_real_line(seed: int) -> bool:
    print("=" * 72)
    print("scenario 1: moment families on the real line")
    rng = random.Random(seed)
    pairs = [(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(50)]
    hg = real_line()
    all_ok = True
    for lam in (0.0, 0.7, 1 + 1j):
        seq = realline_moments(lam, 4)
        report = verify_moment_sequence(seq, pairs)
        print(f"  lambda = {lam}: moment identity "
              f"{'OK' if report.passed else 'FAILED'} (worst {report.worst_residual():.2e})")
        fam = derivation_from_moments(seq, pairs=pairs[:10])
        samples = sample_measures(hg, [p for p, _ in pairs[:12]], 10, rng)
        leib = verify_leibniz(fam, samples)
        print(f"    induced family Leibniz rule: {'OK' if leib.passed else 'FAILED'}")
        all_ok = all_ok and report.passed and leib.passed
    return all_ok


def scenario_two_point(order: int) -> bool:
    print("=" * 72)
    print("scenario 2: triviality on the two-point carrier")
    all_ok = True
    for theta in (0.1, 0.3, 0.5, 0.9, 1.0):
        hg = two_point(theta)
        axioms = check_axioms(hg, sample_bound=2)
        for i, phi0 in enumerate(enumerate_exponentials(hg)):
            report, _ = iterated_extension(hg, phi0, (order,))
            shapes = {r.detail for r in report.records}
            trivial = report.meta["trivial"]
            print(f"  theta = {theta}, phi0 = m{i}: {sorted(shapes)} -> trivial = {trivial}")
            all_ok = all_ok and trivial and axioms.passed
    return all_ok


def scenario_chebyshev(seed: int) -> bool:
    print("=" * 72)
    print("scenario 3: Chebyshev derivative families and the Taylor formula")
    rng = random.Random(seed)
    hg = chebyshev()
    pairs = [(m, n) for m in range(9) for n in range(9)]
    all_ok = True
    for z in (0.0, 0.3, 2 + 1j):
        seq = poly_derivative_moments(hg, z, 3)
        report = verify_moment_sequence(seq, pairs)
        print(f"  z = {z}: moment identity {'OK' if report.passed else 'FAILED'} "
              f"(worst {report.worst_residual():.2e})")
        all_ok = all_ok and report.passed
    fam = derivation_from_moments(poly_derivative_moments(hg, 0.3, 3))
    samples = sample_measures(hg, range(6), 10, rng)
    four = verify_fourier_leibniz(fam, samples)
    print(f"  transform-side Leibniz rule: {'OK' if four.passed else 'FAILED'}")
    mu = Measure.from_items(hg, [(1, 1.0), (2, 1.0)])
    values = derivative_moments(hg, mu, 2, z=0.0)
    rebuilt = taylor_reconstruct(hg, values)
    res, scl = poly_residual(rebuilt, transform(hg, mu))
    print(f"  transform of d1+d2: {transform(hg, mu).pretty()}")
    print(f"  Taylor rebuild from {[f'{v:.3g}' for v in values]}: {rebuilt.pretty('lam')} "
          f"(residual {res:.2e})")
    return all_ok and four.passed and res <= 1e-9 * scl


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--order", type=int, default=3, help="extension order for scenario 2")
    args = parser.parse_args()
    results = [
        scenario_real_line(args.seed),
        scenario_two_point(args.order),
        scenario_chebyshev(args.seed),
    ]
    print("=" * 72)
    print("all scenarios:", "OK" if all(results) else "NOT OK")
    return 0 if all(results) else 1


if __name__ == "__main__":
    raise SystemExit(main())
