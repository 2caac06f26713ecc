"""Transforms, basis conversion, transfer of derivations, Taylor formula.

Oracle for Chebyshev basis conversion: numpy.polynomial.chebyshev.cheb2poly.
"""

from __future__ import annotations

import cmath

import pytest
from numpy.polynomial import chebyshev as C

from hypermoment import (
    CFunction,
    DerivationFamily,
    DomainError,
    Measure,
    chebyshev,
    convolve,
    derivation_from_moments,
    derivative_moments,
    dirac,
    fourier_derivative_identity,
    hat_derivation,
    make_module_hom,
    module_action,
    p_to_monomial,
    pair,
    poly_derivative_moments,
    poly_residual,
    taylor_reconstruct,
    transform,
    transform_eval,
    verify_fourier_leibniz,
    verify_leibniz,
    verify_transform_multiplicativity,
)
from hypermoment.fourier import TransformPoly
from tests.conftest import random_measure


class TestPToMonomial:
    def test_frozen_values(self, cheb):
        assert p_to_monomial(cheb, 0) == (1.0,)
        assert p_to_monomial(cheb, 2) == (-1.0, 0.0, 2.0)
        assert p_to_monomial(cheb, 3) == (0.0, -3.0, 0.0, 4.0)

    def test_against_numpy_cheb2poly(self, cheb):
        for n in range(12):
            expected = C.cheb2poly([0.0] * n + [1.0])
            got = p_to_monomial(cheb, n)
            assert len(got) == len(expected)
            for a, b in zip(got, expected):
                assert a == pytest.approx(b, abs=1e-12)

    def test_cross_check_against_recurrence_eval(self, cheb, rng):
        for _ in range(15):
            n = rng.randrange(0, 12)
            z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            mono = p_to_monomial(cheb, n)
            horner = sum(c * z**j for j, c in enumerate(mono))
            direct = cheb.eval_poly_derivative(n, z, 0)
            assert horner == pytest.approx(direct, rel=1e-9, abs=1e-9)


class TestTransform:
    def test_frozen_values(self, cheb):
        assert transform(cheb, dirac(cheb, 0)).coeffs == (1 + 0j,)
        assert transform(cheb, dirac(cheb, 2)).coeffs == (-1 + 0j, 0j, 2 + 0j)
        mu = dirac(cheb, 1) + dirac(cheb, 2)
        assert transform(cheb, mu).coeffs == (-1 + 0j, 1 + 0j, 2 + 0j)

    def test_linearity_exact(self, cheb, cheb_measures):
        mu, nu = cheb_measures[:2]
        lhs = transform(cheb, 2j * mu + (-0.5) * nu)
        rhs = 2j * transform(cheb, mu) + (-0.5) * transform(cheb, nu)
        res, scl = poly_residual(lhs, rhs)
        assert res <= 1e-12 * scl

    def test_evaluation_matches_pairing(self, cheb, cheb_measures, rng):
        for mu in cheb_measures[:3]:
            poly = transform(cheb, mu)
            for _ in range(20):
                z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
                z /= max(1.0, abs(z) / 2.0)  # keep |z| <= 2
                via_pair = pair(mu, CFunction(lambda n: cheb.eval_poly_derivative(n, z, 0)))
                assert poly(z) == pytest.approx(via_pair, rel=1e-9, abs=1e-9)

    def test_realline_rejected(self, realline):
        with pytest.raises(DomainError):
            transform(realline, dirac(realline, 1.0))

    def test_degree_bound(self, cheb):
        mu = Measure.from_items(cheb, [(5, 1.0), (2, 1j)])
        assert transform(cheb, mu).degree <= 5


class TestTransformMultiplicativity:
    def test_frozen_examples(self, cheb):
        d1, d2 = dirac(cheb, 1), dirac(cheb, 2)
        assert transform(cheb, convolve(d1, d1)).coeffs == (0j, 0j, 1 + 0j)
        assert transform(cheb, convolve(d1, d2)).coeffs == (0j, -1 + 0j, 0j, 2 + 0j)
        assert verify_transform_multiplicativity(cheb, d1, d1).passed
        assert verify_transform_multiplicativity(cheb, d1, d2).passed

    def test_unit_measure(self, cheb, cheb_measures):
        assert verify_transform_multiplicativity(cheb, dirac(cheb, 0), cheb_measures[0]).passed

    def test_random_measures(self, cheb, cheb_measures):
        for i in range(len(cheb_measures) - 1):
            assert verify_transform_multiplicativity(
                cheb, cheb_measures[i], cheb_measures[i + 1]
            ).passed


class TestHatDerivation:
    def test_order_zero_with_unit_symbol(self, cheb, cheb_measures):
        fam = DerivationFamily(
            cheb, 1, 0, {(0,): make_module_hom(cheb, CFunction.constant(1.0))}
        )
        for mu in cheb_measures[:3]:
            res, scl = poly_residual(hat_derivation(fam, mu, (0,)), transform(cheb, mu))
            assert res <= 1e-12 * scl

    def test_derivative_family_at_zero(self, cheb):
        fam = derivation_from_moments(poly_derivative_moments(cheb, 0.0, 2))
        assert hat_derivation(fam, dirac(cheb, 2), (1,)).coeffs == ()  # T_2'(0) = 0
        assert hat_derivation(fam, dirac(cheb, 1), (1,)).coeffs == (0j, 1 + 0j)  # z


class TestFourierLeibniz:
    def test_derivative_family_passes(self, cheb, rng):
        fam = derivation_from_moments(poly_derivative_moments(cheb, 0.3, 3))
        measures = [random_measure(cheb, rng, range(5), max_support=2) for _ in range(10)]
        samples = [(measures[i], measures[(i + 1) % 10]) for i in range(10)]
        assert verify_fourier_leibniz(fam, samples).passed

    def test_failing_family_fails_at_same_alpha(self, cheb):
        entries = {
            (0,): make_module_hom(cheb, CFunction.constant(1.0)),
            (1,): make_module_hom(cheb, CFunction(lambda n: 2.0**n)),
        }
        fam = DerivationFamily(cheb, 1, 1, entries)
        samples = [(dirac(cheb, x), dirac(cheb, y)) for x in range(4) for y in range(4)]
        measure_side = verify_leibniz(fam, samples)
        transform_side = verify_fourier_leibniz(fam, samples)
        assert not measure_side.passed and not transform_side.passed
        assert [r.name.split("=")[1] for r in measure_side.failed_records] == [
            r.name.split("=")[1] for r in transform_side.failed_records
        ]

    def test_equivalence_with_measure_side(self, cheb, rng):
        fam = derivation_from_moments(poly_derivative_moments(cheb, -0.4, 2))
        measures = [random_measure(cheb, rng, range(4), max_support=2) for _ in range(6)]
        samples = [(measures[i], measures[(i + 1) % 6]) for i in range(6)]
        assert verify_leibniz(fam, samples).passed == verify_fourier_leibniz(fam, samples).passed


class TestDerivativeIdentity:
    def test_frozen_values(self, cheb):
        assert fourier_derivative_identity(cheb, dirac(cheb, 2), 2, 0.0).passed
        assert transform(cheb, dirac(cheb, 2)).derivative(2)(0.0) == 4.0
        mu = dirac(cheb, 1) + dirac(cheb, 2)
        report = fourier_derivative_identity(cheb, mu, 1, 0.5)
        assert report.passed
        assert transform(cheb, mu).derivative(1)(0.5) == pytest.approx(3.0)

    def test_order_zero_is_evaluation(self, cheb, cheb_measures):
        for mu in cheb_measures[:3]:
            assert fourier_derivative_identity(cheb, mu, 0, 0.7 + 0.1j).passed

    def test_random_orders_and_points(self, cheb, cheb_measures, rng):
        for mu in cheb_measures[:3]:
            for _ in range(5):
                k = rng.randrange(0, 5)
                z = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1, 1))
                assert fourier_derivative_identity(cheb, mu, k, z).passed


class TestTaylor:
    def test_frozen_reconstruction(self, cheb):
        rebuilt = taylor_reconstruct(cheb, [-1.0, 0.0, 4.0])
        assert rebuilt.coeffs == (-1 + 0j, 0j, 2 + 0j)
        assert taylor_reconstruct(cheb, [1.0, 0.0]).coeffs == (1 + 0j,)
        combined = taylor_reconstruct(cheb, [-1.0, 1.0, 4.0])
        assert combined.coeffs == (-1 + 0j, 1 + 0j, 2 + 0j)

    def test_round_trip_from_derivative_moments(self, cheb, rng):
        for _ in range(10):
            mu = random_measure(cheb, rng, range(7), max_support=4)
            top = max(mu.points, default=0)
            values = derivative_moments(cheb, mu, top, z=0.0)
            res, scl = poly_residual(taylor_reconstruct(cheb, values), transform(cheb, mu))
            assert res <= 1e-9 * scl

    def test_truncation(self, cheb):
        values = derivative_moments(cheb, dirac(cheb, 3), 3, z=0.0)
        truncated = taylor_reconstruct(cheb, values, degree=1)
        assert truncated.degree <= 1


class TestModuleActionCompatibility:
    def test_transform_of_reweighted_measure(self, cheb, cheb_measures):
        phi = CFunction(lambda n: n + 0.5j)
        fam = derivation_from_moments(poly_derivative_moments(cheb, 0.3, 1))
        d1 = fam.op((1,))
        for mu in cheb_measures[:3]:
            # transferred module homogeneity: D(phi mu)^ = (phi D mu)^
            lhs = transform(cheb, d1(module_action(phi, mu)))
            rhs = transform(cheb, module_action(phi, d1(mu)))
            res, scl = poly_residual(lhs, rhs)
            assert res <= 1e-12 * scl


class TestTransformEval:
    def test_mass_at_zero(self, realline, dyadic_measures):
        for mu in dyadic_measures[:3]:
            assert transform_eval(mu)(0.0) == pytest.approx(mu.total_mass())

    def test_finite_difference_derivatives(self, realline, dyadic_measures):
        # <D_k mu, 1> for the moment family at lambda equals the k-th
        # derivative of the transform, checked by finite differences
        lam = 0.4
        for mu in dyadic_measures[:3]:
            hat = transform_eval(mu)
            for k in range(1, 4):
                exact = sum(w * x**k * cmath.exp(lam * x) for x, w in mu.support)
                fd = hat.derivative_fd(lam, k)
                assert abs(fd - exact) <= 1e-4 * max(1.0, abs(exact))

    def test_polynomial_carrier_rejected(self, cheb):
        with pytest.raises(DomainError):
            transform_eval(dirac(cheb, 1))


class TestTransformPolyOps:
    def test_pretty(self, cheb):
        assert transform(cheb, dirac(cheb, 2)).pretty() == "-1 + 2*z^2"
        assert TransformPoly.from_coeffs(cheb, []).pretty() == "0"
        assert TransformPoly.from_coeffs(cheb, [0, 1]).pretty() == "z"

    def test_derivative_coefficients(self, cheb):
        p = TransformPoly.from_coeffs(cheb, [1.0, 2.0, 3.0])  # 1 + 2z + 3z^2
        assert p.derivative().coeffs == (2 + 0j, 6 + 0j)
        assert p.derivative(3).coeffs == ()

    def test_product(self, cheb):
        p = TransformPoly.from_coeffs(cheb, [1.0, 1.0])
        q = TransformPoly.from_coeffs(cheb, [-1.0, 1.0])
        assert (p * q).coeffs == (-1 + 0j, 0j, 1 + 0j)
