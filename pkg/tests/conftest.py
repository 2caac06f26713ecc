"""Shared fixtures: built-in carriers and seeded sample builders."""

from __future__ import annotations

import random

import pytest

from hypermoment import (
    FiniteHypergroup,
    Measure,
    chebyshev,
    dirac,
    real_line,
    two_point,
)


@pytest.fixture
def cheb():
    return chebyshev()


@pytest.fixture
def realline():
    return real_line()


@pytest.fixture
def dtheta():
    return two_point


@pytest.fixture
def s3_classes() -> FiniteHypergroup:
    """Class hypergroup of the symmetric group on three letters.

    Carrier {identity, transpositions, 3-cycles}; convolution from the
    normalized class-sum products.
    """
    table = {
        (0, 0): [(0, 1.0)],
        (0, 1): [(1, 1.0)],
        (0, 2): [(2, 1.0)],
        (1, 1): [(0, 1 / 3), (2, 2 / 3)],
        (1, 2): [(1, 1.0)],
        (2, 2): [(0, 0.5), (2, 0.5)],
    }
    return FiniteHypergroup(3, 0, table)


def random_measure(hg, rng: random.Random, points, max_support: int = 3) -> Measure:
    support = rng.sample(list(points), k=min(max_support, len(points)))
    return Measure.from_items(
        hg, [(x, complex(rng.uniform(-1, 1), rng.uniform(-1, 1))) for x in support]
    )


@pytest.fixture
def rng():
    return random.Random(20240817)


@pytest.fixture
def cheb_measures(cheb, rng):
    return [random_measure(cheb, rng, range(7)) for _ in range(6)]


@pytest.fixture
def dyadic_measures(realline, rng):
    pts = [0.25 * k for k in range(-8, 9)]
    return [random_measure(realline, rng, pts) for _ in range(6)]


def point_mass_pairs(hg, bound: int = 4):
    pts = hg.sample_points(bound)
    return [(dirac(hg, x), dirac(hg, y)) for x in pts for y in pts]
