from fractions import Fraction

import pytest
import sympy as sp

from blaschke2d import build_map
from blaschke2d.exact import GaussianRational
from blaschke2d.families import (EQUAL_DEGREE_DEFAULT, SMALL_DEGREE_DEFAULT, equal_degree_family,
                                 small_degree_family)

HALF, THIRD, FIFTH, SEVENTH = Fraction(1, 2), Fraction(1, 3), Fraction(1, 5), Fraction(1, 7)
QUARTER_I = GaussianRational(0, Fraction(1, 4))

SZ, SW, ST = sp.symbols("Z W T")


def to_sympy(p):
    """TriPoly -> sympy expression in Z, W, T (independent of the flint backend)."""
    expr = sp.Integer(0)
    for (i, j, k), c in p.terms.items():
        coeff = sp.Rational(c.re.numerator, c.re.denominator) + sp.I * sp.Rational(c.im.numerator, c.im.denominator)
        expr += coeff * SZ ** i * SW ** j * ST ** k
    return sp.expand(expr)


def gq(x):
    """Gaussian rational -> sympy number."""
    x = GaussianRational(x) if not isinstance(x, GaussianRational) else x
    return sp.Rational(x.re.numerator, x.re.denominator) + sp.I * sp.Rational(x.im.numerator, x.im.denominator)


@pytest.fixture
def generic_map():
    """N = [[1,1],[1,2]] with zeros 1/2 | 1/3 | 1/5 | i/4, 1/7."""
    return build_map([HALF], [THIRD], [FIFTH], [QUARTER_I, SEVENTH])


@pytest.fixture
def rotated_generic_map():
    return build_map([HALF], [THIRD], [FIFTH], [QUARTER_I, SEVENTH],
                     GaussianRational(3, 4), GaussianRational(1, -2))


@pytest.fixture
def small_family():
    return small_degree_family(**SMALL_DEGREE_DEFAULT)


@pytest.fixture
def equal_family():
    return equal_degree_family(**EQUAL_DEGREE_DEFAULT)
