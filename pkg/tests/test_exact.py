import itertools
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from blaschke2d.errors import ResourceBudget
from blaschke2d.exact import (GaussianRational, T, TriPoly, UPoly, W, Z, divides, poly_divexact, poly_eval,
                              poly_gcd, poly_gcd_many, poly_mul, upoly_gcd)
from conftest import FIFTH, HALF, QUARTER_I, THIRD, SZ, SW, ST, to_sympy

small_frac = st.fractions(min_value=-3, max_value=3, max_denominator=6)
gaussians = st.builds(GaussianRational, small_frac, small_frac)
nonzero_gaussians = gaussians.filter(bool)


def exponents(d):
    return [(i, j, d - i - j) for i in range(d + 1) for j in range(d + 1 - i)]


@st.composite
def tripolys(draw, degree=None, max_degree=3):
    d = draw(st.integers(1, max_degree)) if degree is None else degree
    chosen = draw(st.lists(st.sampled_from(exponents(d)), min_size=1, max_size=5, unique=True))
    terms = {e: draw(nonzero_gaussians) for e in chosen}
    return TriPoly(terms, degree=d)


points = st.tuples(gaussians, gaussians, gaussians)


def naive_product(factors):
    """Term-by-term expansion with a plain dict, no collection shortcuts."""
    acc = {(0, 0, 0): GaussianRational(1)}
    for fac in factors:
        nxt = {}
        for e1, c1 in acc.items():
            for e2, c2 in fac.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                nxt[e] = nxt.get(e, GaussianRational(0)) + c1 * c2
        acc = {e: c for e, c in nxt.items() if c}
    return acc


# -- Gaussian rationals ------------------------------------------------------


def test_gaussian_field_operations_match_complex():
    a = GaussianRational(Fraction(1, 2), Fraction(-2, 3))
    b = GaussianRational(Fraction(3, 7), Fraction(1, 5))
    for got, want in ((a + b, complex(a) + complex(b)), (a - b, complex(a) - complex(b)),
                      (a * b, complex(a) * complex(b)), (a / b, complex(a) / complex(b))):
        assert abs(complex(got) - want) < 1e-15


def test_gaussian_rejects_floats():
    with pytest.raises(TypeError):
        GaussianRational(0.5)


@given(nonzero_gaussians)
def test_seed_quotient_is_unimodular(u):
    theta = u / u.conj()
    assert theta * theta.conj() == 1


# -- multiplication and evaluation -------------------------------------------


def test_monomial_product():
    p = Z * W
    assert p.degree == 2 and p.terms == {(1, 1, 0): GaussianRational(1)}


def test_difference_of_squares():
    p = (Z - T * HALF) * (Z + T * HALF)
    assert p == Z * Z - T * T * Fraction(1, 4)


def test_four_pole_factors_match_naive_expansion():
    factors = [T - Z * HALF, T - W * THIRD, T - Z * FIFTH, T - W * QUARTER_I.conj()]
    prod = TriPoly.constant(1)
    for f in factors:
        prod = poly_mul(prod, f)
    assert prod.degree == 4
    assert prod.terms == naive_product(factors)
    # before collection the expansion has 2^4 = 16 products
    assert len(list(itertools.product(*[f.terms for f in factors]))) == 16


def test_eval_examples():
    assert poly_eval(Z * W, (2, 3, 1)) == 6
    assert poly_eval(Z * Z - T * T * Fraction(1, 4), (HALF, 0, 1)) == 0


def test_exact_eval_agrees_with_float():
    p = (T - Z * HALF) * (T - W * THIRD) * (T - Z * FIFTH) * (T - W * QUARTER_I.conj())
    exact = complex(poly_eval(p, (1, 1, 1)))
    approx = complex(p.evaluate_complex(1.0, 1.0, 1.0))
    assert abs(exact - approx) <= 1e-12 * abs(exact)


@settings(max_examples=60, deadline=None)
@given(tripolys(), tripolys(), points)
def test_eval_is_multiplicative(a, b, x):
    assert poly_eval(poly_mul(a, b), x) == poly_eval(a, x) * poly_eval(b, x)


@settings(max_examples=60, deadline=None)
@given(tripolys(), tripolys())
def test_product_matches_naive_expansion_and_stays_homogeneous(a, b):
    prod = poly_mul(a, b)
    assert prod.terms == naive_product([a, b])
    assert all(sum(e) == a.degree + b.degree for e in prod.terms)


@settings(max_examples=40, deadline=None)
@given(tripolys(degree=2), tripolys(degree=2))
def test_sum_is_homogeneous(a, b):
    s = a + b
    assert all(sum(e) == 2 for e in s.terms)


def test_mixed_degree_sum_rejected():
    with pytest.raises(ValueError):
        Z + Z * W


def test_term_budget():
    p = (Z + W + T) ** 4
    with pytest.raises(ResourceBudget):
        poly_mul(p, p, max_terms=10)


# -- gcd ---------------------------------------------------------------------


def test_gcd_examples():
    assert poly_gcd(Z * W, Z * Z) == Z
    assert poly_gcd(Z * Z - T * T * Fraction(1, 4), Z - T * HALF) == Z - T * HALF


def test_gcd_is_monic_in_lex_order():
    g = poly_gcd((Z * 3 - W) * (T + Z), (Z * 3 - W) * (W - T))
    assert g == Z - W * Fraction(1, 3)


def test_gcd_of_coprime_is_one():
    assert poly_gcd(Z + W, Z - W).is_constant()


@settings(max_examples=30, deadline=None)
@given(tripolys(max_degree=3), tripolys(max_degree=3), tripolys(max_degree=3))
def test_gcd_divisibility_and_cofactor_coprimality(p, q, r):
    a, b = p * r, q * r
    g = poly_gcd(a, b)
    assert divides(g, a) and divides(g, b)
    assert divides(r, g) or not poly_gcd(p, q).is_constant()
    ca, cb = poly_divexact(a, g), poly_divexact(b, g)
    assert poly_gcd(ca, cb).is_constant()


@settings(max_examples=25, deadline=None)
@given(tripolys(max_degree=3), tripolys(max_degree=3), tripolys(max_degree=2))
def test_prs_and_modular_agree(p, q, r):
    a, b = p * r, q * r
    assert poly_gcd(a, b, method="prs") == poly_gcd(a, b, method="modular")


@settings(max_examples=15, deadline=None)
@given(tripolys(max_degree=2), tripolys(max_degree=2), tripolys(max_degree=2))
def test_gcd_matches_sympy(p, q, r):
    a, b = p * r, q * r
    want = sp.Poly(sp.gcd(to_sympy(a), to_sympy(b), extension=sp.I), SZ, SW, ST)
    got = sp.Poly(to_sympy(poly_gcd(a, b)), SZ, SW, ST)
    assert got.total_degree() == want.total_degree()
    # equal up to a unit: the ratio of the two is a constant
    ratio = sp.simplify(got.as_expr() / want.as_expr())
    assert ratio.free_symbols == set()


def test_gcd_many_with_power_of_t():
    polys = [T * T * Z, T * T * W, T ** 3]
    assert poly_gcd_many(polys) == T * T


def test_divexact_recovers_cofactor():
    a = (Z - W * HALF) * (T - Z * QUARTER_I)
    assert poly_divexact(a, T - Z * QUARTER_I) == Z - W * HALF


# -- univariate --------------------------------------------------------------


def test_upoly_gcd():
    a = UPoly.from_roots([HALF, THIRD, QUARTER_I])
    b = UPoly.from_roots([THIRD, QUARTER_I, FIFTH])
    assert upoly_gcd(a, b) == UPoly.from_roots([THIRD, QUARTER_I])


def test_upoly_divmod_identity():
    a = UPoly.from_roots([HALF, THIRD, QUARTER_I], lead=3)
    b = UPoly([1, GaussianRational(0, 2)])
    q, r = a.divmod(b)
    assert q * b + r == a and r.degree < b.degree
