import warnings
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp

from blaschke2d import DegreeMatrix, build_map, lift, monomial_map
from blaschke2d.errors import CoincidentZeros, DegenerateConfigurationWarning, ZeroAtOrigin
from blaschke2d.exact import GaussianRational, T, W, Z, poly_eval
from blaschke2d.families import random_generic_map
from blaschke2d.geometry import (critical_jacobian, exceptional_extension, expected_indeterminacy_count,
                                 indeterminacy_points, line_arrangement, pole_line_cover)
from blaschke2d.maps import eval_affine
from blaschke2d.topology import preimages_of_origin
from conftest import FIFTH, HALF, SEVENTH, THIRD, gq

QUARTER = Fraction(1, 4)
ROT = (GaussianRational(3, 4), GaussianRational(1, -2))


@pytest.fixture
def real_map():
    """A = 1/2, B = 1/3, C = 1/5, D = 1/4, 1/7 (N = [[1,1],[1,2]])."""
    return build_map([HALF], [THIRD], [FIFTH], [QUARTER, SEVENTH])


def lines_of(f, kind):
    return [L for L in line_arrangement(f) if L.kind == kind]


# -- line arrangement --------------------------------------------------------


def test_line_count(real_map):
    lines = line_arrangement(real_map)
    assert len(lines) == 2 * 5 + 1 and lines[-1].kind == "infinity"
    assert all(L.poly.degree == 1 for L in lines)


def test_pole_line_formula(real_map):
    (L,) = lines_of(real_map, "pole-A")
    assert L.poly == T - Z * HALF


def test_monomial_lines_are_degenerate():
    lines = line_arrangement(monomial_map(DegreeMatrix(1, 1, 1, 2)))
    for L in lines[:-1]:
        assert L.degenerate
        assert L.poly.monic() in ((Z), (W), (T))


# -- indeterminacy -----------------------------------------------------------


def test_indeterminacy_count_and_exact_vanishing(real_map, generic_map):
    for f in (real_map, generic_map):
        S = indeterminacy_points(f)
        assert len(S) == expected_indeterminacy_count(f) == 9
        assert set(S.infinite_points) == {(1, 0, 0), (0, 1, 0)}
        H = lift(f)
        for z, w in S.finite_points:
            assert z and w  # off the coordinate axes
            assert all(poly_eval(F, (z, w, 1)) == 0 for F in H.components)


@pytest.mark.parametrize("seed", range(8))
def test_indeterminacy_count_random(seed):
    rng = np.random.default_rng(seed)
    while True:
        m, n, p, q = (int(v) for v in rng.integers(1, 4, size=4))
        if m * q - n * p > 0:
            break
    f = random_generic_map(DegreeMatrix(m, n, p, q), seed)
    assert len(indeterminacy_points(f)) == 2 * (m * n + p * q) + (m * q + n * p)


def test_degenerate_configuration_warns(small_family):
    with pytest.warns(DegenerateConfigurationWarning):
        S = indeterminacy_points(small_family)
    assert S.degenerate
    H = lift(small_family)
    for z, w in S.finite_points:
        assert all(poly_eval(F, (z, w, 1)) == 0 for F in H.components)


# -- critical Jacobian -------------------------------------------------------


def test_monomial_jacobian_is_zw2():
    J = critical_jacobian(monomial_map(DegreeMatrix(1, 1, 1, 2)))
    z, w = sp.symbols("z w")
    oracle = sp.Matrix([z * w, z * w ** 2]).jacobian([z, w]).det()
    assert sp.expand(oracle) == z * w ** 2
    assert J.numerator == {(1, 2): GaussianRational(1)}


def _sympy_factor(zeros, rot, x):
    out = gq(rot)
    for e in zeros:
        out *= (x - gq(e)) / (1 - sp.conjugate(gq(e)) * x)
    return out


def test_jacobian_numerator_against_symbolic_differentiation(rotated_generic_map):
    f = rotated_generic_map
    z, w = sp.symbols("z w")
    F1 = _sympy_factor(f.A.zeros, f.theta1, z) * _sympy_factor(f.B.zeros, 1, w)
    F2 = _sympy_factor(f.C.zeros, f.theta2, z) * _sympy_factor(f.D.zeros, 1, w)
    parts = [sp.diff(F, v) for F in (F1, F2) for v in (z, w)]
    den = 1
    for b, var in ((f.A, z), (f.B, w), (f.C, z), (f.D, w)):
        for e in b.zeros:
            den *= (1 - sp.conjugate(gq(e)) * var) ** 2
    J = critical_jacobian(f)
    for zz, ww in [(Fraction(1, 3), Fraction(-2, 7)), (GaussianRational(Fraction(1, 2), Fraction(1, 9)), 2),
                   (GaussianRational(0, 3), GaussianRational(Fraction(5, 6), -1))]:
        pt = {z: gq(zz), w: gq(ww)}
        a, b, c, d = (p.subs(pt) for p in parts)
        want = sp.expand((a * d - b * c) * den.subs(pt))
        assert sp.expand(want - gq(J(zz, ww))) == 0


def test_jacobian_nonzero_at_preimages_of_origin(generic_map, rotated_generic_map):
    for f in (generic_map, rotated_generic_map, random_generic_map(DegreeMatrix(2, 1, 1, 2), 4)):
        J = critical_jacobian(f)
        for z, w in preimages_of_origin(f):
            assert J(z, w) != 0


def test_rotation_scales_jacobian(generic_map):
    J0 = critical_jacobian(generic_map)
    J1 = critical_jacobian(generic_map.with_rotations(*ROT))
    factor = (ROT[0] / ROT[0].conj()) * (ROT[1] / ROT[1].conj())
    assert J1.numerator == {e: c * factor for e, c in J0.numerator.items()}
    assert J1.normalized() == J0.normalized()


# -- exceptional divisors ----------------------------------------------------


def test_extension_formula(real_map):
    r1, r2 = exceptional_extension(real_map, "E[1:0:0]")
    assert r1.scale == -2 and r1.zeros == (THIRD,)
    assert r2.scale == -5 and r2.zeros == (QUARTER, SEVENTH)
    lam = Fraction(1, 6)
    assert r1(lam) == -2 * (lam - THIRD) / (1 - THIRD * lam)
    assert r1.derivative_at(0) != 0 and r2.derivative_at(0) != 0


@pytest.mark.parametrize("divisor", ["E[1:0:0]", "E[0:1:0]"])
def test_extension_is_limit_along_curves(divisor, real_map):
    f = real_map.with_rotations(*ROT)
    r1, r2 = exceptional_extension(f, divisor)
    for lam in (0.3 - 0.2j, -1.5 + 0.4j, 1.2j):
        t = 1e-8
        z, w = (1 / t, lam) if divisor == "E[1:0:0]" else (lam, 1 / t)
        a, b = (complex(v) for v in f(z, w))
        e1, e2 = (complex(r.evaluate_complex(lam)) for r in (r1, r2))
        assert abs(a - e1) < 1e-6 * max(1, abs(e1))
        assert abs(b - e2) < 1e-6 * max(1, abs(e2))
        # without the rotation factors the limit is missed
        assert abs(a - e1 / complex(f.theta1)) > 1e-2 * abs(e1)


def test_extension_needs_nonzero_zeros():
    with pytest.raises(ZeroAtOrigin):
        exceptional_extension(monomial_map(DegreeMatrix(1, 1, 1, 2)))


# -- pole-line covers --------------------------------------------------------


COVER_DEGREE = {"pole-A": "q", "pole-B": "p", "pole-C": "n", "pole-D": "m"}
TARGET = {"pole-A": "E[1:0:0]", "pole-B": "E[1:0:0]", "pole-C": "E[0:1:0]", "pole-D": "E[0:1:0]"}


@pytest.mark.parametrize("N", [DegreeMatrix(1, 1, 1, 2), DegreeMatrix(2, 1, 1, 3), DegreeMatrix(3, 1, 2, 2)])
def test_cover_degree_table(N):
    f = random_generic_map(N, 2)
    for L in line_arrangement(f):
        if L.kind.startswith("pole-"):
            cov = pole_line_cover(f, L)
            assert cov.degree == getattr(N, COVER_DEGREE[L.kind])
            assert cov.divisor == TARGET[L.kind]


def test_cover_examples(generic_map):
    (PA,) = lines_of(generic_map, "pole-A")
    assert pole_line_cover(generic_map, PA).degree == 2
    for L in lines_of(generic_map, "pole-D"):
        assert pole_line_cover(generic_map, L).degree == 1


def test_cover_matches_image_coordinate():
    f = random_generic_map(DegreeMatrix(1, 1, 1, 2), 9)
    rng = np.random.default_rng(0)
    for L in line_arrangement(f):
        if not L.kind.startswith("pole-"):
            continue
        x0 = 1 / np.conj(complex(L.zero))
        cov = pole_line_cover(f, L)
        for s in rng.normal(size=3) + 1j * rng.normal(size=3):
            z, w = (x0, s) if L.factor in "AC" else (s, x0)
            # move a little off the line so f is finite, then compare the finite coordinate
            eps = 1e-9
            z2, w2 = (z + eps, w) if L.factor in "AC" else (z, w + eps)
            a, b = (complex(v) for v in f(z2, w2))
            finite = b if L.factor in "AB" else a
            assert abs(finite - complex(cov.map.evaluate_complex(s))) < 1e-5 * max(1, abs(finite))


def test_pole_lines_map_to_infinite_points():
    f = random_generic_map(DegreeMatrix(1, 1, 1, 2), 9)
    rng = np.random.default_rng(1)
    for L in line_arrangement(f):
        if not L.kind.startswith("pole-"):
            continue
        x0 = 1 / np.conj(complex(L.zero))
        for s in rng.normal(size=4) + 1j * rng.normal(size=4):
            pt = (x0, s) if L.factor in "AC" else (s, x0)
            v = eval_affine(f, pt)
            assert v.kind == "infinite"
            want = 0 if L.factor in "AB" else 1  # index of the coordinate that survives
            assert abs(abs(v.value[want]) - 1) < 1e-9 and abs(v.value[1 - want]) < 1e-9


def test_coincident_zero_cover(small_family):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        (PA, *_) = lines_of(small_family, "pole-A")
    with pytest.raises(CoincidentZeros):
        pole_line_cover(small_family, PA)


# -- rotation invariance -----------------------------------------------------


def test_rotation_invariance(generic_map):
    ref = None
    for u1, u2 in [(1, 1), ROT, (GaussianRational(2, -1), GaussianRational(5, 1))]:
        f = generic_map.with_rotations(u1, u2)
        sig = (indeterminacy_points(f).finite_set(), frozenset(L.key() for L in line_arrangement(f)),
               critical_jacobian(f).normalized())
        ref = ref or sig
        assert sig == ref
