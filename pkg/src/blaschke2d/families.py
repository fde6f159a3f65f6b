"""Named map families and random generic maps."""

from __future__ import annotations

import random
from fractions import Fraction

from .exact import GaussianRational
from .maps import Blaschke2D, DegreeMatrix, build_map


def small_degree_family(a, b, c, u1=1, u2=1) -> Blaschke2D:
    """``N = [[5, 2], [2, 1]]`` with ``A = (a)^5, B = (b)^2, C = (a, c), D = (b)``.

    ``A`` and ``C`` share the zero ``a`` (and ``B``, ``D`` share ``b``), which
    drops the topological degree from ``mq + np = 9`` to 5 while the
    dynamical degree stays ``(6 + sqrt 32)/2``.
    """
    return build_map([a] * 5, [b] * 2, [a, c], [b], u1, u2)


def equal_degree_family(a1, a2, a3, b, u1=1, u2=1) -> Blaschke2D:
    """``N = [[3, 2], [2, 3]]`` with ``A = (a1, a2, a3), B = (b, b), C = (a1, a2), D = (b, b, b)``.

    Topological and dynamical degree both equal 5 = det N.
    """
    return build_map([a1, a2, a3], [b, b], [a1, a2], [b, b, b], u1, u2)


SMALL_DEGREE_DEFAULT = dict(a=Fraction(1, 4), b=Fraction(1, 3), c=Fraction(1, 2))
EQUAL_DEGREE_DEFAULT = dict(a1=Fraction(1, 5), a2=GaussianRational(0, Fraction(1, 4)),
                            a3=Fraction(-1, 3), b=GaussianRational(Fraction(1, 6), Fraction(1, 7)))


def random_gaussian_zero(rng: random.Random, max_den: int = 8, max_modulus: float = 1.0) -> GaussianRational:
    """Nonzero Gaussian rational of modulus below ``max_modulus``.

    A point of the unit disc with parts ``k/d``, ``d <= max_den``, is drawn and
    then scaled by ``max_modulus`` (as a rational), so small caps are reachable.
    """
    scale = Fraction(max_modulus).limit_denominator(10 ** 6)
    if not 0 < scale <= 1:
        raise ValueError("max_modulus must lie in (0, 1]")
    while True:
        re = Fraction(rng.randint(-max_den, max_den), rng.randint(1, max_den))
        im = Fraction(rng.randint(-max_den, max_den), rng.randint(1, max_den))
        z = GaussianRational(re, im)
        if z and z.abs2() < 1:
            return z * scale


def random_generic_map(N: DegreeMatrix, seed: int = 0, max_den: int = 8,
                       max_modulus: float = 1.0, rotations: bool = True) -> Blaschke2D:
    """Map with pairwise distinct nonzero zeros drawn from a seeded generator."""
    rng = random.Random(seed)
    zeros: list[GaussianRational] = []
    while len(zeros) < N.m + N.n + N.p + N.q:
        z = random_gaussian_zero(rng, max_den, max_modulus)
        if z not in zeros:
            zeros.append(z)
    i = 0
    lists = []
    for k in (N.m, N.n, N.p, N.q):
        lists.append(zeros[i:i + k])
        i += k
    if rotations:
        u1 = GaussianRational(rng.randint(1, 5), rng.randint(-5, 5))
        u2 = GaussianRational(rng.randint(1, 5), rng.randint(-5, 5))
    else:
        u1 = u2 = 1
    return build_map(*lists, u1, u2)
