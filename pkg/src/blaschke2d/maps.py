"""Two-variable Blaschke products, their homogeneous lifts and evaluation.

A map is

    f(z, w) = (A(z) B(w), C(z) D(w)),

where ``A, B, C, D`` are one-variable Blaschke products with zeros in the
open unit disc; the rotation ``theta1`` rides on ``A`` and ``theta2`` on
``C``.  All zeros and rotations are Gaussian rationals so that the
homogeneous lift can be built and reduced exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DegenerateDeterminant, EmptyFactor, ValidationError, ZeroOutsideDisc
from .exact import GaussianRational, TriPoly, UPoly, as_gaussian, poly_gcd_many, poly_divexact
from .exact.tripoly import T, W, Z

ONE = GaussianRational(1)


@dataclass(frozen=True)
class DegreeMatrix:
    """``N = [[m, n], [p, q]]`` with positive entries and ``det N > 0``."""

    m: int
    n: int
    p: int
    q: int

    def __post_init__(self):
        for name in "mnpq":
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                raise ValidationError(f"degree {name}={v!r} must be an integer >= 1", "PositiveDegrees")
        if self.det <= 0:
            raise DegenerateDeterminant(
                f"det N = {self.det} for N = {self.rows}; maps require det N > 0", "DegenerateDeterminant"
            )

    @classmethod
    def from_rows(cls, rows) -> "DegreeMatrix":
        (m, n), (p, q) = rows
        return cls(m, n, p, q)

    @property
    def det(self) -> int:
        return self.m * self.q - self.n * self.p

    @property
    def trace(self) -> int:
        return self.m + self.q

    @property
    def rows(self) -> list[list[int]]:
        return [[self.m, self.n], [self.p, self.q]]

    def array(self) -> np.ndarray:
        return np.array(self.rows, dtype=object)

    def __str__(self):
        return f"[[{self.m},{self.n}],[{self.p},{self.q}]]"


@dataclass(frozen=True)
class UnimodularRotation:
    """Exactly unimodular ``theta = u / conj(u)`` for a nonzero Gaussian rational seed ``u``."""

    seed: GaussianRational = ONE

    def __post_init__(self):
        object.__setattr__(self, "seed", as_gaussian(self.seed))
        if not self.seed:
            raise ValidationError("rotation seed must be nonzero", "NonzeroSeed")

    @property
    def value(self) -> GaussianRational:
        return self.seed / self.seed.conj()


@dataclass(frozen=True)
class OneVarBlaschke:
    """``rotation * prod (x - e)/(1 - conj(e) x)`` with every ``|e| < 1``."""

    zeros: tuple[GaussianRational, ...]
    rotation: UnimodularRotation = field(default_factory=UnimodularRotation)

    def __post_init__(self):
        zs = tuple(as_gaussian(z) for z in self.zeros)
        for z in zs:
            if z.abs2() >= 1:
                raise ZeroOutsideDisc(f"zero {z} has |z|^2 = {z.abs2()} >= 1", "ZeroOutsideDisc")
        object.__setattr__(self, "zeros", zs)

    @property
    def degree(self) -> int:
        return len(self.zeros)

    def numerator(self) -> UPoly:
        """``theta * prod (x - e)``."""
        return UPoly.from_roots(self.zeros, self.rotation.value)

    def denominator(self) -> UPoly:
        """``prod (1 - conj(e) x)``."""
        p = UPoly([1])
        for e in self.zeros:
            p = p * UPoly([1, -e.conj()])
        return p

    def __call__(self, x) -> GaussianRational:
        x = as_gaussian(x)
        return self.numerator()(x) / self.denominator()(x)

    def derivative_at(self, x) -> GaussianRational:
        num, den = self.numerator(), self.denominator()
        x = as_gaussian(x)
        d = den(x)
        return (num.derivative()(x) * d - num(x) * den.derivative()(x)) / (d * d)

    def evaluate_complex(self, x):
        x = np.asarray(x, dtype=np.complex128)
        out = np.full(x.shape, complex(self.rotation.value), dtype=np.complex128)
        for e in self.zeros:
            ec = complex(e)
            out = out * (x - ec) / (1 - ec.conjugate() * x)
        return out


@dataclass(frozen=True)
class Blaschke2D:
    """The map ``(z, w) -> (A(z) B(w), C(z) D(w))``."""

    A: OneVarBlaschke
    B: OneVarBlaschke
    C: OneVarBlaschke
    D: OneVarBlaschke

    @property
    def N(self) -> DegreeMatrix:
        return DegreeMatrix(self.A.degree, self.B.degree, self.C.degree, self.D.degree)

    @property
    def theta1(self) -> GaussianRational:
        return self.A.rotation.value

    @property
    def theta2(self) -> GaussianRational:
        return self.C.rotation.value

    @property
    def sigma(self) -> tuple[GaussianRational, ...]:
        """All zeros, concatenated in the order ``A, B, C, D``."""
        return self.A.zeros + self.B.zeros + self.C.zeros + self.D.zeros

    def is_monomial(self) -> bool:
        return all(not z for z in self.sigma)

    def with_rotations(self, u1, u2) -> "Blaschke2D":
        return build_map(self.A.zeros, self.B.zeros, self.C.zeros, self.D.zeros, u1, u2)

    def __call__(self, z, w):
        """Floating evaluation of the affine formula (vectorized)."""
        z = np.asarray(z, dtype=np.complex128)
        w = np.asarray(w, dtype=np.complex128)
        return self.A.evaluate_complex(z) * self.B.evaluate_complex(w), \
            self.C.evaluate_complex(z) * self.D.evaluate_complex(w)

    def evaluate_exact(self, z, w) -> tuple[GaussianRational, GaussianRational]:
        return self.A(z) * self.B(w), self.C(z) * self.D(w)

    def __str__(self):
        def fmt(b):
            return "[" + ", ".join(str(z) for z in b.zeros) + "]"
        return (f"Blaschke2D(N={self.N}, A={fmt(self.A)}, B={fmt(self.B)}, C={fmt(self.C)}, "
                f"D={fmt(self.D)}, theta1={self.theta1}, theta2={self.theta2})")


def build_map(a: Sequence, b: Sequence, c: Sequence, d: Sequence, u1=1, u2=1) -> Blaschke2D:
    """Validate zeros and rotation seeds and assemble a :class:`Blaschke2D`.

    Raises
    ------
    EmptyFactor
        Some zero list is empty.
    ZeroOutsideDisc
        Some zero has ``|z|^2 >= 1``.
    DegenerateDeterminant
        ``mq - np <= 0``.
    """
    for name, zs in zip("ABCD", (a, b, c, d)):
        if len(zs) == 0:
            raise EmptyFactor(f"factor {name} has no zeros", "EmptyFactor")
    A = OneVarBlaschke(tuple(a), UnimodularRotation(as_gaussian(u1)))
    B = OneVarBlaschke(tuple(b))
    C = OneVarBlaschke(tuple(c), UnimodularRotation(as_gaussian(u2)))
    D = OneVarBlaschke(tuple(d))
    DegreeMatrix(A.degree, B.degree, C.degree, D.degree)
    return Blaschke2D(A, B, C, D)


def monomial_map(N: DegreeMatrix) -> Blaschke2D:
    """``(z^m w^n, z^p w^q)``: every zero 0, both rotations 1."""
    return build_map([0] * N.m, [0] * N.n, [0] * N.p, [0] * N.q)


# ---------------------------------------------------------------------------
# homogeneous lift


@dataclass(frozen=True)
class HomogeneousMap:
    """``[F1 : F2 : F3]`` with a common degree; ``common_factor`` is what reduction removed."""

    F1: TriPoly
    F2: TriPoly
    F3: TriPoly
    common_factor: TriPoly = field(default_factory=lambda: TriPoly.constant(1))

    def __post_init__(self):
        degs = {F.degree for F in self.components}
        if len(degs) != 1:
            raise ValueError(f"components have different degrees {sorted(degs)}")

    @property
    def components(self) -> tuple[TriPoly, TriPoly, TriPoly]:
        return (self.F1, self.F2, self.F3)

    @property
    def degree(self) -> int:
        return self.F1.degree

    @property
    def raw_degree(self) -> int:
        return self.degree + self.common_factor.degree

    def reduced(self, method: str = "auto") -> "HomogeneousMap":
        """Divide out ``gcd(F1, F2, F3)``."""
        g = poly_gcd_many(self.components, method=method)
        if g.degree == 0:
            return self
        parts = [poly_divexact(F, g) for F in self.components]
        return HomogeneousMap(*parts, common_factor=self.common_factor * g)

    def evaluate_complex(self, z, w, t=1.0):
        return tuple(F.evaluate_complex(z, w, t) for F in self.components)

    def evaluate(self, point) -> tuple[GaussianRational, ...]:
        return tuple(F.evaluate(point) for F in self.components)

    @classmethod
    def identity(cls) -> "HomogeneousMap":
        return cls(Z, W, T)


def _prod(factors) -> TriPoly:
    out = TriPoly.constant(1)
    for f in factors:
        out = out * f
    return out


def raw_lift(f: Blaschke2D) -> HomogeneousMap:
    """Unreduced homogeneous triple with every Blaschke factor written out."""
    za = [Z - T * a for a in f.A.zeros]
    wb = [W - T * b for b in f.B.zeros]
    zc = [Z - T * c for c in f.C.zeros]
    wd = [W - T * d for d in f.D.zeros]
    pa = [T - Z * a.conj() for a in f.A.zeros]
    pb = [T - W * b.conj() for b in f.B.zeros]
    pc = [T - Z * c.conj() for c in f.C.zeros]
    pd = [T - W * d.conj() for d in f.D.zeros]
    F1 = _prod(za + wb + pc + pd) * f.theta1
    F2 = _prod(zc + wd + pa + pb) * f.theta2
    F3 = _prod(pa + pb + pc + pd)
    return HomogeneousMap(F1, F2, F3)


def lift(f: Blaschke2D) -> HomogeneousMap:
    """Reduced homogeneous lift; its degree is the algebraic degree of ``f``."""
    return raw_lift(f).reduced()


def algebraic_degree(f: Blaschke2D) -> int:
    return lift(f).degree


# ---------------------------------------------------------------------------
# floating evaluation with special values


@dataclass(frozen=True)
class AffineValue:
    """Result of :func:`eval_affine`.

    ``kind`` is ``"finite"`` (``value`` is the image pair), ``"infinite"``
    (``value`` is a normalized homogeneous triple with last entry 0) or
    ``"indeterminate"`` (``value`` is ``None``).
    """

    kind: str
    value: tuple | None

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"


def eval_affine(f: Blaschke2D, point, tol: float = 1e-9, lifted: HomogeneousMap | None = None) -> AffineValue:
    """Evaluate ``f`` at an affine point in double precision.

    A component of the reduced lift counts as vanishing when its modulus is
    below ``tol`` times the sum of absolute term values at the point.
    """
    z, w = (complex(x) for x in point)
    H = lifted if lifted is not None else _cached_lift(f)
    vals = [complex(F.evaluate_complex(z, w)) for F in H.components]
    scales = [float(F.abs_evaluate(z, w)) for F in H.components]
    vanish = [abs(v) <= tol * max(s, 1e-300) for v, s in zip(vals, scales)]
    if all(vanish):
        return AffineValue("indeterminate", None)
    if vanish[2]:
        v1, v2 = (0j if vanish[0] else vals[0]), (0j if vanish[1] else vals[1])
        k = max(abs(v1), abs(v2))
        return AffineValue("infinite", (v1 / k, v2 / k, 0j))
    with np.errstate(all="ignore"):
        direct = f(z, w)
    d1, d2 = complex(direct[0]), complex(direct[1])
    if np.isfinite(d1) and np.isfinite(d2) and not (np.isnan(d1.real) or np.isnan(d2.real)):
        return AffineValue("finite", (d1, d2))
    return AffineValue("finite", (vals[0] / vals[2], vals[1] / vals[2]))


_LIFT_CACHE: dict[Blaschke2D, HomogeneousMap] = {}


def _cached_lift(f: Blaschke2D) -> HomogeneousMap:
    if f not in _LIFT_CACHE:
        if len(_LIFT_CACHE) > 64:
            _LIFT_CACHE.clear()
        _LIFT_CACHE[f] = lift(f)
    return _LIFT_CACHE[f]


# ---------------------------------------------------------------------------
# serialization


def _quad(x: GaussianRational) -> list[int]:
    return list(as_gaussian(x).to_quad())


def _unquad(v, where: str) -> GaussianRational:
    if not (isinstance(v, (list, tuple)) and len(v) == 4
            and all(isinstance(k, int) and not isinstance(k, bool) for k in v)):
        raise ValidationError(f"{where}: expected four integers [re_num, re_den, im_num, im_den], got {v!r}",
                              "QuadFormat")
    if v[1] == 0 or v[3] == 0:
        raise ValidationError(f"{where}: zero denominator", "QuadFormat")
    return GaussianRational.from_quad(*v)


def map_to_dict(f: Blaschke2D) -> dict:
    """Serializable form: zero lists and rotation seeds as integer quadruples."""
    return {
        "A": [_quad(z) for z in f.A.zeros],
        "B": [_quad(z) for z in f.B.zeros],
        "C": [_quad(z) for z in f.C.zeros],
        "D": [_quad(z) for z in f.D.zeros],
        "rotation_seeds": [_quad(f.A.rotation.seed), _quad(f.C.rotation.seed)],
    }


MAP_KEYS = {"A", "B", "C", "D", "rotation_seeds"}


def map_from_dict(data: dict) -> Blaschke2D:
    if not isinstance(data, dict):
        raise ValidationError("map must be an object", "MapFormat")
    unknown = set(data) - MAP_KEYS
    if unknown:
        raise ValidationError(f"unknown map keys {sorted(unknown)}", "MapFormat")
    lists = []
    for name in "ABCD":
        if name not in data:
            raise ValidationError(f"map is missing factor {name}", "MapFormat")
        raw = data[name]
        if not isinstance(raw, list):
            raise ValidationError(f"factor {name} must be a list", "MapFormat")
        lists.append([_unquad(v, f"{name}[{k}]") for k, v in enumerate(raw)])
    seeds = data.get("rotation_seeds", [[1, 1, 0, 1], [1, 1, 0, 1]])
    if not (isinstance(seeds, list) and len(seeds) == 2):
        raise ValidationError("rotation_seeds must hold two quadruples", "MapFormat")
    u1, u2 = (_unquad(s, f"rotation_seeds[{k}]") for k, s in enumerate(seeds))
    return build_map(*lists, u1, u2)


def gaussian_str(x: GaussianRational) -> str:
    """Exact string form used in reports, e.g. ``"1/3"`` or ``"1/2+1/4i"``."""
    return str(as_gaussian(x))


def fraction_str(x: Fraction) -> str:
    return str(Fraction(x))
