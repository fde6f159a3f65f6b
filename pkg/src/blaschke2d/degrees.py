"""Degree growth: exact iterate degrees, the blow-up pullback matrix, and ``c_+(N)``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ResourceBudget
from .exact import TriPoly, poly_mul, poly_sum
from .maps import Blaschke2D, DegreeMatrix, HomogeneousMap, lift


# ---------------------------------------------------------------------------
# composition


def compose_reduce(g: HomogeneousMap, h: HomogeneousMap, max_terms: int | None = None) -> HomogeneousMap:
    """``g o h`` as a reduced homogeneous triple.

    Powers of ``h1, h2, h3`` and the mixed monomials in them are computed
    once and shared by the three components of ``g``.
    """
    d = g.degree
    powers = {j: [TriPoly.constant(1), h.components[j]] for j in range(3)}

    def power(j: int, e: int) -> TriPoly:
        ladder = powers[j]
        while len(ladder) <= e:
            ladder.append(poly_mul(ladder[-1], h.components[j], max_terms))
        return ladder[e]

    monomials: dict[tuple[int, int, int], TriPoly] = {}

    def monomial(e: tuple[int, int, int]) -> TriPoly:
        if e not in monomials:
            a, b, c = e
            monomials[e] = poly_mul(poly_mul(power(0, a), power(1, b), max_terms), power(2, c), max_terms)
        return monomials[e]

    out_degree = d * h.degree
    comps = []
    for G in g.components:
        comps.append(poly_sum((monomial(e) * c for e, c in G.terms.items()), out_degree))
    raw = HomogeneousMap(*comps)
    reduced = raw.reduced()
    return HomogeneousMap(*reduced.components, common_factor=reduced.common_factor)


@dataclass(frozen=True)
class DegreeSequence:
    """Algebraic degrees of ``f, f^2, ...``; ``truncated`` marks a budget stop."""

    degrees: tuple[int, ...]
    truncated: bool = False
    reason: str | None = None

    def __len__(self):
        return len(self.degrees)

    def __getitem__(self, k):
        return self.degrees[k]


def iterate_lifts(f: Blaschke2D, n_max: int, max_terms: int | None = None):
    """Yield reduced homogeneous lifts of ``f, f^2, ..., f^n_max``."""
    F = lift(f)
    current = F
    yield current
    for _ in range(n_max - 1):
        current = compose_reduce(F, current, max_terms)
        yield current


def degree_sequence(f: Blaschke2D, n_max: int, max_terms: int | None = None) -> DegreeSequence:
    """Exact algebraic degrees of the first ``n_max`` iterates.

    If ``max_terms`` is exceeded the sequence computed so far is returned with
    ``truncated=True``.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    degs: list[int] = []
    try:
        for H in iterate_lifts(f, n_max, max_terms):
            degs.append(H.degree)
    except ResourceBudget as exc:
        return DegreeSequence(tuple(degs), True, str(exc))
    return DegreeSequence(tuple(degs))


def monomial_degrees(N: DegreeMatrix, n_max: int) -> DegreeSequence:
    """Degrees of the monomial map's iterates: the maximal row sum of ``N^k``."""
    out = []
    a, b, c, d = 1, 0, 0, 1
    for _ in range(n_max):
        a, b, c, d = a * N.m + b * N.p, a * N.n + b * N.q, c * N.m + d * N.p, c * N.n + d * N.q
        out.append(max(a + b, c + d))
    return DegreeSequence(tuple(out))


# ---------------------------------------------------------------------------
# c_+(N)


@dataclass(frozen=True)
class QuadraticSurd:
    """The number ``(trace + sqrt(disc)) / 2``."""

    trace: int
    disc: int

    @property
    def value(self) -> float:
        return (self.trace + math.sqrt(self.disc)) / 2

    def __float__(self):
        return self.value

    def is_rational(self) -> bool:
        return math.isqrt(self.disc) ** 2 == self.disc

    def exact(self) -> Fraction | None:
        if not self.is_rational():
            return None
        return Fraction(self.trace + math.isqrt(self.disc), 2)

    def __str__(self):
        q = self.exact()
        if q is not None:
            return str(q)
        return f"({self.trace}+sqrt({self.disc}))/2"

    def compare(self, k: int) -> int:
        """Sign of ``self - k`` decided in integer arithmetic."""
        # self >= trace/2; for 2k <= trace the answer is decided by the vertex
        lhs = 2 * k - self.trace
        if lhs < 0:
            return 1
        sq = lhs * lhs
        return (self.disc > sq) - (self.disc < sq)


def c_plus(N: DegreeMatrix) -> QuadraticSurd:
    """Largest eigenvalue of ``N``: ``(m + q + sqrt((m - q)^2 + 4np)) / 2``."""
    return QuadraticSurd(N.m + N.q, (N.m - N.q) ** 2 + 4 * N.n * N.p)


def c_minus(N: DegreeMatrix) -> float:
    return (N.trace - math.sqrt((N.m - N.q) ** 2 + 4 * N.n * N.p)) / 2


# ---------------------------------------------------------------------------
# pullback on H^{1,1} of the plane blown up at [1:0:0] and [0:1:0]


@dataclass(frozen=True)
class CohomologyAction:
    """Integer matrix of the pullback in the basis (proper transform of ``Z = 0``,
    ``E[0:1:0]``, ``E[1:0:0]``); column ``j`` is the image of basis class ``j``."""

    M: tuple[tuple[int, int, int], ...]

    def __matmul__(self, v):
        return tuple(sum(self.M[i][j] * v[j] for j in range(3)) for i in range(3))

    def trace(self) -> int:
        return sum(self.M[i][i] for i in range(3))

    def charpoly(self) -> tuple[int, int, int, int]:
        """Coefficients ``(1, c2, c1, c0)`` of ``det(x I - M)``, highest degree first."""
        M = self.M
        minors = (M[0][0] * M[1][1] - M[0][1] * M[1][0]
                  + M[0][0] * M[2][2] - M[0][2] * M[2][0]
                  + M[1][1] * M[2][2] - M[1][2] * M[2][1])
        det = (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
               - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
               + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]))
        return (1, -self.trace(), minors, -det)

    def spectral_radius(self) -> float:
        import numpy as np
        return float(max(abs(np.linalg.eigvals(np.array(self.M, dtype=float)))))


def pullback_matrix(N: DegreeMatrix) -> CohomologyAction:
    m, n, p, q = N.m, N.n, N.p, N.q
    return CohomologyAction(((m + n, p + q, m + n), (n, q, n), (-n, -q, -n)))


def predicted_degrees(N: DegreeMatrix, n_max: int) -> DegreeSequence:
    """First component of ``M^k (1, 1, 0)``, ``k = 1..n_max``.

    ``(1, 1, 0)`` is the total transform of a generic line.  Valid for maps with
    generic zeros; the monomial map is not stable on this surface (use
    :func:`monomial_degrees`).
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    M = pullback_matrix(N)
    v = (1, 1, 0)
    out = []
    for _ in range(n_max):
        v = M @ v
        out.append(v[0])
    return DegreeSequence(tuple(out))


@dataclass(frozen=True)
class Lambda1Estimate:
    ratio: float
    root: float
    n: int
    ratios: tuple[float, ...] = field(default=())


def estimate_lambda1(seq) -> Lambda1Estimate:
    """Successive-ratio and n-th-root estimates of the dynamical degree.

    The ratio ``d_n / d_{n-1}`` is the primary estimate; it converges
    geometrically when ``d_n ~ a c^n`` whereas the root only converges like ``1/n``.
    """
    degs = tuple(seq.degrees if isinstance(seq, DegreeSequence) else seq)
    if len(degs) < 2:
        raise ValueError("need at least two degrees")
    ratios = tuple(degs[k] / degs[k - 1] for k in range(1, len(degs)))
    n = len(degs)
    return Lambda1Estimate(ratios[-1], degs[-1] ** (1.0 / n), n, ratios)
