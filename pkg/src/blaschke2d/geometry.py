"""Lines of zeros and poles, indeterminacy, the critical Jacobian, and the
behaviour of the map near the two points at infinity that get blown up."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import CoincidentZeros, DegenerateConfigurationWarning, ZeroAtOrigin
from .exact import GaussianRational, TriPoly, UPoly, as_gaussian
from .exact.tripoly import T, W, Z
from .maps import Blaschke2D, OneVarBlaschke, lift

FACTORS = "ABCD"
# which affine coordinate each factor acts on
_VAR = {"A": "z", "B": "w", "C": "z", "D": "w"}


def _factor(f: Blaschke2D, name: str) -> OneVarBlaschke:
    return getattr(f, name)


def has_distinct_nonzero_zeros(f: Blaschke2D) -> bool:
    s = f.sigma
    return all(s) and len(set(s)) == len(s)


# ---------------------------------------------------------------------------
# line arrangement


@dataclass(frozen=True)
class ProjLine:
    """A line of zeros or poles (or the line at infinity) in ``P^2``.

    ``kind`` is ``"zero-A"``, ``"pole-A"``, ..., ``"pole-D"`` or ``"infinity"``;
    ``degenerate`` marks lines that fall onto an axis or onto ``T = 0``
    because the underlying zero is 0.
    """

    kind: str
    index: int
    poly: TriPoly
    zero: GaussianRational | None = None
    degenerate: bool = False

    @property
    def factor(self) -> str | None:
        return None if self.kind == "infinity" else self.kind[-1]

    def key(self) -> tuple:
        """Rotation-independent identity (kind and normalized equation)."""
        return (self.kind, self.poly.monic())


def line_arrangement(f: Blaschke2D) -> list[ProjLine]:
    """All ``2(m+n+p+q)`` zero/pole lines followed by the line at infinity."""
    out = []
    for name in FACTORS:
        var = Z if _VAR[name] == "z" else W
        for k, e in enumerate(_factor(f, name).zeros):
            out.append(ProjLine(f"zero-{name}", k, var - T * e, e, degenerate=not e))
            # pole line T - var*conj(e); with e = 0 it is the line at infinity
            out.append(ProjLine(f"pole-{name}", k, T - var * e.conj(), e, degenerate=not e))
    out.append(ProjLine("infinity", 0, T))
    return out


# ---------------------------------------------------------------------------
# indeterminacy


AffinePoint = tuple[GaussianRational, GaussianRational]
INFINITE_POINTS = ((1, 0, 0), (0, 1, 0))


@dataclass(frozen=True)
class IndetSet:
    finite_points: tuple[AffinePoint, ...]
    infinite_points: tuple[tuple[int, int, int], ...]
    sources: tuple[str, ...]
    degenerate: bool = False

    def finite_set(self) -> frozenset[AffinePoint]:
        return frozenset(self.finite_points)

    def __len__(self):
        return len(self.finite_points)


def expected_indeterminacy_count(f: Blaschke2D) -> int:
    N = f.N
    return 2 * (N.m * N.n + N.p * N.q) + (N.m * N.q + N.n * N.p)


def _pole(e: GaussianRational) -> GaussianRational:
    return e.conj().inverse()


def _candidate_points(f: Blaschke2D):
    """Exact intersections of the listed line pairs (``None`` for pole lines at infinity)."""
    a, b, c, d = f.A.zeros, f.B.zeros, f.C.zeros, f.D.zeros
    pairs = [
        ("Z(A)&P(B)", [(x, _pole(y)) for x in a for y in b if y]),
        ("P(A)&Z(B)", [(_pole(x), y) for x in a if x for y in b]),
        ("Z(C)&P(D)", [(x, _pole(y)) for x in c for y in d if y]),
        ("P(C)&Z(D)", [(_pole(x), y) for x in c if x for y in d]),
        ("P(A)&P(D)", [(_pole(x), _pole(y)) for x in a if x for y in d if y]),
        ("P(C)&P(B)", [(_pole(x), _pole(y)) for x in c if x for y in b if y]),
    ]
    for label, pts in pairs:
        for p in pts:
            yield label, p


def indeterminacy_points(f: Blaschke2D) -> IndetSet:
    """Indeterminacy points of ``f`` on ``P^2``.

    Candidates come from intersecting the zero/pole lines pairwise; every
    returned point is checked to annihilate all three components of the
    reduced lift exactly.  For repeated or zero zeros a
    :class:`DegenerateConfigurationWarning` is emitted and only the verified
    candidates are kept.
    """
    degenerate = not has_distinct_nonzero_zeros(f)
    if degenerate:
        warnings.warn("zeros are not distinct and nonzero; indeterminacy set is best-effort",
                      DegenerateConfigurationWarning, stacklevel=2)
    H = lift(f)
    seen: dict[AffinePoint, str] = {}
    for label, (z, w) in _candidate_points(f):
        if (z, w) in seen:
            if not degenerate:
                raise AssertionError(f"duplicate indeterminacy point {z, w} for distinct zeros")
            continue
        vals = H.evaluate((z, w, 1))
        if all(not v for v in vals):
            seen[(z, w)] = label
        elif not degenerate:
            raise AssertionError(f"candidate {label} point {z, w} is not indeterminate")
    infinite = tuple(p for p in INFINITE_POINTS if all(not v for v in H.evaluate(p)))
    pts = tuple(seen)
    return IndetSet(pts, infinite, tuple(seen[p] for p in pts), degenerate)


# ---------------------------------------------------------------------------
# critical Jacobian


def _blaschke_star(b: OneVarBlaschke) -> tuple[UPoly, UPoly, UPoly]:
    """Unrotated numerator, denominator and ``num' den - num den'``."""
    num = UPoly.from_roots(b.zeros)
    den = b.denominator()
    return num, den, num.derivative() * den - num * den.derivative()


@dataclass(frozen=True)
class CriticalJacobian:
    """Numerator of the Jacobian determinant over the common denominator
    ``Ad^2 Bd^2 Cd^2 Dd^2``: ``{(i, j): c}`` for ``c z^i w^j``."""

    numerator: dict

    def __call__(self, z, w) -> GaussianRational:
        z, w = as_gaussian(z), as_gaussian(w)
        total = GaussianRational(0)
        for (i, j), c in self.numerator.items():
            total = total + c * z ** i * w ** j
        return total

    def evaluate_complex(self, z, w):
        z = np.asarray(z, dtype=np.complex128)
        w = np.asarray(w, dtype=np.complex128)
        out = np.zeros(np.broadcast(z, w).shape, dtype=np.complex128)
        for (i, j), c in self.numerator.items():
            out = out + complex(c) * z ** i * w ** j
        return out

    def normalized(self) -> "CriticalJacobian":
        """Scaled so the lexicographically-leading coefficient is 1 (locus invariant)."""
        if not self.numerator:
            return self
        lead = self.numerator[max(self.numerator)].inverse()
        return CriticalJacobian({e: c * lead for e, c in self.numerator.items()})

    def as_tripoly(self) -> TriPoly:
        return TriPoly.from_bivariate(self.numerator)

    def w_polynomial(self, z) -> list[complex]:
        """Coefficients (low first) of the numerator restricted to a fixed ``z``."""
        dw = max((j for _, j in self.numerator), default=0)
        out = [0j] * (dw + 1)
        for (i, j), c in self.numerator.items():
            out[j] += complex(c) * z ** i
        return out

    def __eq__(self, other):
        if not isinstance(other, CriticalJacobian):
            return NotImplemented
        return self.numerator == other.numerator

    def __hash__(self):
        return hash(frozenset(self.numerator.items()))


def _outer(u: UPoly, v: UPoly) -> dict:
    out = {}
    for i, a in enumerate(u.coeffs):
        if not a:
            continue
        for j, b in enumerate(v.coeffs):
            if b:
                out[(i, j)] = a * b
    return out


def critical_jacobian(f: Blaschke2D) -> CriticalJacobian:
    """``A'(z)B(w)C(z)D'(w) - A(z)B'(w)C'(z)D(w)`` with denominators cleared."""
    An, Ad, As = _blaschke_star(f.A)
    Bn, Bd, Bs = _blaschke_star(f.B)
    Cn, Cd, Cs = _blaschke_star(f.C)
    Dn, Dd, Ds = _blaschke_star(f.D)
    first = _outer(As * Cn * Cd, Bn * Bd * Ds)
    second = _outer(An * Ad * Cs, Bs * Dn * Dd)
    rot = f.theta1 * f.theta2
    num = {}
    for e in set(first) | set(second):
        c = (first.get(e, GaussianRational(0)) - second.get(e, GaussianRational(0))) * rot
        if c:
            num[e] = c
    return CriticalJacobian(num)


# ---------------------------------------------------------------------------
# exceptional divisors and pole-line covers


@dataclass(frozen=True)
class OneVarRational:
    """``scale * prod (x - e)/(1 - conj(e) x)``: a Blaschke-shaped rational map
    whose leading scale need not be unimodular."""

    scale: GaussianRational
    zeros: tuple[GaussianRational, ...]

    @property
    def degree(self) -> int:
        return len(self.zeros) if self.scale else 0

    def is_constant(self) -> bool:
        return self.degree == 0

    def __call__(self, x) -> GaussianRational:
        return OneVarBlaschke(self.zeros)(x) * self.scale

    def derivative_at(self, x) -> GaussianRational:
        return OneVarBlaschke(self.zeros).derivative_at(x) * self.scale

    def evaluate_complex(self, x):
        return OneVarBlaschke(self.zeros).evaluate_complex(x) * complex(self.scale)


def _prod_neg_inv_conj(zeros: Iterable[GaussianRational]) -> GaussianRational:
    out = GaussianRational(1)
    for e in zeros:
        out = out * (-e.conj().inverse())
    return out


def exceptional_extension(f: Blaschke2D, divisor: str = "E[1:0:0]") -> tuple[OneVarRational, OneVarRational]:
    """The map ``lambda -> f`` restricted to an exceptional divisor.

    On ``E[1:0:0]`` (slopes ``lambda = W/T`` at ``[1:0:0]``) the first
    coordinate is ``theta1 * prod(-1/conj(a_i)) * B(lambda)`` and the second
    ``theta2 * prod(-1/conj(c_i)) * D(lambda)``; ``E[0:1:0]`` swaps the roles
    of ``(A, C)`` and ``(B, D)``.
    """
    if divisor == "E[1:0:0]":
        outer, inner = (f.A, f.C), (f.B, f.D)
    elif divisor == "E[0:1:0]":
        outer, inner = (f.B, f.D), (f.A, f.C)
    else:
        raise ValueError(f"unknown divisor {divisor!r}")
    for b in outer:
        if not all(b.zeros):
            raise ZeroAtOrigin(f"extension to {divisor} needs nonzero zeros in {outer[0] is b and 'first' or 'second'} factor")
    s1 = f.theta1 * _prod_neg_inv_conj(outer[0].zeros)
    s2 = f.theta2 * _prod_neg_inv_conj(outer[1].zeros)
    return OneVarRational(s1, inner[0].zeros), OneVarRational(s2, inner[1].zeros)


@dataclass(frozen=True)
class PoleCover:
    line: ProjLine
    divisor: str
    map: OneVarRational

    @property
    def degree(self) -> int:
        return self.map.degree


def pole_line_cover(f: Blaschke2D, line: ProjLine) -> PoleCover:
    """How a pole line covers its exceptional divisor after the blow-ups.

    Lines from ``P(A)`` and ``P(B)`` land on ``E[1:0:0]`` (coordinate
    ``W/T`` of the image), those from ``P(C)`` and ``P(D)`` on ``E[0:1:0]``
    (coordinate ``Z/T``).  The cover degree is ``q, p, n, m`` respectively.
    """
    if not line.kind.startswith("pole-"):
        raise ValueError(f"{line.kind} is not a pole line")
    name = line.factor
    e = line.zero
    if not e:
        raise ZeroAtOrigin(f"pole line of zero 0 in {name} is the line at infinity")
    x0 = _pole(e)  # the line is {var = x0}
    # (fixed factor evaluated on the line, moving factor, rotation of image coordinate)
    partner = {"A": ("C", "D", f.theta2), "B": ("D", "C", f.theta2),
               "C": ("A", "B", f.theta1), "D": ("B", "A", f.theta1)}[name]
    fixed, moving, rot = _factor(f, partner[0]), _factor(f, partner[1]), partner[2]
    if any(z == e for z in fixed.zeros):
        raise CoincidentZeros(f"zero {e} of {name} is also a zero of {partner[0]}; cover degree drops")
    num = UPoly.from_roots(fixed.zeros)(x0)
    den = fixed.denominator()(x0)
    divisor = "E[1:0:0]" if name in "AB" else "E[0:1:0]"
    return PoleCover(line, divisor, OneVarRational(rot * num / den, moving.zeros))
