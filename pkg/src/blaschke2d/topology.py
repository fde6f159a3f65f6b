"""Topological degree and the comparison of ``d_top`` with ``c_+(N)``."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .degrees import QuadraticSurd, c_plus
from .errors import InvariantViolation, SolverDeficiency, ValidationError
from .exact import GaussianRational
from .geometry import critical_jacobian
from .maps import Blaschke2D, DegreeMatrix
from .numeric import DEFAULT_TOL, SolutionSet, Tolerances, solve_system


def preimages_of_origin(f: Blaschke2D) -> list[tuple[GaussianRational, GaussianRational]]:
    """``{(a_i, d_j)} + {(c_k, b_l)}`` as a list (repeats kept for repeated zeros)."""
    out = [(a, d) for a in f.A.zeros for d in f.D.zeros]
    out += [(c, b) for c in f.C.zeros for b in f.B.zeros]
    return out


@dataclass(frozen=True)
class Genericity:
    generic: bool
    reasons: tuple[str, ...] = ()

    def __bool__(self):
        return self.generic


def is_generic(f: Blaschke2D) -> Genericity:
    """Zeros pairwise distinct and nonzero, and no zero is critical for its own factor."""
    reasons = []
    sigma = f.sigma
    if any(not z for z in sigma):
        reasons.append("some zero is 0")
    seen: dict[GaussianRational, str] = {}
    for name in "ABCD":
        for z in getattr(f, name).zeros:
            if z in seen:
                reasons.append(f"zero {z} repeated ({seen[z]} and {name})")
            else:
                seen[z] = name
    if not reasons:
        for name in "ABCD":
            b = getattr(f, name)
            for z in b.zeros:
                if not b.derivative_at(z):
                    reasons.append(f"zero {z} is critical for {name}")
    return Genericity(not reasons, tuple(reasons))


# ---------------------------------------------------------------------------
# topological degree


@dataclass(frozen=True)
class DegreeCount:
    """Result of :func:`topological_degree`; ``solutions`` only for the numeric strategy."""

    value: int
    strategy: str
    targets: tuple[tuple[complex, complex], ...] = ()
    solutions: tuple[SolutionSet, ...] = field(default=(), compare=False)

    def __int__(self):
        return self.value

    def __eq__(self, other):
        if isinstance(other, int):
            return self.value == other
        return NotImplemented if not isinstance(other, DegreeCount) else self.value == other.value

    def __hash__(self):
        return hash(self.value)


def sample_critical_values(f: Blaschke2D, n_lines: int = 48) -> np.ndarray:
    """Images of critical points found on ``n_lines`` circles of constant ``z``."""
    J = critical_jacobian(f)
    vals = []
    for k in range(n_lines):
        z = (0.15 + 0.8 * (k % 6) / 5) * np.exp(2j * np.pi * (k * 0.618034))
        coeffs = J.w_polynomial(z)
        while len(coeffs) > 1 and abs(coeffs[-1]) < 1e-14 * max(map(abs, coeffs)):
            coeffs.pop()
        if len(coeffs) < 2:
            continue
        for w in np.roots(coeffs[::-1]):
            with np.errstate(all="ignore"):
                a, b = f(z, w)
            if np.isfinite(a) and np.isfinite(b):
                vals.append((complex(a), complex(b)))
    return np.array(vals, dtype=np.complex128).reshape(-1, 2)


def random_targets(f: Blaschke2D, count: int, seed: int, modulus: float = 0.5,
                   clearance: float = 1e-4) -> list[tuple[complex, complex]]:
    """Seeded targets ``(modulus e^{i s}, modulus e^{i t})`` away from sampled critical values."""
    rng = np.random.default_rng(seed)
    crit = sample_critical_values(f)
    out = []
    while len(out) < count:
        t = modulus * np.exp(2j * np.pi * rng.random(2))
        if crit.size and np.min(np.max(np.abs(crit - t), axis=1)) < clearance:
            continue
        out.append((complex(t[0]), complex(t[1])))
    return out


def topological_degree(f: Blaschke2D, strategy: str = "auto", seed: int = 0,
                       tol: Tolerances = DEFAULT_TOL) -> DegreeCount:
    """Number of preimages of a generic point.

    ``exact-generic`` returns ``mq + np`` (requires :func:`is_generic`),
    ``monomial`` returns ``det N`` (requires all zeros 0) and ``numeric``
    counts solutions at two seeded random targets, which must agree.
    ``auto`` picks the first applicable of those three.

    Raises
    ------
    ValidationError
        The strategy's precondition fails.
    SolverDeficiency
        The numeric counts at the two targets differ.
    """
    N = f.N
    if strategy == "auto":
        strategy = "monomial" if f.is_monomial() else "exact-generic" if is_generic(f) else "numeric"
    if strategy == "exact-generic":
        g = is_generic(f)
        if not g:
            raise ValidationError("exact-generic degree needs a generic map: " + "; ".join(g.reasons), "Generic")
        return DegreeCount(N.m * N.q + N.n * N.p, strategy)
    if strategy == "monomial":
        if not f.is_monomial():
            raise ValidationError("monomial degree needs all zeros equal to 0", "Monomial")
        return DegreeCount(N.det, strategy)
    if strategy != "numeric":
        raise ValueError(f"unknown strategy {strategy!r}")
    targets = random_targets(f, 2, seed)
    sols = tuple(solve_system(f, t, tol=tol) for t in targets)
    counts = [len(s) for s in sols]
    if counts[0] != counts[1]:
        raise SolverDeficiency(f"preimage counts {counts} differ between random targets")
    return DegreeCount(counts[0], strategy, tuple(targets), sols)


# ---------------------------------------------------------------------------
# classification


CASES = ("I", "II", "III")


@dataclass(frozen=True)
class CaseLabel:
    """``I``: ``d_top > c_+``, ``II``: ``d_top < c_+``, ``III``: equality.

    ``p_value`` is ``p(d_top)`` for ``p(x) = x^2 - (m+q) x + det N``.
    """

    case: str
    d_top: int
    trace: int
    det: int
    p_value: int
    c_plus: QuadraticSurd

    @property
    def p_sign(self) -> int:
        return (self.p_value > 0) - (self.p_value < 0)

    def __str__(self):
        return f"Case {self.case}"


def classify_case(N: DegreeMatrix, d_top: int) -> CaseLabel:
    """Compare ``d_top`` with ``c_+(N)`` in integer arithmetic.

    ``c_+`` is the larger root of ``p``, so ``p(d) < 0`` means ``d`` lies
    strictly between the roots; otherwise the side of the vertex
    ``(m+q)/2`` decides.

    Raises
    ------
    InvariantViolation
        ``d_top < det N``.
    """
    d = int(d_top)
    if d < N.det:
        raise InvariantViolation(f"d_top = {d} is below det N = {N.det}")
    tr, det = N.trace, N.det
    p = d * d - tr * d + det
    twice = 2 * d
    if p < 0:
        case = "II"
    elif p == 0:
        case = "III" if twice >= tr else "II"
    else:
        case = "I" if twice > tr else "II"
    return CaseLabel(case, d, tr, det, p, c_plus(N))
