"""Double-precision root finding and preimage solving.

The preimage system ``f(z, w) = (z', w')`` is cleared of denominators,
``w`` (or ``z``) is eliminated with a Sylvester resultant sampled on roots of
unity, the univariate resultant is solved through companion-matrix
eigenvalues, and each root is completed to a solution from the one-variable
pencils in the other coordinate before a two-dimensional Newton polish.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import DegenerateSystem, NonConvergence, SolverDeficiency
from .maps import Blaschke2D


@dataclass(frozen=True)
class Tolerances:
    """Every numeric threshold used by the solver, in one place."""

    trim: float = 1e-14          # relative size below which a leading coefficient is dropped
    root_backward: float = 1e-10  # accepted backward error of a univariate root
    infinity_ratio: float = 1e12  # resultant coefficients this much below the max are roots at infinity
    candidate: float = 1e-5       # loose joint residual for back-substituted candidates
    residual: float = 1e-8        # final residual filter
    dedup: float = 1e-8           # relative merge radius
    pole_guard: float = 1e-6      # distance to a pole line below which a point is discarded
    singular: float = 1e-7        # relative Jacobian size flagging a possibly multiple solution
    newton_steps: int = 12


DEFAULT_TOL = Tolerances()


# ---------------------------------------------------------------------------
# univariate


class ComplexPoly:
    """Dense complex polynomial, coefficients lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, trim: float = DEFAULT_TOL.trim):
        c = np.atleast_1d(np.asarray(coeffs, dtype=np.complex128)).copy()
        if c.size:
            big = np.max(np.abs(c))
            if big == 0:
                c = c[:1] * 0
            else:
                k = c.size
                while k > 1 and abs(c[k - 1]) <= trim * big:
                    k -= 1
                c = c[:k]
        else:
            c = np.zeros(1, dtype=np.complex128)
        self.coeffs = c

    @property
    def degree(self) -> int:
        return -1 if self.is_zero() else self.coeffs.size - 1

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def norm(self) -> float:
        return float(np.sum(np.abs(self.coeffs)))

    def __call__(self, x):
        return npoly.polyval(x, self.coeffs)

    def derivative(self) -> "ComplexPoly":
        return ComplexPoly(npoly.polyder(self.coeffs), trim=0.0)

    def backward_error(self, x) -> float:
        """``|p(x)| / sum |c_k| max(1, |x|)^k``: relative residual of a root candidate.

        Inside the unit disc this is ``|p(x)| / ||p||_1``; the floor at 1 keeps
        it meaningful at roots where every term is tiny (for example ``x = 0``).
        """
        scale = npoly.polyval(max(1.0, abs(x)), np.abs(self.coeffs))
        return float(abs(self(x)) / scale) if scale else 0.0

    def __repr__(self):
        return f"ComplexPoly({self.coeffs.tolist()})"


def univariate_roots(p: ComplexPoly, tol: Tolerances = DEFAULT_TOL) -> list[complex]:
    """All roots with multiplicity, from companion eigenvalues plus guarded Newton.

    Raises
    ------
    NonConvergence
        Some root has backward error above ``tol.root_backward``.
    """
    if not isinstance(p, ComplexPoly):
        p = ComplexPoly(p, tol.trim)
    if p.degree < 1:
        raise ValueError("univariate_roots needs degree >= 1")
    roots = np.roots(p.coeffs[::-1])
    dp = p.derivative()
    out = []
    for r in roots:
        r = complex(r)
        err = p.backward_error(r)
        for _ in range(tol.newton_steps):
            d = dp(r)
            if d == 0:
                break
            cand = r - p(r) / d
            e2 = p.backward_error(cand)
            if e2 >= err:
                break
            r, err = complex(cand), e2
        if err > tol.root_backward:
            raise NonConvergence(f"root {r} has backward error {err:.3g}")
        out.append(r)
    return out


def cluster_roots(roots, radius: float = 1e-4) -> list[tuple[complex, int]]:
    """Group roots closer than ``radius`` (relative) into ``(mean, multiplicity)``."""
    pending = sorted((complex(r) for r in roots), key=lambda x: (x.real, x.imag))
    clusters: list[list[complex]] = []
    for r in pending:
        for c in clusters:
            center = sum(c) / len(c)
            if abs(r - center) <= radius * max(1.0, abs(center)):
                c.append(r)
                break
        else:
            clusters.append([r])
    return [(sum(c) / len(c), len(c)) for c in clusters]


# ---------------------------------------------------------------------------
# bivariate and resultants

# A bivariate polynomial is an array ``c`` with ``c[i, j]`` the coefficient of z^i w^j.


def _bivariate_eval(c: np.ndarray, z, w):
    return npoly.polyval2d(z, w, c)


def _bivariate_scale(c: np.ndarray, z, w) -> float:
    # floored like ComplexPoly.backward_error
    return float(npoly.polyval2d(max(1.0, abs(z)), max(1.0, abs(w)), np.abs(c)))


def _sylvester(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Sylvester matrix with coefficient rows written lowest degree first."""
    dp, dq = p.size - 1, q.size - 1
    n = dp + dq
    S = np.zeros((n, n), dtype=np.complex128)
    for i in range(dq):
        S[i, i:i + dp + 1] = p
    for i in range(dp):
        S[dq + i, i:i + dq + 1] = q
    return S


def resultant_eliminate(P1, P2, eliminate: str = "w", tol: Tolerances = DEFAULT_TOL) -> ComplexPoly:
    """Resultant of two bivariate polynomials with respect to ``eliminate``.

    Determinants of the Sylvester matrix (LU with partial pivoting) are taken
    at ``K`` roots of unity, ``K`` one more than the degree bound, and the
    coefficients recovered by an inverse FFT.

    Raises
    ------
    DegenerateSystem
        The resultant vanishes identically (common factor).
    """
    P1 = np.atleast_2d(np.asarray(P1, dtype=np.complex128))
    P2 = np.atleast_2d(np.asarray(P2, dtype=np.complex128))
    if eliminate == "z":
        P1, P2 = P1.T, P2.T
    elif eliminate != "w":
        raise ValueError("eliminate must be 'z' or 'w'")
    P1, P2 = _trim2(P1), _trim2(P2)
    if not P1.any() or not P2.any():
        raise DegenerateSystem("resultant of a zero polynomial")
    (e1, d1), (e2, d2) = (s - 1 for s in P1.shape), (s - 1 for s in P2.shape)
    if d1 == 0 and d2 == 0:
        raise DegenerateSystem("neither polynomial involves the eliminated variable")
    bound = d2 * e1 + d1 * e2
    K = bound + 1
    xs = np.exp(2j * np.pi * np.arange(K) / K)
    vals = np.empty(K, dtype=np.complex128)
    for k, x in enumerate(xs):
        a = npoly.polyval(x, P1)  # coefficients in the eliminated variable
        b = npoly.polyval(x, P2)
        vals[k] = np.linalg.det(_sylvester(a, b)) if d1 + d2 else 1.0
    coeffs = np.fft.fft(vals) / K
    big = np.max(np.abs(coeffs))
    ref = np.sum(np.abs(P1)) ** d2 * np.sum(np.abs(P2)) ** d1
    if big <= 1e-12 * ref:
        raise DegenerateSystem("resultant vanishes identically")
    return ComplexPoly(coeffs, trim=1.0 / tol.infinity_ratio)


def _trim2(c: np.ndarray) -> np.ndarray:
    nz = np.argwhere(c != 0)
    if nz.size == 0:
        return c[:1, :1] * 0
    i, j = nz.max(axis=0)
    return c[: i + 1, : j + 1]


# ---------------------------------------------------------------------------
# the preimage system


def _factor_polys(b) -> tuple[np.ndarray, np.ndarray]:
    """Unrotated numerator and denominator coefficient arrays (low first)."""
    zs = [complex(e) for e in b.zeros]
    num = npoly.polyfromroots(zs) if zs else np.array([1.0 + 0j])
    den = np.array([1.0 + 0j])
    for e in zs:
        den = npoly.polymul(den, [1.0, -e.conjugate()])
    # polymul trims trailing zeros (zero zeros give a constant denominator)
    out = np.zeros(len(zs) + 1, dtype=np.complex128)
    out[: den.size] = den
    return np.asarray(num, dtype=np.complex128), out


def preimage_system(f: Blaschke2D, target) -> tuple[np.ndarray, np.ndarray]:
    """``P1 = theta1 An Bn - z' Ad Bd`` and ``P2 = theta2 Cn Dn - w' Cd Dd``."""
    z1, w1 = (complex(t) for t in target)
    An, Ad = _factor_polys(f.A)
    Bn, Bd = _factor_polys(f.B)
    Cn, Cd = _factor_polys(f.C)
    Dn, Dd = _factor_polys(f.D)
    P1 = complex(f.theta1) * np.outer(An, Bn) - z1 * np.outer(Ad, Bd)
    P2 = complex(f.theta2) * np.outer(Cn, Dn) - w1 * np.outer(Cd, Dd)
    return P1, P2


@dataclass(frozen=True)
class SolutionSet:
    """Affine solutions of ``f(z, w) = target``.

    ``residuals`` are the normalized residuals of the cleared system,
    ``image_residuals`` the max-norm of ``f(point) - target``; a set
    ``multiplicity_flags`` entry marks a near-singular Jacobian.
    """

    points: tuple[tuple[complex, complex], ...]
    residuals: tuple[float, ...]
    image_residuals: tuple[float, ...]
    multiplicity_flags: tuple[bool, ...]
    target: tuple[complex, complex]
    eliminate: str = "w"
    discarded: int = 0
    tolerances: Tolerances = field(default=DEFAULT_TOL, compare=False)

    def __len__(self):
        return len(self.points)

    def array(self) -> np.ndarray:
        return np.array(self.points, dtype=np.complex128).reshape(-1, 2)

    @property
    def max_residual(self) -> float:
        return max(self.image_residuals, default=0.0)


def _newton2(P1, P2, z, w, steps: int):
    d1z, d1w = npoly.polyder(P1, axis=0), npoly.polyder(P1, axis=1)
    d2z, d2w = npoly.polyder(P2, axis=0), npoly.polyder(P2, axis=1)

    def resid(z, w):
        return max(abs(_bivariate_eval(P1, z, w)) / max(_bivariate_scale(P1, z, w), 1e-300),
                   abs(_bivariate_eval(P2, z, w)) / max(_bivariate_scale(P2, z, w), 1e-300))

    r = resid(z, w)
    for _ in range(steps):
        F = np.array([_bivariate_eval(P1, z, w), _bivariate_eval(P2, z, w)])
        J = np.array([[_bivariate_eval(d1z, z, w), _bivariate_eval(d1w, z, w)],
                      [_bivariate_eval(d2z, z, w), _bivariate_eval(d2w, z, w)]])
        try:
            dz, dw = np.linalg.solve(J, F)
        except np.linalg.LinAlgError:
            break
        zn, wn = z - dz, w - dw
        rn = resid(zn, wn)
        if not rn < r:
            break
        z, w, r = complex(zn), complex(wn), rn
        if r < 1e-16:
            break
    J = np.array([[_bivariate_eval(d1z, z, w), _bivariate_eval(d1w, z, w)],
                  [_bivariate_eval(d2z, z, w), _bivariate_eval(d2w, z, w)]])
    jscale = (np.abs(J).max() ** 2) or 1.0
    return z, w, r, abs(np.linalg.det(J)) / jscale


def _near_pole(f: Blaschke2D, z: complex, w: complex, guard: float) -> bool:
    for b, x in ((f.A, z), (f.C, z), (f.B, w), (f.D, w)):
        for e in b.zeros:
            ec = complex(e)
            if ec and abs(1 - ec.conjugate() * x) < guard * max(1.0, abs(x)):
                return True
    return False


def _solve_one_order(f: Blaschke2D, target, eliminate: str, tol: Tolerances) -> SolutionSet:
    P1, P2 = preimage_system(f, target)
    res = resultant_eliminate(P1, P2, eliminate, tol)
    # work in (u, v) with v the eliminated variable
    Q1, Q2 = (P1, P2) if eliminate == "w" else (P1.T, P2.T)
    roots = univariate_roots(res, tol) if res.degree >= 1 else []
    candidates = []
    for u in roots:
        pencils = [ComplexPoly(npoly.polyval(u, Q), tol.trim) for Q in (Q1, Q2)]
        live = [p for p in pencils if not p.is_zero()]
        if not live:
            raise DegenerateSystem(f"both pencils vanish identically at {u}")
        vs = []
        for p in live:
            if p.degree >= 1:
                vs.extend(np.roots(p.coeffs[::-1]).tolist())
        for v in vs:
            r = max(abs(_bivariate_eval(Q, u, v)) / max(_bivariate_scale(Q, u, v), 1e-300) for Q in (Q1, Q2))
            if r < tol.candidate:
                candidates.append((complex(u), complex(v)))
    kept, discarded = [], 0
    for u, v in candidates:
        u, v, r, jdet = _newton2(Q1, Q2, u, v, tol.newton_steps)
        z, w = (u, v) if eliminate == "w" else (v, u)
        if r > tol.residual or _near_pole(f, z, w, tol.pole_guard):
            discarded += 1
            continue
        with np.errstate(all="ignore"):
            fz, fw = f(z, w)
        img = max(abs(complex(fz) - target[0]), abs(complex(fw) - target[1]))
        if not img <= tol.residual * max(1.0, abs(target[0]), abs(target[1])):
            discarded += 1
            continue
        if any(max(abs(z - a), abs(w - b)) <= tol.dedup * max(1.0, abs(a), abs(b)) for a, b, *_ in kept):
            continue
        kept.append((z, w, r, img, jdet < tol.singular))
    kept.sort(key=lambda s: (round(s[0].real, 10), round(s[1].real, 10), round(s[0].imag, 10), round(s[1].imag, 10)))
    return SolutionSet(
        points=tuple((s[0], s[1]) for s in kept),
        residuals=tuple(s[2] for s in kept),
        image_residuals=tuple(s[3] for s in kept),
        multiplicity_flags=tuple(s[4] for s in kept),
        target=(complex(target[0]), complex(target[1])),
        eliminate=eliminate,
        discarded=discarded,
        tolerances=tol,
    )


def solve_system(f: Blaschke2D, target, eliminate: str = "w", cross_check: bool = True,
                 tol: Tolerances = DEFAULT_TOL) -> SolutionSet:
    """All affine solutions of ``f(z, w) = target``.

    With ``cross_check`` the other variable is eliminated as well and the two
    solution counts must agree.

    Raises
    ------
    DegenerateSystem
        The cleared equations share a factor.
    NonConvergence
        A resultant root could not be refined.
    SolverDeficiency
        The two elimination orders disagree on the number of solutions.
    """
    target = (complex(target[0]), complex(target[1]))
    sol = _solve_one_order(f, target, eliminate, tol)
    if cross_check:
        other = _solve_one_order(f, target, "z" if eliminate == "w" else "w", tol)
        if len(other) != len(sol):
            raise SolverDeficiency(
                f"eliminating z and w gave {len(sol) if eliminate == 'z' else len(other)} "
                f"and {len(other) if eliminate == 'z' else len(sol)} solutions at target {target}")
    return sol
