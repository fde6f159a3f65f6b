"""Dynamics on and near the invariant torus ``|z| = |w| = 1``."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import LiftDiscontinuity, RefinementBudget, SolverDeficiency
from .maps import Blaschke2D, build_map
from .numeric import DEFAULT_TOL, Tolerances, solve_system

TWO_PI = 2 * np.pi


@dataclass(frozen=True)
class TorusPoint:
    """The point ``(e^{2 pi i x}, e^{2 pi i y})``; coordinates are reduced mod 1."""

    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x) % 1.0)
        object.__setattr__(self, "y", float(self.y) % 1.0)

    @classmethod
    def from_complex(cls, z, w) -> "TorusPoint":
        return cls(np.angle(z) / TWO_PI, np.angle(w) / TWO_PI)

    def to_complex(self) -> tuple[complex, complex]:
        return complex(np.exp(TWO_PI * 1j * self.x)), complex(np.exp(TWO_PI * 1j * self.y))


def _step_angles(f: Blaschke2D, x: np.ndarray, y: np.ndarray):
    """Vectorized torus step on angle arrays; returns new angles and the modulus drift."""
    z = np.exp(TWO_PI * 1j * x)
    w = np.exp(TWO_PI * 1j * y)
    a, b = f(z, w)
    drift = np.maximum(np.abs(np.abs(a) - 1), np.abs(np.abs(b) - 1))
    return (np.angle(a) / TWO_PI) % 1.0, (np.angle(b) / TWO_PI) % 1.0, drift


def torus_step(f: Blaschke2D, pt: TorusPoint) -> TorusPoint:
    """Image of a torus point; the modulus is renormalized to exactly 1."""
    x, y, _ = _step_angles(f, np.array([pt.x]), np.array([pt.y]))
    return TorusPoint(x[0], y[0])


@dataclass(frozen=True)
class TorusOrbit:
    points: np.ndarray  # shape (steps + 1, 2) of angles
    max_drift: float


def torus_orbit(f: Blaschke2D, pt: TorusPoint, steps: int) -> TorusOrbit:
    """Orbit of ``pt``; ``max_drift`` is the largest ``||f| - 1|`` seen before renormalizing."""
    out = np.empty((steps + 1, 2))
    x, y = np.array([pt.x]), np.array([pt.y])
    out[0] = x[0], y[0]
    drift = 0.0
    for k in range(steps):
        x, y, d = _step_angles(f, x, y)
        drift = max(drift, float(d[0]))
        out[k + 1] = x[0], y[0]
    return TorusOrbit(out, drift)


def _iterate_angles(f: Blaschke2D, x: np.ndarray, y: np.ndarray, n: int):
    for _ in range(n):
        x, y, _ = _step_angles(f, x, y)
    return x, y


def _wrap(d: np.ndarray) -> np.ndarray:
    return d - np.round(d)


# ---------------------------------------------------------------------------
# homology


def _loop(t: np.ndarray, which: int):
    zero = np.zeros_like(t)
    return (t, zero) if which == 0 else (zero, t)


def angle_lipschitz(f: Blaschke2D) -> float:
    """Bound on how far one step moves angles (turns per turn, max-norm).

    On the circle the argument of ``(x - e)/(1 - conj(e) x)`` advances at rate
    ``(1 - |e|^2)/|x - e|^2 <= (1 + |e|)/(1 - |e|)``.
    """
    def rate(b):
        return sum((1 + abs(complex(e))) / (1 - abs(complex(e))) for e in b.zeros)
    return max(rate(f.A) + rate(f.B), rate(f.C) + rate(f.D))


def _winding(f: Blaschke2D, which: int, n: int, initial: int, max_points: int) -> tuple[int, int]:
    spacing = 0.25 / angle_lipschitz(f)
    t = np.linspace(0.0, 1.0, max(initial, int(np.ceil(1 / spacing))) + 1)
    x, y = _loop(t, which)
    for level in range(n):
        # refine the level-k curve so that one more step cannot jump a quarter turn
        while True:
            gap = np.maximum(np.abs(_wrap(np.diff(x))), np.abs(_wrap(np.diff(y))))
            bad = np.flatnonzero(gap > spacing)
            if bad.size == 0:
                break
            if t.size + bad.size > max_points:
                raise LiftDiscontinuity(
                    f"lifting f^{n} of a loop needs more than {max_points} samples")
            mids = 0.5 * (t[bad] + t[bad + 1])
            mx, my = _iterate_angles(f, *_loop(mids, which), level)
            t = np.insert(t, bad + 1, mids)
            x = np.insert(x, bad + 1, mx)
            y = np.insert(y, bad + 1, my)
        x, y, _ = _step_angles(f, x, y)
    dx, dy = _wrap(np.diff(x)), _wrap(np.diff(y))
    if max(np.abs(dx).max(), np.abs(dy).max()) > 0.25:
        raise LiftDiscontinuity("argument jump above pi/2 after refinement")
    return int(round(float(np.sum(dx)))), int(round(float(np.sum(dy))))


def homology_action(f: Blaschke2D, n: int = 1, initial: int = 64,
                    max_points: int = 1 << 22) -> tuple[tuple[int, int], tuple[int, int]]:
    """Action of ``f^n`` on the first homology of the torus.

    Column ``j`` holds the winding numbers (of ``z`` and of ``w``) of the
    image of the generator loop ``gamma_j`` (``gamma_1``: ``w = 1``,
    ``gamma_2``: ``z = 1``).  The loop is pushed forward one step at a time;
    before each step it is refined until neighbouring samples are closer than
    a quarter turn divided by :func:`angle_lipschitz`, so every jump of the
    final sampling is below ``pi/2`` and the argument lift is unambiguous.

    Raises
    ------
    LiftDiscontinuity
        The refinement would exceed ``max_points`` samples.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    c1 = _winding(f, 0, n, initial, max_points)
    c2 = _winding(f, 1, n, initial, max_points)
    return ((c1[0], c2[0]), (c1[1], c2[1]))


def matrix_power(N, n: int) -> tuple[tuple[int, int], tuple[int, int]]:
    (a, b), (c, d) = N
    r = ((1, 0), (0, 1))
    for _ in range(n):
        r = ((r[0][0] * a + r[0][1] * c, r[0][0] * b + r[0][1] * d),
             (r[1][0] * a + r[1][1] * c, r[1][0] * b + r[1][1] * d))
    return r


# ---------------------------------------------------------------------------
# entropy by curve growth


@dataclass(frozen=True)
class EntropyEstimate:
    """``value`` is the fitted slope of ``log length`` against ``n``."""

    value: float
    log_lengths: tuple[float, ...]
    points: tuple[int, ...]
    fit_range: tuple[int, int]

    def __float__(self):
        return self.value


def curve_growth_entropy(f: Blaschke2D, n_max: int = 12, samples: int = 64,
                         arc: tuple[float, float] = (0.0, 1e-3), separation: float = 0.01,
                         max_points: int = 2_000_000) -> EntropyEstimate:
    """Growth rate of the length of ``f^n`` applied to a piece of the ``w = 1`` circle.

    ``arc`` is the parameter interval of the piece (``(0, 1)`` is the whole
    circle).  After each iterate, midpoints are inserted wherever adjacent
    image points are more than ``separation`` apart (in angle units), so the
    polygonal length tracks the true curve length.  The slope is fitted over
    the last third of the iterates.

    Raises
    ------
    RefinementBudget
        More than ``max_points`` samples would be needed.
    """
    if n_max < 3:
        raise ValueError("n_max must be >= 3")
    t = np.linspace(arc[0], arc[1], samples + 1)
    x, y = _loop(t, 0)
    logs, counts = [], []
    for n in range(1, n_max + 1):
        x, y, _ = _step_angles(f, x, y)
        while True:
            dx, dy = _wrap(np.diff(x)), _wrap(np.diff(y))
            seg = np.hypot(dx, dy)
            bad = np.flatnonzero(seg > separation)
            if bad.size == 0:
                break
            if t.size + bad.size > max_points:
                raise RefinementBudget(
                    f"curve refinement needs more than {max_points} points at iterate {n}")
            mids = 0.5 * (t[bad] + t[bad + 1])
            mx, my = _iterate_angles(f, *_loop(mids, 0), n)
            t = np.insert(t, bad + 1, mids)
            x = np.insert(x, bad + 1, mx)
            y = np.insert(y, bad + 1, my)
        logs.append(float(np.log(np.sum(seg))))
        counts.append(int(t.size))
    lo = n_max - max(n_max // 3, 2)
    ns = np.arange(lo + 1, n_max + 1)
    slope = float(np.polyfit(ns, logs[lo:], 1)[0])
    return EntropyEstimate(slope, tuple(logs), tuple(counts), (int(ns[0]), int(ns[-1])))


# ---------------------------------------------------------------------------
# attracting points


def exterior_map(f: Blaschke2D) -> Blaschke2D:
    """``f`` in the chart ``(1/z, 1/w)``: zeros and rotations conjugated."""
    conj = [[z.conj() for z in getattr(f, k).zeros] for k in "ABCD"]
    return build_map(*conj, f.A.rotation.seed.conj(), f.C.rotation.seed.conj())


@dataclass(frozen=True)
class FixedPointSearch:
    point: tuple[complex, complex]
    residual: float
    iterations: int
    converged: bool


@dataclass(frozen=True)
class AttractingPair:
    """``interior`` is ``e`` in the bidisc; ``exterior`` is ``e'`` written in the
    chart ``(1/z, 1/w)`` (so ``(0, 0)`` there is the point at infinity)."""

    interior: FixedPointSearch
    exterior: FixedPointSearch

    @property
    def converged(self) -> bool:
        return self.interior.converged and self.exterior.converged


def _fixed_point(g: Blaschke2D, tol: float, max_iter: int) -> FixedPointSearch:
    p = (0j, 0j)
    res = np.inf
    for k in range(1, max_iter + 1):
        a, b = g(p[0], p[1])
        q = (complex(a), complex(b))
        res = max(abs(q[0] - p[0]), abs(q[1] - p[1]))
        p = q
        if res < tol:
            a, b = g(p[0], p[1])
            res = max(abs(complex(a) - p[0]), abs(complex(b) - p[1]))
            return FixedPointSearch(p, res, k, res < tol)
    return FixedPointSearch(p, float(res), max_iter, False)


def attracting_pair(f: Blaschke2D, tol: float = 1e-12, max_iter: int = 10_000) -> AttractingPair:
    """Fixed points reached from ``(0, 0)`` inside the bidisc and from infinity outside it.

    A neutral or semi-attracting point may not reach ``tol``; the last iterate
    is returned with ``converged=False`` instead of raising.
    """
    return AttractingPair(_fixed_point(f, tol, max_iter), _fixed_point(exterior_map(f), tol, max_iter))


# ---------------------------------------------------------------------------
# backward orbits


@dataclass(frozen=True)
class PointCloud:
    points: np.ndarray  # shape (k, 2) complex
    depth: int

    @property
    def weights(self) -> np.ndarray:
        k = len(self.points)
        return np.full(k, 1.0 / k) if k else np.zeros(0)


DIST_EDGES = (0.0, 1e-12, 1e-8, 1e-4, 1e-2, 0.05, 0.1, 0.2, 0.5, 1.0, np.inf)


@dataclass(frozen=True)
class BackwardSample:
    cloud: PointCloud
    dist: np.ndarray
    histogram: tuple[int, ...]
    deficient_nodes: int
    stopped_orbits: int
    samples: int
    seed: int
    edges: tuple[float, ...] = field(default=DIST_EDGES)

    def fraction_beyond(self, r: float) -> float:
        return float(np.mean(self.dist > r)) if self.dist.size else 0.0

    def summary(self) -> dict:
        return {
            "depth": self.cloud.depth,
            "samples": self.samples,
            "seed": self.seed,
            "endpoints": int(len(self.cloud.points)),
            "deficiency": self.deficient_nodes,
            "stopped_orbits": self.stopped_orbits,
            "histogram": [
                {"lo": _num(lo), "hi": _num(hi), "count": c}
                for lo, hi, c in zip(self.edges[:-1], self.edges[1:], self.histogram)
            ],
            "max_dist": _num(float(self.dist.max())) if self.dist.size else None,
            "fraction_dist_above_0.05": _num(self.fraction_beyond(0.05)),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["re_z", "im_z", "re_w", "im_w", "dist"])
        for (z, wv), d in zip(self.cloud.points, self.dist):
            w.writerow([_num(z.real), _num(z.imag), _num(wv.real), _num(wv.imag), _num(d)])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(self.summary(), indent=2, sort_keys=True)


def _num(x: float):
    """Float rounded to 15 significant digits (``"inf"`` for infinity)."""
    x = float(x)
    if not np.isfinite(x):
        return "inf" if x > 0 else "-inf" if x < 0 else "nan"
    return float(f"{x:.15g}") + 0.0


def torus_distance(points) -> np.ndarray:
    """``max(||z| - 1|, ||w| - 1|)`` per point."""
    p = np.asarray(points, dtype=np.complex128).reshape(-1, 2)
    return np.max(np.abs(np.abs(p) - 1.0), axis=1)


def backward_measure_sample(f: Blaschke2D, x, depth: int, samples: int, seed: int = 0,
                            d_top: int | None = None, tol: Tolerances = DEFAULT_TOL) -> BackwardSample:
    """Endpoints of ``samples`` random backward orbits of length ``depth``.

    At every node all preimages are computed and one is chosen uniformly.
    Sample ``s`` draws from its own stream spawned from ``seed``, so the
    output depends only on ``(seed, samples)``.  A node with fewer than
    ``d_top`` preimages counts as deficient; an orbit with none stops.
    """
    if isinstance(x, TorusPoint):
        x = x.to_complex()
    start = (complex(x[0]), complex(x[1]))
    streams = np.random.SeedSequence(seed).spawn(samples)
    ends, deficient, stopped = [], 0, 0
    cache: dict[tuple[complex, complex], tuple] = {}
    for s in range(samples):
        rng = np.random.default_rng(streams[s])
        p = start
        for _ in range(depth):
            if p not in cache:
                cache[p] = solve_system(f, p, cross_check=False, tol=tol).points
            pre = cache[p]
            if d_top is not None and len(pre) < d_top:
                deficient += 1
            if not pre:
                p = None
                break
            p = pre[int(rng.integers(len(pre)))]
        if p is None:
            stopped += 1
            continue
        ends.append(p)
    pts = np.array(ends, dtype=np.complex128).reshape(-1, 2)
    dist = torus_distance(pts)
    hist, _ = np.histogram(dist, bins=np.array(DIST_EDGES))
    return BackwardSample(PointCloud(pts, depth), dist, tuple(int(c) for c in hist),
                          deficient, stopped, samples, seed)


def check_solver_count(count: int, d_top: int):
    if count != d_top:
        raise SolverDeficiency(f"{count} preimages found, expected {d_top}")
