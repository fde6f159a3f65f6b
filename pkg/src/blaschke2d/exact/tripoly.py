"""Sparse homogeneous polynomials in ``Z, W, T`` over the Gaussian rationals.

A :class:`TriPoly` is stored as a pair of integer polynomials (real and
imaginary numerators) sharing one positive denominator.  The integer parts
live in FLINT ``fmpz_mpoly`` objects, which keeps the degree 40-70 products
met when iterating maps cheap; the public view is a plain ``{(i, j, k):
GaussianRational}`` mapping.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, gcd, lcm
from typing import Iterable, Mapping

import flint
import numpy as np

from ..errors import ResourceBudget
from .gaussian import GaussianRational, as_gaussian

CTX = flint.fmpz_mpoly_ctx.get(("Z", "W", "T"), "lex")
_FZERO = CTX.from_dict({})

Exponent = tuple[int, int, int]


def _icontent(p) -> int:
    return 0 if p.is_zero() else int(p.content())


class TriPoly:
    """Immutable homogeneous polynomial ``sum c_{ijk} Z^i W^j T^k``.

    Parameters
    ----------
    terms : mapping from exponent triples to coefficients
        Zero coefficients are dropped.  All exponents must share one total degree.
    degree : int, optional
        Required only for the zero polynomial (defaults to 0 there).
    """

    __slots__ = ("_re", "_im", "_den", "_degree", "_terms", "_numeric")

    def __init__(self, terms: Mapping[Exponent, object] | None = None, degree: int | None = None):
        terms = {tuple(e): as_gaussian(c) for e, c in (terms or {}).items()}
        terms = {e: c for e, c in terms.items() if c}
        degrees = {sum(e) for e in terms}
        if any(min(e) < 0 or len(e) != 3 for e in terms):
            raise ValueError("exponents must be nonnegative triples")
        if len(degrees) > 1:
            raise ValueError(f"polynomial is not homogeneous (degrees {sorted(degrees)})")
        if degrees:
            d = degrees.pop()
            if degree is not None and degree != d:
                raise ValueError(f"declared degree {degree} but terms have degree {d}")
            degree = d
        elif degree is None:
            degree = 0
        den = 1
        for c in terms.values():
            den = lcm(den, c.re.denominator, c.im.denominator)
        re = CTX.from_dict({e: int(c.re * den) for e, c in terms.items() if c.re})
        im = CTX.from_dict({e: int(c.im * den) for e, c in terms.items() if c.im})
        self._set(re, im, den, degree)

    def _set(self, re, im, den, degree):
        g = gcd(_icontent(re), _icontent(im), den)
        if re.is_zero() and im.is_zero():
            den, g = 1, 1
        if g > 1:
            re, im, den = re / g, im / g, den // g
        object.__setattr__(self, "_re", re)
        object.__setattr__(self, "_im", im)
        object.__setattr__(self, "_den", den)
        object.__setattr__(self, "_degree", degree)
        object.__setattr__(self, "_terms", None)
        object.__setattr__(self, "_numeric", None)

    def __setattr__(self, name, value):
        raise AttributeError("TriPoly is immutable")

    @classmethod
    def _packed(cls, re, im, den: int, degree: int) -> "TriPoly":
        obj = cls.__new__(cls)
        if den < 0:
            re, im, den = -re, -im, -den
        obj._set(re, im, den, degree)
        return obj

    # -- constructors ----------------------------------------------------------

    @classmethod
    def zero(cls, degree: int = 0) -> "TriPoly":
        return cls({}, degree)

    @classmethod
    def constant(cls, c) -> "TriPoly":
        return cls({(0, 0, 0): c})

    @classmethod
    def monomial(cls, exponent: Exponent, coeff=1) -> "TriPoly":
        return cls({tuple(exponent): coeff})

    @classmethod
    def linear(cls, cz=0, cw=0, ct=0) -> "TriPoly":
        """The linear form ``cz*Z + cw*W + ct*T``."""
        return cls({(1, 0, 0): cz, (0, 1, 0): cw, (0, 0, 1): ct}, 1)

    @classmethod
    def from_bivariate(cls, terms: Mapping[tuple[int, int], object], degree: int | None = None) -> "TriPoly":
        """Homogenize ``sum c_ij z^i w^j`` with ``T`` up to ``degree`` (default: total degree)."""
        terms = {e: c for e, c in terms.items() if c}
        if degree is None:
            degree = max((i + j for i, j in terms), default=0)
        if any(i + j > degree for i, j in terms):
            raise ValueError("degree below the total degree of the bivariate polynomial")
        return cls({(i, j, degree - i - j): c for (i, j), c in terms.items()}, degree)

    # -- views -------------------------------------------------------------------

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def terms(self) -> dict[Exponent, GaussianRational]:
        if self._terms is None:
            out: dict[Exponent, GaussianRational] = {}
            re = {tuple(int(x) for x in e): int(c) for e, c in self._re.to_dict().items()}
            im = {tuple(int(x) for x in e): int(c) for e, c in self._im.to_dict().items()}
            for e in sorted(set(re) | set(im), reverse=True):
                out[e] = GaussianRational(Fraction(re.get(e, 0), self._den), Fraction(im.get(e, 0), self._den))
            object.__setattr__(self, "_terms", out)
        return dict(self._terms)

    def coefficient(self, exponent: Exponent) -> GaussianRational:
        if self._terms is None:
            self.terms
        return self._terms.get(tuple(exponent), GaussianRational(0))

    def is_zero(self) -> bool:
        return self._re.is_zero() and self._im.is_zero()

    def __len__(self) -> int:
        if self._im.is_zero():
            return len(self._re)
        if self._re.is_zero():
            return len(self._im)
        return len(set(self._re.monoms()) | set(self._im.monoms()))

    def is_constant(self) -> bool:
        return self._degree == 0 and not self.is_zero()

    def leading_exponent(self) -> Exponent:
        """Lexicographically largest exponent triple (ordering ``Z > W > T``)."""
        if self.is_zero():
            raise ValueError("zero polynomial has no leading term")
        cands = []
        if not self._re.is_zero():
            cands.append(tuple(int(x) for x in self._re.monoms()[0]))
        if not self._im.is_zero():
            cands.append(tuple(int(x) for x in self._im.monoms()[0]))
        return max(cands)

    def leading_coefficient(self) -> GaussianRational:
        return self.coefficient(self.leading_exponent())

    def monic(self) -> "TriPoly":
        """Scale so the lexicographically-leading coefficient is 1."""
        if self.is_zero():
            return self
        return self * self.leading_coefficient().inverse()

    def t_valuation(self) -> int:
        """Largest ``k`` with ``T^k`` dividing the polynomial."""
        if self.is_zero():
            return 0
        return min(e[2] for e in self.terms)

    def variables_used(self) -> set[str]:
        names = "ZWT"
        return {names[v] for e in self.terms for v in range(3) if e[v]}

    # -- arithmetic ----------------------------------------------------------------

    def _scalar(self, c) -> "TriPoly":
        c = as_gaussian(c)
        if not c:
            return TriPoly.zero(self._degree)
        den = lcm(c.re.denominator, c.im.denominator)
        cr, ci = int(c.re * den), int(c.im * den)
        re = self._re * cr - self._im * ci
        im = self._re * ci + self._im * cr
        return TriPoly._packed(re, im, self._den * den, self._degree)

    def _check_same_degree(self, other: "TriPoly"):
        if self._degree != other._degree and not (self.is_zero() or other.is_zero()):
            raise ValueError(f"cannot add homogeneous polynomials of degrees {self._degree} and {other._degree}")

    def __add__(self, other):
        if not isinstance(other, TriPoly):
            if self._degree == 0 or self.is_zero():
                other = TriPoly.constant(other) if as_gaussian(other) else TriPoly.zero()
            else:
                return NotImplemented
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        self._check_same_degree(other)
        d = lcm(self._den, other._den)
        sa, sb = d // self._den, d // other._den
        return TriPoly._packed(self._re * sa + other._re * sb, self._im * sa + other._im * sb, d, self._degree)

    __radd__ = __add__

    def __neg__(self):
        return TriPoly._packed(-self._re, -self._im, self._den, self._degree)

    def __sub__(self, other):
        if isinstance(other, TriPoly):
            return self + (-other)
        return self + (-as_gaussian(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TriPoly):
            return poly_mul(self, other)
        try:
            return self._scalar(other)
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TriPoly):
            return poly_divexact(self, other)
        return self._scalar(as_gaussian(other).inverse())

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result, base = TriPoly.constant(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, TriPoly):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return (self._degree == other._degree and self._den == other._den
                and self._re == other._re and self._im == other._im)

    def __hash__(self):
        return hash((self._degree, self._den, str(self._re), str(self._im)))

    # -- evaluation ------------------------------------------------------------------

    def evaluate(self, point: Iterable) -> GaussianRational:
        return poly_eval(self, point)

    def numeric_terms(self) -> tuple[np.ndarray, np.ndarray]:
        """Exponents (``k x 3`` int array) and complex128 coefficients."""
        if self._numeric is None:
            t = self.terms
            exps = np.array(list(t.keys()), dtype=np.int64).reshape(-1, 3)
            coeffs = np.array([complex(c) for c in t.values()], dtype=np.complex128)
            object.__setattr__(self, "_numeric", (exps, coeffs))
        return self._numeric

    def evaluate_complex(self, z, w, t=1.0):
        """Floating evaluation, vectorized over numpy arrays ``z, w, t``."""
        exps, coeffs = self.numeric_terms()
        z, w, t = np.broadcast_arrays(*(np.asarray(v, dtype=np.complex128) for v in (z, w, t)))
        out = np.zeros(z.shape, dtype=np.complex128)
        for (i, j, k), c in zip(exps, coeffs):
            out = out + c * z ** i * w ** j * t ** k
        return out

    def abs_evaluate(self, z, w, t=1.0):
        """``sum |c| |z|^i |w|^j |t|^k``: the natural scale for a relative residual."""
        exps, coeffs = self.numeric_terms()
        z, w, t = np.broadcast_arrays(*(np.abs(np.asarray(v, dtype=np.complex128)) for v in (z, w, t)))
        out = np.zeros(z.shape, dtype=np.float64)
        for (i, j, k), c in zip(exps, coeffs):
            out = out + abs(c) * z ** i * w ** j * t ** k
        return out

    def dehomogenize(self) -> dict[tuple[int, int], GaussianRational]:
        """Set ``T = 1``: returns ``{(i, j): c}``."""
        return {(i, j): c for (i, j, _), c in self.terms.items()}

    def divide_by_t_power(self, k: int) -> "TriPoly":
        if k == 0:
            return self
        return TriPoly({(i, j, l - k): c for (i, j, l), c in self.terms.items()}, self._degree - k)

    # -- display -------------------------------------------------------------------------

    def __repr__(self):
        return f"TriPoly({self})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for (i, j, k), c in self.terms.items():
            mono = "*".join(
                f"{n}^{p}" if p > 1 else n for n, p in (("Z", i), ("W", j), ("T", k)) if p
            )
            cs = str(c)
            if " " in cs or ("+" in cs[1:] or "-" in cs[1:]):
                cs = f"({cs})"
            if not mono:
                parts.append(cs)
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _budget_bound(a: TriPoly, b: TriPoly) -> int:
    d = a.degree + b.degree
    return min(len(a) * len(b), comb(d + 2, 2))


def poly_mul(a: TriPoly, b: TriPoly, max_terms: int | None = None) -> TriPoly:
    """Exact product.  ``max_terms`` aborts with :class:`ResourceBudget` before expanding."""
    if a.is_zero() or b.is_zero():
        return TriPoly.zero(a.degree + b.degree)
    if max_terms is not None and _budget_bound(a, b) > max_terms:
        raise ResourceBudget(f"product may have {_budget_bound(a, b)} terms, budget is {max_terms}")
    ar, ai, br, bi = a._re, a._im, b._re, b._im
    if ai.is_zero() and bi.is_zero():
        re, im = ar * br, _FZERO
    elif ai.is_zero():
        re, im = ar * br, ar * bi
    elif bi.is_zero():
        re, im = ar * br, ai * br
    else:
        # 3-multiplication complex product
        k1 = br * (ar + ai)
        k2 = ar * (bi - br)
        k3 = ai * (br + bi)
        re, im = k1 - k3, k1 + k2
    return TriPoly._packed(re, im, a._den * b._den, a.degree + b.degree)


def poly_eval(p: TriPoly, point: Iterable) -> GaussianRational:
    """Exact value of ``p`` at a triple of Gaussian rationals."""
    z, w, t = (as_gaussian(x) for x in point)
    cache: dict[tuple[int, int], GaussianRational] = {}

    def pw(idx, base, k):
        key = (idx, k)
        if key not in cache:
            cache[key] = base ** k
        return cache[key]

    total = GaussianRational(0)
    for (i, j, k), c in p.terms.items():
        total = total + c * pw(0, z, i) * pw(1, w, j) * pw(2, t, k)
    return total


def _divexact_packed(a: TriPoly, g: TriPoly):
    """Return the packed quotient ``a/g`` or ``None`` when ``g`` does not divide ``a``."""
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if a.is_zero():
        return TriPoly.zero(max(a.degree - g.degree, 0))
    if g.degree > a.degree:
        return None
    gr, gi = g._re, g._im
    if gi.is_zero():
        p, q, norm = a._re, a._im, gr
    elif gr.is_zero():
        # a / (i*gi) = -i * a / gi
        p, q, norm = a._im, -a._re, gi
    else:
        p = a._re * gr + a._im * gi
        q = a._im * gr - a._re * gi
        norm = gr * gr + gi * gi
    c = int(norm.content())
    if norm.leading_coefficient() < 0:
        c = -c
    norm_p = norm / c
    qp, rp = divmod(p, norm_p)
    if not rp.is_zero():
        return None
    qq, rq = divmod(q, norm_p)
    if not rq.is_zero():
        return None
    # a/g = (num_a/den_a) / (num_g/den_g); num_a*conj(num_g) = norm_p*c*(qp + i qq)
    num_scale = g._den
    den_scale = a._den * c
    return TriPoly._packed(qp * num_scale, qq * num_scale, den_scale, a.degree - g.degree)


def poly_divexact(a: TriPoly, g: TriPoly) -> TriPoly:
    """Exact quotient ``a / g``; raises :class:`ArithmeticError` if ``g`` does not divide ``a``."""
    q = _divexact_packed(a, g)
    if q is None:
        raise ArithmeticError("polynomial division is not exact")
    return q


def divides(g: TriPoly, a: TriPoly) -> bool:
    return _divexact_packed(a, g) is not None


def poly_sum(polys: Iterable[TriPoly], degree: int) -> TriPoly:
    """Sum with a single common-denominator pass (cheaper than repeated ``+``)."""
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return TriPoly.zero(degree)
    d = 1
    for p in polys:
        d = lcm(d, p._den)
    re, im = _FZERO, _FZERO
    for p in polys:
        if p.degree != degree:
            raise ValueError("inhomogeneous sum")
        s = d // p._den
        re = re + p._re * s
        im = im + p._im * s
    return TriPoly._packed(re, im, d, degree)


Z = TriPoly.linear(1, 0, 0)
W = TriPoly.linear(0, 1, 0)
T = TriPoly.linear(0, 0, 1)
