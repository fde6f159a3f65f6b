"""Greatest common divisors of homogeneous trivariate polynomials over Q(i).

Two routes compute the same normalized gcd:

``prs``
    Strip the common power of ``T``, dehomogenize at ``T = 1`` and run a
    primitive pseudo-remainder sequence in ``W`` over ``Q(i)[Z]``.  Exact
    and dependency-free but the coefficient swell makes it impractical past
    degree ~10.
``modular``
    Gcds of images modulo word-size primes ``p = 1 (mod 4)`` under both
    embeddings ``i -> +/-sqrt(-1)``, Chinese remaindering, rational
    reconstruction, then exact trial division.  Used for iterate
    compositions (degree 25-70).

Results are normalized so that the coefficient of the lexicographically
largest monomial (``Z > W > T``) equals 1.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Iterator, Sequence

import flint

from ..errors import ResourceBudget
from .gaussian import GaussianRational
from .tripoly import T, TriPoly, divides
from .upoly import UPoly, upoly_gcd

PRS_MAX_DEGREE = 8
MAX_PRIMES = 400


def poly_gcd(a: TriPoly, b: TriPoly, *, method: str = "auto") -> TriPoly:
    """Normalized gcd of two homogeneous polynomials (not both zero)."""
    return poly_gcd_many([a, b], method=method)


def poly_gcd_many(polys: Sequence[TriPoly], *, method: str = "auto") -> TriPoly:
    nonzero = [p for p in polys if not p.is_zero()]
    if not nonzero:
        raise ValueError("gcd of zero polynomials is undefined")
    if len(nonzero) == 1:
        return nonzero[0].monic()
    if any(p.is_constant() for p in nonzero):
        return TriPoly.constant(1)
    if method == "auto":
        method = "prs" if max(p.degree for p in nonzero) <= PRS_MAX_DEGREE else "modular"
    if method == "prs":
        g = nonzero[0]
        for p in nonzero[1:]:
            g = _gcd_prs(g, p)
            if g.is_constant():
                break
        return g
    if method == "modular":
        return _gcd_modular(nonzero)
    raise ValueError(f"unknown gcd method {method!r}")


# ---------------------------------------------------------------------------
# primitive PRS route

Biv = list  # list[UPoly], index = power of W, coefficients are polynomials in Z


def _to_biv(p: TriPoly) -> Biv:
    by_w: dict[int, dict[int, GaussianRational]] = {}
    for (i, j), c in p.dehomogenize().items():
        by_w.setdefault(j, {})[i] = c
    dw = max(by_w)
    out = []
    for j in range(dw + 1):
        row = by_w.get(j, {})
        out.append(UPoly([row.get(i, 0) for i in range(max(row, default=-1) + 1)]))
    return _trim(out)


def _from_biv(b: Biv) -> TriPoly:
    terms = {}
    for j, u in enumerate(b):
        for i, c in enumerate(u.coeffs):
            if c:
                terms[(i, j)] = c
    return TriPoly.from_bivariate(terms)


def _trim(b: Biv) -> Biv:
    b = list(b)
    while b and b[-1].is_zero():
        b.pop()
    return b


def _content(b: Biv) -> UPoly:
    g = UPoly()
    for u in b:
        g = upoly_gcd(g, u)
        if g.degree == 0:
            break
    return g


def _pp(b: Biv) -> Biv:
    c = _content(b)
    if c.degree == 0:
        inv = c.lead().inverse()
        return [u.scale(inv) for u in b]
    return [u.exact_div(c) for u in b]


def _prem(a: Biv, b: Biv) -> Biv:
    r = list(a)
    db = len(b) - 1
    lc = b[-1]
    while r and len(r) - 1 >= db:
        s = r[-1]
        shift = len(r) - 1 - db
        r = [x * lc for x in r]
        for j, u in enumerate(b):
            r[j + shift] = r[j + shift] - s * u
        r = _trim(r)
    return r


def _biv_gcd(a: Biv, b: Biv) -> Biv:
    if not a:
        return _pp(b) if b else []
    if not b:
        return _pp(a)
    c = upoly_gcd(_content(a), _content(b))
    a, b = _pp(a), _pp(b)
    if len(a) < len(b):
        a, b = b, a
    while True:
        if len(b) == 1:
            g = [UPoly([1])]
            break
        r = _prem(a, b)
        if not r:
            g = b
            break
        a, b = b, _pp(r)
    return [u * c for u in g]


def _gcd_prs(a: TriPoly, b: TriPoly) -> TriPoly:
    k = min(a.t_valuation(), b.t_valuation())
    a0 = a.divide_by_t_power(a.t_valuation())
    b0 = b.divide_by_t_power(b.t_valuation())
    g = _from_biv(_biv_gcd(_to_biv(a0), _to_biv(b0)))
    return (g * T ** k).monic()


# ---------------------------------------------------------------------------
# modular route

_NMOD_CTX: dict[int, object] = {}
_PRIME_CACHE: list[tuple[int, int]] = []


def _primes() -> Iterator[tuple[int, int]]:
    """Primes ``p = 1 (mod 4)`` below 2^62 with a square root of -1, descending."""
    yield from _PRIME_CACHE
    n = _PRIME_CACHE[-1][0] - 4 if _PRIME_CACHE else (1 << 62) - 3  # 2^62 - 3 = 1 (mod 4)
    while True:
        if flint.fmpz(n).is_prime():
            for g in range(2, 200):
                if pow(g, (n - 1) // 2, n) == n - 1:
                    iota = pow(g, (n - 1) // 4, n)
                    break
            _PRIME_CACHE.append((n, iota))
            yield n, iota
        n -= 4


def _ctx(p: int):
    if p not in _NMOD_CTX:
        _NMOD_CTX[p] = flint.nmod_mpoly_ctx.get(("Z", "W", "T"), ordering="lex", modulus=p)
    return _NMOD_CTX[p]


def _int_parts(poly: TriPoly) -> tuple[dict, dict]:
    re = {tuple(int(x) for x in e): int(c) for e, c in poly._re.to_dict().items()}
    im = {tuple(int(x) for x in e): int(c) for e, c in poly._im.to_dict().items()}
    return re, im


def _ratrec(u: int, m: int) -> Fraction | None:
    """Rational reconstruction of ``u mod m`` with both parts below sqrt(m/2)."""
    bound = isqrt(m // 2)
    r0, r1 = m, u % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    return Fraction(r1, s1)


def _gcd_modular(polys: Sequence[TriPoly]) -> TriPoly:
    parts = [_int_parts(p) for p in polys]
    leads = [p.leading_exponent() for p in polys]
    best_key = None  # (degree, leading monomial) of the accumulated images
    acc: dict[tuple, tuple[int, int]] = {}
    modulus = 1
    last_failed = None
    for count, (p, iota) in enumerate(_primes()):
        if count >= MAX_PRIMES:
            raise ResourceBudget("modular gcd did not stabilize within the prime budget")
        ctx = _ctx(p)
        images = []
        lucky = True
        for sign in (1, -1):
            s = iota if sign == 1 else p - iota
            g = None
            for (re, im), lead in zip(parts, leads):
                d = {}
                for e in re.keys() | im.keys():
                    v = (re.get(e, 0) + s * im.get(e, 0)) % p
                    if v:
                        d[e] = v
                if lead not in d:
                    lucky = False
                    break
                img = ctx.from_dict(d)
                g = img if g is None else g.gcd(img)
            if not lucky:
                break
            lc = int(g.leading_coefficient())
            g = g * pow(lc, -1, p)
            images.append({tuple(int(x) for x in e): int(c) for e, c in g.to_dict().items()})
        if not lucky:
            continue
        up, um = images
        if max(up) != max(um) or sum(max(up)) != sum(max(um)):
            continue
        lead = max(up)
        key = (sum(lead), tuple(-x for x in lead))
        if sum(lead) == 0:
            return TriPoly.constant(1)
        if best_key is None or key < best_key:
            best_key, acc, modulus = key, {}, 1
        elif key > best_key:
            continue
        inv2 = pow(2, -1, p)
        inv2i = pow(2 * iota, -1, p)
        new = {}
        for e in up.keys() | um.keys() | acc.keys():
            u, v = up.get(e, 0), um.get(e, 0)
            x, y = (u + v) * inv2 % p, (u - v) * inv2i % p
            X, Y = acc.get(e, (0, 0))
            new[e] = (_crt(X, modulus, x, p), _crt(Y, modulus, y, p))
        acc, modulus = new, modulus * p
        cand = _reconstruct(acc, modulus)
        if cand is None or cand == last_failed:
            continue
        if all(divides(cand, q) for q in polys):
            return cand
        last_failed = cand
    raise AssertionError("unreachable")  # pragma: no cover


def _crt(a: int, m: int, b: int, p: int) -> int:
    if m == 1:
        return b % p
    t = (b - a) * pow(m, -1, p) % p
    return a + m * t


def _reconstruct(acc: dict, modulus: int) -> TriPoly | None:
    terms = {}
    for e, (x, y) in acc.items():
        fx = _ratrec(x, modulus)
        fy = _ratrec(y, modulus)
        if fx is None or fy is None:
            return None
        if fx or fy:
            terms[e] = GaussianRational(fx, fy)
    if not terms:
        return None
    return TriPoly(terms)
