"""Dense univariate polynomials over the Gaussian rationals."""

from __future__ import annotations

from typing import Iterable, Sequence

from .gaussian import GaussianRational, as_gaussian

_ZERO = GaussianRational(0)
_ONE = GaussianRational(1)


class UPoly:
    """Immutable ``sum c_k x^k`` with coefficients stored lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_gaussian(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("UPoly is immutable")

    @classmethod
    def from_roots(cls, roots: Sequence, lead=1) -> "UPoly":
        p = cls([lead])
        for r in roots:
            p = p * cls([-as_gaussian(r), 1])
        return p

    @property
    def degree(self) -> int:
        """Degree; ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> GaussianRational:
        return self.coeffs[-1] if self.coeffs else _ZERO

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, UPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UPoly({[str(c) for c in self.coeffs]})"

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = _as_upoly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (_ZERO,) * (n - len(self.coeffs))
        b = other.coeffs + (_ZERO,) * (n - len(other.coeffs))
        return UPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return UPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_as_upoly(other))

    def __rsub__(self, other):
        return _as_upoly(other) - self

    def __mul__(self, other):
        other = _as_upoly(other)
        if not self.coeffs or not other.coeffs:
            return UPoly()
        out = [_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return UPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = UPoly([1])
        for _ in range(k):
            result = result * self
        return result

    def scale(self, c) -> "UPoly":
        c = as_gaussian(c)
        return UPoly(c * x for x in self.coeffs)

    def monic(self) -> "UPoly":
        return self.scale(self.lead().inverse()) if self.coeffs else self

    def divmod(self, other: "UPoly") -> tuple["UPoly", "UPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return UPoly(), self
        quo = [_ZERO] * (dq + 1)
        inv = other.lead().inverse()
        db = other.degree
        for k in range(dq, -1, -1):
            c = rem[k + db] * inv
            quo[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] = rem[k + j] - c * b
        return UPoly(quo), UPoly(rem[:db])

    def __floordiv__(self, other):
        return self.divmod(_as_upoly(other))[0]

    def __mod__(self, other):
        return self.divmod(_as_upoly(other))[1]

    def exact_div(self, other: "UPoly") -> "UPoly":
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError("univariate division is not exact")
        return q

    def derivative(self) -> "UPoly":
        return UPoly(c * k for k, c in enumerate(self.coeffs) if k)

    def __call__(self, x) -> GaussianRational:
        x = as_gaussian(x)
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def conj_coeffs(self) -> "UPoly":
        return UPoly(c.conj() for c in self.coeffs)

    def to_complex(self) -> list[complex]:
        return [complex(c) for c in self.coeffs]


def _as_upoly(x) -> UPoly:
    return x if isinstance(x, UPoly) else UPoly([x])


def upoly_gcd(a: UPoly, b: UPoly) -> UPoly:
    """Monic gcd over Q(i) (Euclid); ``gcd(0, 0) = 0``."""
    while b:
        a, b = b, a % b
    return a.monic()
