"""Exact scalars: rationals, real quadratic numbers, univariate polynomials.

Rationals are plain :class:`fractions.Fraction`.  :class:`QuadraticNumber`
holds ``a + b*sqrt(d)`` with a single square-free radicand per value, and
:class:`Polynomial` is a sparse univariate polynomial whose coefficients may
be any exact scalar.  Nothing in this module touches floating point except
``__float__``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd, isqrt
from numbers import Rational as _RationalABC
from typing import Union

Rational = Fraction
Scalar = Union[int, Fraction, "QuadraticNumber"]


class DomainError(ValueError):
    """Raised when an exact operation is asked for a value outside its domain."""


class MixedRadicalError(ValueError):
    pass


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, QuadraticNumber):
        if not x.is_rational:
            raise DomainError(f"{x} is not rational")
        return x.a
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, _RationalABC):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def _squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(k, r)`` with ``n = k*k*r`` and ``r`` square-free."""
    if n == 0:
        return 0, 0
    k, r = 1, n
    p = 2
    while p * p <= r:
        while r % (p * p) == 0:
            r //= p * p
            k *= p
        p += 1 if p == 2 else 2
    return k, r


class QuadraticNumber:
    """Exact real number ``a + b*sqrt(d)`` with ``a, b`` rational.

    ``d`` is square-free; rational values are stored with ``b = d = 0``.
    Arithmetic between values with different non-zero radicands raises
    :class:`MixedRadicalError`.
    """

    __slots__ = ("_a", "_b", "_d")

    def __init__(self, a=0, b=0, d: int = 0) -> None:
        a = as_fraction(a)
        b = as_fraction(b)
        d = int(d)
        if d < 0:
            raise DomainError("radicand must be non-negative")
        k, d = _squarefree_split(d)
        b *= k
        if d == 1:
            a, b, d = a + b, Fraction(0), 0
        if b == 0 or d == 0:
            b, d = Fraction(0), 0
        self._a, self._b, self._d = a, b, d

    @property
    def a(self) -> Fraction:
        return self._a

    @property
    def b(self) -> Fraction:
        return self._b

    @property
    def d(self) -> int:
        return self._d

    @property
    def is_rational(self) -> bool:
        return self._b == 0

    @classmethod
    def coerce(cls, x) -> QuadraticNumber:
        if isinstance(x, QuadraticNumber):
            return x
        return cls(as_fraction(x))

    def _lift(self, other) -> tuple[QuadraticNumber, int] | None:
        if isinstance(other, QuadraticNumber):
            o = other
        elif isinstance(other, (int, Fraction)):
            o = QuadraticNumber(other)
        else:
            return None
        if self._d and o._d and self._d != o._d:
            raise MixedRadicalError(
                f"values in Q(sqrt({self._d})) and Q(sqrt({o._d})) cannot be combined"
            )
        return o, self._d or o._d

    def __add__(self, other):
        lifted = self._lift(other)
        if lifted is None:
            return NotImplemented
        o, d = lifted
        return QuadraticNumber(self._a + o._a, self._b + o._b, d)

    __radd__ = __add__

    def __neg__(self) -> QuadraticNumber:
        return QuadraticNumber(-self._a, -self._b, self._d)

    def __pos__(self) -> QuadraticNumber:
        return self

    def __sub__(self, other):
        lifted = self._lift(other)
        if lifted is None:
            return NotImplemented
        o, d = lifted
        return QuadraticNumber(self._a - o._a, self._b - o._b, d)

    def __rsub__(self, other):
        lifted = self._lift(other)
        if lifted is None:
            return NotImplemented
        return lifted[0] - self

    def __mul__(self, other):
        lifted = self._lift(other)
        if lifted is None:
            return NotImplemented
        o, d = lifted
        return QuadraticNumber(
            self._a * o._a + self._b * o._b * d,
            self._a * o._b + self._b * o._a,
            d,
        )

    __rmul__ = __mul__

    def conjugate(self) -> QuadraticNumber:
        return QuadraticNumber(self._a, -self._b, self._d)

    def norm(self) -> Fraction:
        return self._a * self._a - self._b * self._b * self._d

    def inverse(self) -> QuadraticNumber:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by exact zero")
        return QuadraticNumber(self._a / n, -self._b / n, self._d)

    def __truediv__(self, other):
        lifted = self._lift(other)
        if lifted is None:
            return NotImplemented
        return self * lifted[0].inverse()

    def __rtruediv__(self, other):
        lifted = self._lift(other)
        if lifted is None:
            return NotImplemented
        return lifted[0] * self.inverse()

    def __pow__(self, n: int) -> QuadraticNumber:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadraticNumber(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def sign(self) -> int:
        return quad_sign(self)

    def __abs__(self) -> QuadraticNumber:
        return -self if self.sign() < 0 else self

    def __eq__(self, other) -> bool:
        if isinstance(other, QuadraticNumber):
            return (self._a, self._b, self._d) == (other._a, other._b, other._d)
        if isinstance(other, (int, Fraction)):
            return self._b == 0 and self._a == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._b == 0:
            return hash(self._a)
        return hash((self._a, self._b, self._d))

    def _cmp(self, other) -> int | None:
        try:
            diff = self - other
        except MixedRadicalError:
            raise
        if diff is NotImplemented:
            return None
        return diff.sign()

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    def __bool__(self) -> bool:
        return self._b != 0 or self._a != 0

    def __floor__(self) -> int:
        return quad_floor(self)

    def __float__(self) -> float:
        return float(self._a) + float(self._b) * self._d**0.5

    def __repr__(self) -> str:
        return f"QuadraticNumber({str(self._a)!r}, {str(self._b)!r}, {self._d})"

    def __str__(self) -> str:
        return format_quadratic(self)


def format_quadratic(x: QuadraticNumber) -> str:
    """Render in the ``a+b*sqrt(d)`` grammar accepted by :func:`parse_scalar`."""
    if x.is_rational:
        return str(x.a)
    b = x.b
    if b == 1:
        surd = f"sqrt({x.d})"
    elif b == -1:
        surd = f"-sqrt({x.d})"
    else:
        surd = f"{b}*sqrt({x.d})"
    if x.a == 0:
        return surd
    return f"{x.a}{surd}" if surd.startswith("-") else f"{x.a}+{surd}"


_TERM = re.compile(
    r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*(\*)?\s*)?(sqrt\(\s*(\d+)\s*\))?\s*"
)


def parse_scalar(text: str) -> Fraction | QuadraticNumber:
    """Parse ``"p/q"`` or ``"a+b*sqrt(d)"``; rationals come back as Fraction."""
    s = text.strip()
    if not s:
        raise ValueError("empty scalar")
    pos = 0
    total = QuadraticNumber(0)
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"malformed exact scalar: {text!r}")
        sign, coef, star, surd, rad = m.groups()
        if not first and sign is None:
            raise ValueError(f"malformed exact scalar: {text!r}")
        if coef is None and surd is None:
            raise ValueError(f"malformed exact scalar: {text!r}")
        if star and surd is None:
            raise ValueError(f"malformed exact scalar: {text!r}")
        try:
            c = Fraction(coef) if coef is not None else Fraction(1)
        except ZeroDivisionError:
            raise ValueError(f"zero denominator in {text!r}") from None
        if sign == "-":
            c = -c
        total = total + (QuadraticNumber(0, c, int(rad)) if surd else QuadraticNumber(c))
        pos = m.end()
        first = False
    return total.a if total.is_rational else total


def simplify(x):
    """Collapse rational quadratic numbers to Fraction; leave other values alone."""
    if isinstance(x, QuadraticNumber) and x.is_rational:
        return x.a
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    return x


def quad_sqrt(x) -> Fraction | QuadraticNumber:
    """Exact square root of a non-negative rational."""
    x = as_fraction(x)
    if x < 0:
        raise DomainError(f"square root of negative value {x}")
    if x == 0:
        return Fraction(0)
    # sqrt(p/q) = sqrt(p*q)/q
    n = x.numerator * x.denominator
    k, r = _squarefree_split(n)
    if r == 1:
        return Fraction(k, x.denominator)
    return QuadraticNumber(0, Fraction(k, x.denominator), r)


def quad_sign(x) -> int:
    """Sign of ``a + b*sqrt(d)``, decided by squaring rather than by floats."""
    if not isinstance(x, QuadraticNumber):
        f = as_fraction(x)
        return (f > 0) - (f < 0)
    sa = (x.a > 0) - (x.a < 0)
    sb = (x.b > 0) - (x.b < 0)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs; a^2 == b^2 d is impossible for square-free d > 1
    return sa if x.a * x.a > x.b * x.b * x.d else sb


def quad_floor(x) -> int:
    if not isinstance(x, QuadraticNumber) or x.is_rational:
        f = as_fraction(x)
        return f.numerator // f.denominator
    # b*sqrt(d) = sign(b) * sqrt(b^2 d); bracket it between consecutive integers
    t = x.b * x.b * x.d
    s = isqrt(t.numerator // t.denominator)
    guess = x.a + (s if x.b > 0 else -s)
    n = guess.numerator // guess.denominator - 2
    while quad_sign(x - (n + 1)) >= 0:
        n += 1
    while quad_sign(x - n) < 0:
        n -= 1
    return n


def exact_abs(x):
    return -x if quad_sign(x) < 0 else x


# ---------------------------------------------------------------------------
# polynomials


class Polynomial:
    """Sparse univariate polynomial with exact coefficients.

    Zero coefficients are never stored.  Mixed arithmetic with plain scalars
    treats them as constants, so the same formula code runs on numbers and on
    symbolic parameters.
    """

    __slots__ = ("_coeffs", "var")

    def __init__(self, coeffs=None, var: str = "m") -> None:
        clean: dict[int, object] = {}
        for deg, c in (coeffs or {}).items():
            deg = int(deg)
            if deg < 0:
                raise ValueError("negative degree")
            c = simplify(c)
            if c != 0:
                clean[deg] = c
        self._coeffs = dict(sorted(clean.items()))
        self.var = var

    @classmethod
    def variable(cls, var: str = "m") -> Polynomial:
        return cls({1: Fraction(1)}, var)

    @classmethod
    def constant(cls, c, var: str = "m") -> Polynomial:
        return cls({0: c}, var)

    @property
    def coefficients(self) -> dict[int, object]:
        return dict(self._coeffs)

    def coefficient(self, deg: int):
        return self._coeffs.get(deg, Fraction(0))

    @property
    def degree(self) -> int:
        return max(self._coeffs) if self._coeffs else -1

    @property
    def leading_coefficient(self):
        return self._coeffs[self.degree] if self._coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self._coeffs

    def is_constant(self) -> bool:
        return self.degree <= 0

    def _wrap(self, other) -> Polynomial | None:
        if isinstance(other, Polynomial):
            if other.var != self.var and not (other.is_constant() or self.is_constant()):
                raise ValueError(f"polynomials in {self.var} and {other.var} do not mix")
            return other
        if isinstance(other, (int, Fraction, QuadraticNumber)):
            return Polynomial({0: other}, self.var)
        return None

    def __add__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        out = dict(self._coeffs)
        for k, c in o._coeffs.items():
            out[k] = out.get(k, 0) + c
        return Polynomial(out, self.var)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial({k: -c for k, c in self._coeffs.items()}, self.var)

    def __sub__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        out: dict[int, object] = {}
        for i, a in self._coeffs.items():
            for j, b in o._coeffs.items():
                out[i + j] = out.get(i + j, 0) + a * b
        return Polynomial(out, self.var)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Polynomial):
            if not other.is_constant() or other.is_zero():
                raise DomainError("only division by a non-zero constant is supported")
            other = other.coefficient(0)
        if not isinstance(other, (int, Fraction, QuadraticNumber)):
            return NotImplemented
        if other == 0:
            raise ZeroDivisionError("division by exact zero")
        return Polynomial({k: c / other for k, c in self._coeffs.items()}, self.var)

    def __pow__(self, n: int) -> Polynomial:
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = Polynomial({0: 1}, self.var)
        for _ in range(n):
            result = result * self
        return result

    def __call__(self, x):
        total = Fraction(0)
        for k, c in self._coeffs.items():
            total = total + c * x**k
        return simplify(total)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self._coeffs == other._coeffs and (
                self.var == other.var or self.is_constant()
            )
        if isinstance(other, (int, Fraction, QuadraticNumber)):
            return self.is_constant() and self.coefficient(0) == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_constant():
            return hash(self.coefficient(0))
        return hash((self.var, tuple(self._coeffs.items())))

    def __repr__(self) -> str:
        return f"Polynomial({ {k: str(c) for k, c in self._coeffs.items()} }, var={self.var!r})"

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for k in sorted(self._coeffs, reverse=True):
            c = self._coeffs[k]
            mono = "" if k == 0 else (self.var if k == 1 else f"{self.var}^{k}")
            if not mono:
                parts.append(f"({c})" if isinstance(c, QuadraticNumber) else str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                cs = f"({c})" if isinstance(c, QuadraticNumber) else str(c)
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def PolynomialInM(coeffs=None) -> Polynomial:
    return Polynomial(coeffs, var="m")


def lagrange_interpolate(points: list[tuple[Fraction, Fraction]], var: str = "m") -> Polynomial:
    """Exact interpolating polynomial through distinct ``(x, y)`` pairs."""
    x = Polynomial.variable(var)
    total = Polynomial({}, var)
    for i, (xi, yi) in enumerate(points):
        term = Polynomial({0: yi}, var)
        for j, (xj, _) in enumerate(points):
            if i != j:
                term = term * (x - xj) / (Fraction(xi) - xj)
        total = total + term
    return total


# ---------------------------------------------------------------------------
# continued fractions


def _to_pqd(x: QuadraticNumber) -> tuple[int, int, int]:
    """Write ``x = (P + sqrt(D)) / Q`` with integers and ``Q | D - P^2``."""
    den = x.a.denominator * x.b.denominator // gcd(x.a.denominator, x.b.denominator)
    A = int(x.a * den)
    B = int(x.b * den)
    Q = den
    if B < 0:
        A, B, Q = -A, -B, -Q
    P, D = A, B * B * x.d
    if (D - P * P) % Q:
        P, D, Q = P * abs(Q), D * Q * Q, Q * abs(Q)
    return P, Q, D


def continued_fraction_terms(x, n: int) -> tuple[list[int], bool]:
    """First ``n`` partial quotients of ``x``; the flag is True if the expansion ended."""
    if not isinstance(x, QuadraticNumber) or x.is_rational:
        f = as_fraction(x)
        terms: list[int] = []
        num, den = f.numerator, f.denominator
        while den and len(terms) < n:
            a = num // den
            terms.append(a)
            num, den = den, num - a * den
        return terms, den == 0
    P, Q, D = _to_pqd(x)
    s = isqrt(D)
    terms = []
    for _ in range(n):
        a = (P + s) // Q if Q > 0 else (P + s + 1) // Q
        terms.append(a)
        P = a * Q - P
        Q = (D - P * P) // Q
    return terms, False


def convergents_from_terms(terms: list[int]) -> list[tuple[int, int]]:
    out = []
    p0, q0, p1, q1 = 1, 0, 0, 1
    for a in terms:
        p0, p1 = a * p0 + p1, p0
        q0, q1 = a * q0 + q1, q0
        out.append((p0, q0))
    return out


def dirichlet_convergents(x, n: int) -> tuple[list[tuple[int, int]], bool]:
    """Continued-fraction convergents ``p/q`` of ``x``.

    Returns ``(pairs, terminated)``.  For irrational ``x`` there are exactly
    ``n`` pairs, each with ``|x - p/q| < 1/q**2``.  A rational input returns
    the single exact pair and ``terminated=True``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if not isinstance(x, QuadraticNumber) or x.is_rational:
        f = as_fraction(x)
        return [(f.numerator, f.denominator)], True
    terms, _ = continued_fraction_terms(x, n)
    return convergents_from_terms(terms), False


def within_dirichlet_bound(x, p: int, q: int) -> bool:
    """``|x - p/q| < 1/q^2`` decided as ``q*|q*x - p| < 1`` in Q(sqrt d)."""
    err = exact_abs(q * QuadraticNumber.coerce(x) - p)
    return quad_sign(1 - q * err) > 0
