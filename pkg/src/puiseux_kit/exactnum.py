"""Exact rationals and quadratic-irrational cuts.

Rationals are ``fractions.Fraction``. A ``RealCut`` is a number a + b*sqrt(c)
with rational a, b and square-free c; it is stored as integers (p + q*sqrt(c))/r
so that every comparison reduces to integer sign analysis.
"""

from __future__ import annotations

import enum
import math
import re
from fractions import Fraction
from functools import reduce, total_ordering

Rational = Fraction

_RAT_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")
_QUAD_RE = re.compile(
    r"^\s*([+-]?\d+(?:/\d+)?)\s*([+-])\s*(\d+(?:/\d+)?)\s*\*\s*sqrt\(\s*(\d+)\s*\)\s*$"
)


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1

    def __str__(self):
        return self.name.capitalize()


def canonicalize(num: int, den: int) -> Fraction:
    if den == 0:
        raise ZeroDivisionError("zero denominator")
    return Fraction(int(num), int(den))


def parse_rational(text) -> Fraction:
    """Parse "p/q" or "p" exactly; ints and Fractions pass through."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    m = _RAT_RE.match(str(text))
    if not m:
        raise ValueError(f"not a rational: {text!r}")
    den = int(m.group(2)) if m.group(2) is not None else 1
    return canonicalize(int(m.group(1)), den)


def gcd_set(values) -> int:
    values = list(values)
    if not values:
        raise ValueError("gcd of empty list")
    return reduce(math.gcd, values)


def lcm_set(values) -> int:
    values = list(values)
    if not values:
        raise ValueError("lcm of empty list")
    return reduce(lambda a, b: a * b // math.gcd(a, b), values)


def _squarefree_split(c: int) -> tuple[int, int]:
    """Return (s, f) with c = s*s*f and f square-free."""
    s, f, d = 1, c, 2
    while d * d <= f:
        while f % (d * d) == 0:
            f //= d * d
            s *= d
        d += 1
    return s, f


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


def _sign_quad(A: int, B: int, c: int) -> int:
    """Sign of A + B*sqrt(c) for integers A, B and c >= 1."""
    sa, sb = _sign(A), _sign(B)
    if sb == 0 or sa == sb:
        return sa if sa else sb
    if sa == 0:
        return sb
    return sa if A * A > B * B * c else sb


def floor_quad(A: int, B: int, c: int, D: int) -> int:
    """floor((A + B*sqrt(c)) / D) for integers, D > 0, c square-free (or B == 0)."""
    if B == 0 or c == 1:
        return (A + B * math.isqrt(c)) // D
    s = math.isqrt(B * B * c)
    if B < 0:
        s = -s - 1
    return (A + s) // D


@total_ordering
class RealCut:
    """Exact real a + b*sqrt(c); rational when b == 0."""

    __slots__ = ("p", "q", "c", "r")

    def __init__(self, a=0, b=0, c: int = 1):
        a, b = Fraction(a), Fraction(b)
        c = int(c)
        if c <= 0:
            raise ValueError("radicand must be positive")
        s, c = _squarefree_split(c)
        b *= s
        if c == 1:
            a, b = a + b, Fraction(0)
        if b == 0:
            c = 1
        r = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
        p, q = a.numerator * (r // a.denominator), b.numerator * (r // b.denominator)
        g = math.gcd(math.gcd(p, q), r)
        self.p, self.q, self.c, self.r = p // g, q // g, c, r // g

    # construction helpers
    @classmethod
    def rat(cls, x) -> "RealCut":
        return cls(Fraction(x))

    @classmethod
    def parse(cls, text) -> "RealCut":
        if isinstance(text, RealCut):
            return text
        if isinstance(text, dict):
            return cls(parse_rational(text["a"]), parse_rational(text["b"]), int(text["c"]))
        if isinstance(text, (int, Fraction)):
            return cls(Fraction(text))
        m = _QUAD_RE.match(str(text))
        if m:
            b = parse_rational(m.group(3))
            if m.group(2) == "-":
                b = -b
            return cls(parse_rational(m.group(1)), b, int(m.group(4)))
        return cls(parse_rational(text))

    @property
    def a(self) -> Fraction:
        return Fraction(self.p, self.r)

    @property
    def b(self) -> Fraction:
        return Fraction(self.q, self.r)

    @property
    def is_rational(self) -> bool:
        return self.q == 0

    def as_fraction(self) -> Fraction:
        if self.q:
            raise ValueError(f"{self} is irrational")
        return Fraction(self.p, self.r)

    # arithmetic
    @staticmethod
    def _lift(other) -> "RealCut":
        if isinstance(other, RealCut):
            return other
        if isinstance(other, (int, Fraction)):
            return RealCut(Fraction(other))
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if self.q and o.q and self.c != o.c:
            raise ValueError("sum of cuts over different radicands")
        return RealCut(self.a + o.a, self.b + o.b, self.c if self.q else o.c)

    __radd__ = __add__

    def __neg__(self):
        return RealCut(-self.a, -self.b, self.c)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            k = Fraction(other)
            return RealCut(self.a * k, self.b * k, self.c)
        if isinstance(other, RealCut):
            if other.is_rational:
                return self * other.a
            if self.is_rational:
                return other * self.a
            if self.c != other.c:
                raise ValueError("product of cuts over different radicands")
            a1, b1, a2, b2 = self.a, self.b, other.a, other.b
            return RealCut(a1 * a2 + b1 * b2 * self.c, a1 * b2 + a2 * b1, self.c)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if isinstance(other, RealCut):
            return self * other.reciprocal()
        return NotImplemented

    def reciprocal(self) -> "RealCut":
        a, b = self.a, self.b
        n = a * a - b * b * self.c
        if n == 0:
            raise ZeroDivisionError("reciprocal of zero")
        return RealCut(a / n, -b / n, self.c)

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.reciprocal() * Fraction(other)
        return NotImplemented

    # order
    def sign(self) -> int:
        return _sign_quad(self.p, self.q, self.c)

    def _cmp(self, other) -> int:
        if isinstance(other, Fraction) or (isinstance(other, int) and not isinstance(other, bool)):
            x = Fraction(other)
            # sign(self - x) = sign(p*den - num*r + q*den*sqrt(c))
            return _sign_quad(self.p * x.denominator - x.numerator * self.r,
                              self.q * x.denominator, self.c)
        if not isinstance(other, RealCut):
            raise TypeError(f"cannot compare RealCut with {type(other).__name__}")
        if not self.q or not other.q or self.c == other.c:
            return (self - other).sign()
        # u + v with u = (a1 - a2) + b1*sqrt(c1), v = -b2*sqrt(c2)
        u = RealCut(self.a - other.a, self.b, self.c)
        su, sv = u.sign(), -_sign(other.q)
        if su == sv or su == 0:
            return sv if su == 0 else su
        u2 = RealCut(u.a * u.a + u.b * u.b * u.c, 2 * u.a * u.b, u.c)
        v2 = other.b * other.b * other.c
        return su if u2._cmp(v2) > 0 else sv

    def __eq__(self, other):
        try:
            return self._cmp(other) == 0
        except TypeError:
            return NotImplemented

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __hash__(self):
        if not self.q:
            return hash(Fraction(self.p, self.r))
        return hash((self.p, self.q, self.c, self.r))

    def floor(self) -> int:
        return floor_quad(self.p, self.q, self.c, self.r)

    def ceil(self) -> int:
        f = self.floor()
        return f if self._cmp(f) == 0 else f + 1

    def frac(self) -> "RealCut":
        return self - self.floor()

    def __str__(self):
        if not self.q:
            return str(Fraction(self.p, self.r))
        a, b = self.a, self.b
        sign = "-" if b < 0 else "+"
        return f"{a}{sign}{abs(b)}*sqrt({self.c})"

    def __repr__(self):
        return f"RealCut({self})"

    def to_json(self):
        if not self.q:
            return str(Fraction(self.p, self.r))
        return {"a": str(self.a), "b": str(self.b), "c": self.c}


def compare(x, t: RealCut) -> Ordering:
    """Order of the rational x against the cut t."""
    return Ordering(-RealCut.parse(t)._cmp(Fraction(x)))


def floor_mul(n: int, t: RealCut) -> int:
    return (RealCut.parse(t) * n).floor()


def as_cut(x) -> RealCut:
    return x if isinstance(x, RealCut) else RealCut(Fraction(x))


def fmt(x) -> str:
    return str(x)
