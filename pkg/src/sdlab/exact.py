"""Exact arithmetic kernel: rational intervals, quadratic surds, decimal text.

Everything downstream leans on two guarantees made here:

* an `Interval` has exact rational endpoints and every query that depends on
  the sign or ordering of enclosed values either resolves rigorously or
  raises `PrecisionExhausted` -- nothing silently rounds;
* a `QuadSurd` (a + b*sqrt(d) with rational a, b and a fixed non-square d)
  supports exact field arithmetic, exact sign, exact floor and rational
  enclosures of any requested width.

Divisors of the form m + alpha*n reach 1e-600 and below for factorial-base
slopes, which is why binary floats never enter this layer.
"""

from __future__ import annotations

import decimal
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import PrecisionExhausted

RatLike = int | Fraction


def _frac(x: RatLike) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


# ---------------------------------------------------------------------------
# rational intervals


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi] with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", _frac(self.lo))
        object.__setattr__(self, "hi", _frac(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"inverted interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x: RatLike) -> "Interval":
        x = _frac(x)
        return cls(x, x)

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x: RatLike) -> bool:
        x = _frac(x)
        return self.lo <= x <= self.hi

    def __add__(self, other):
        if isinstance(other, Interval):
            return Interval(self.lo + other.lo, self.hi + other.hi)
        o = _frac(other)
        return Interval(self.lo + o, self.hi + o)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Interval) else -_frac(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Interval):
            prods = [
                self.lo * other.lo,
                self.lo * other.hi,
                self.hi * other.lo,
                self.hi * other.hi,
            ]
            return Interval(min(prods), max(prods))
        o = _frac(other)
        if o >= 0:
            return Interval(self.lo * o, self.hi * o)
        return Interval(self.hi * o, self.lo * o)

    __rmul__ = __mul__

    def reciprocal(self) -> "Interval":
        if self.lo <= 0 <= self.hi:
            raise PrecisionExhausted(f"reciprocal of interval containing zero: {self}")
        return Interval(1 / self.hi, 1 / self.lo)

    def __abs__(self) -> "Interval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(Fraction(0), max(-self.lo, self.hi))

    def sign(self) -> int:
        """Exact sign of every enclosed value; raises if ambiguous."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        raise PrecisionExhausted(f"sign of [{self.lo}, {self.hi}] is ambiguous")

    def floor(self) -> int:
        flo = self.lo.__floor__()
        fhi = self.hi.__floor__()
        if flo != fhi:
            raise PrecisionExhausted(
                f"floor of [{self.lo}, {self.hi}] straddles an integer"
            )
        return flo

    def cmp(self, other: "Interval") -> int:
        """-1 / 0 / +1 ordering, 0 only for coinciding points."""
        if self.hi < other.lo:
            return -1
        if self.lo > other.hi:
            return 1
        if self.is_point and other.is_point and self.lo == other.lo:
            return 0
        raise PrecisionExhausted(f"cannot order {self} against {other}")

    def __str__(self):
        return f"[{self.lo}, {self.hi}]"


# ---------------------------------------------------------------------------
# quadratic surds


def _is_square(d: int) -> bool:
    if d < 0:
        return False
    r = math.isqrt(d)
    return r * r == d


@dataclass(frozen=True)
class QuadSurd:
    """Exact element a + b*sqrt(d) of a real quadratic field."""

    a: Fraction
    b: Fraction
    d: int

    def __post_init__(self):
        object.__setattr__(self, "a", _frac(self.a))
        object.__setattr__(self, "b", _frac(self.b))
        if self.d < 2 or _is_square(self.d):
            raise ValueError(f"radicand must be a non-square integer >= 2, got {self.d}")

    # -- ring operations -----------------------------------------------------

    def _coerce(self, other) -> "QuadSurd":
        if isinstance(other, QuadSurd):
            if other.d != self.d:
                raise ValueError(f"mixed radicands {self.d} and {other.d}")
            return other
        return QuadSurd(_frac(other), Fraction(0), self.d)

    def __add__(self, other):
        o = self._coerce(other)
        return QuadSurd(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadSurd(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        return QuadSurd(
            self.a * o.a + self.b * o.b * self.d,
            self.a * o.b + self.b * o.a,
            self.d,
        )

    __rmul__ = __mul__

    def inverse(self) -> "QuadSurd":
        norm = self.a * self.a - self.b * self.b * self.d
        if norm == 0:
            raise ZeroDivisionError("inverse of zero surd")
        return QuadSurd(self.a / norm, -self.b / norm, self.d)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    # -- order structure -----------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def rational_value(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("surd has an irrational part")
        return self.a

    def sign(self) -> int:
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return 1 if b > 0 else -1
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # a and b of opposite signs: compare a^2 with b^2 d
        lhs, rhs = a * a, b * b * self.d
        if a > 0:  # b < 0: positive iff a^2 > b^2 d
            return 1 if lhs > rhs else -1
        return 1 if rhs > lhs else -1  # a < 0, b > 0

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (ValueError, TypeError):
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __floor__(self) -> int:
        # float seed, then exact verification; the loop moves at most a step
        # or two except for adversarially huge coefficients.
        try:
            seed = math.floor(float(self.a) + float(self.b) * math.sqrt(self.d))
        except (OverflowError, ValueError):
            lo, hi = self.enclosure(30).lo, self.enclosure(30).hi
            seed = lo.__floor__()
        n = seed
        while (self - n).sign() < 0:
            n -= 1
        while (self - (n + 1)).sign() >= 0:
            n += 1
        return n

    def enclosure(self, digits: int = 60) -> Interval:
        """Rational interval of width <= |b| * 10^-digits around the value."""
        scale = 10**digits
        c = self.b * self.b * self.d  # b*sqrt(d) = sign(b)*sqrt(c)
        root_lo = Fraction(math.isqrt(c.numerator * scale * scale // c.denominator), scale) if c else Fraction(0)
        if c:
            root_hi = root_lo + Fraction(1, scale)
        else:
            root_hi = Fraction(0)
        if self.b >= 0:
            return Interval(self.a + root_lo, self.a + root_hi)
        return Interval(self.a - root_hi, self.a - root_lo)

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __str__(self):
        return f"({self.a} + {self.b}*sqrt({self.d}))"


ExactReal = Fraction | QuadSurd


def exact_sign(x: ExactReal) -> int:
    if isinstance(x, QuadSurd):
        return x.sign()
    return (x > 0) - (x < 0)


def exact_floor(x: ExactReal) -> int:
    if isinstance(x, QuadSurd):
        return x.__floor__()
    return x.__floor__()


def exact_abs(x: ExactReal) -> ExactReal:
    return abs(x)


def exact_enclosure(x: ExactReal, digits: int = 60) -> Interval:
    if isinstance(x, QuadSurd):
        return x.enclosure(digits)
    return Interval.point(x)


# ---------------------------------------------------------------------------
# decimal rendering

# round-half-even at the requested number of significant digits, computed by
# decimal's correctly-rounded division -- exact for rational inputs.


def render_fraction(x: RatLike, digits: int = 50) -> str:
    x = _frac(x)
    if x == 0:
        return "0"
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        ctx.rounding = decimal.ROUND_HALF_EVEN
        ctx.Emax = decimal.MAX_EMAX
        ctx.Emin = decimal.MIN_EMIN
        value = decimal.Decimal(x.numerator) / decimal.Decimal(x.denominator)
    return str(value).lower()


def render_interval(iv: Interval, digits: int = 50) -> dict:
    out = {"lo": render_fraction(iv.lo, digits), "hi": render_fraction(iv.hi, digits)}
    return out


def parse_decimal(text: str) -> Fraction:
    """Exact rational value of a decimal literal such as '0.11' or '2e-20'."""
    return Fraction(text)
