"""Finitely supported Fourier series on the 2-torus and the leafwise derivative.

A series holds exact rational-complex coefficients on finitely many modes
(m, n).  The leafwise vector field acts diagonally, multiplying the (m, n)
coefficient by 2*pi*i*(m + alpha*n).  Both the 2*pi*i factor and the divisor
factor are carried symbolically as series-level exponents, so dividing and
re-multiplying cancels exactly -- pi never enters the algebra, only the final
numeric rendering.

A series whose scalar f represents the foliated 1-form f*dx-bar is stored as
the bare function; the one-form identification stays implicit (any leafwise
1-form on the 2-torus is closed, so nothing is lost).
"""

from __future__ import annotations

import decimal
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .diophantine import Slope
from .exact import Interval, render_fraction
from .errors import PrecisionExhausted

Mode = tuple[int, int]
ComplexRat = tuple[Fraction, Fraction]


def _as_complex_rat(value) -> ComplexRat:
    if isinstance(value, tuple):
        return (Fraction(value[0]), Fraction(value[1]))
    if isinstance(value, complex):
        raise TypeError("binary floats are not accepted; pass Fractions or strings")
    return (Fraction(value), Fraction(0))


@dataclass(frozen=True)
class TorusPoint:
    """A point of the 2-torus with rational coordinates reduced mod 1."""

    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x) % 1)
        object.__setattr__(self, "y", Fraction(self.y) % 1)


class FourierSeries2D:
    """Finite map (m, n) -> coefficient, with optional symbolic prefactors.

    ``two_pi_i_pow`` counts formal factors of 2*pi*i shared by every
    coefficient; ``divisor_pow`` counts formal factors of (m + alpha*n)
    attached mode-wise (the slope is then recorded).  The stored rational
    pair q is the coefficient divided by those factors.  Exact zeros are
    never stored.
    """

    __slots__ = ("coeffs", "two_pi_i_pow", "divisor_pow", "slope", "real_tag")

    def __init__(
        self,
        coeffs: dict[Mode, ComplexRat | Fraction | int] | None = None,
        *,
        two_pi_i_pow: int = 0,
        divisor_pow: int = 0,
        slope: Slope | None = None,
        real_tag: bool = False,
    ):
        store: dict[Mode, ComplexRat] = {}
        for (m, n), value in (coeffs or {}).items():
            re, im = _as_complex_rat(value)
            if re == 0 and im == 0:
                continue
            store[(int(m), int(n))] = (re, im)
        self.coeffs = store
        self.two_pi_i_pow = two_pi_i_pow
        self.divisor_pow = divisor_pow
        self.slope = slope
        if divisor_pow != 0 and slope is None:
            raise ValueError("divisor powers need a slope")
        self.real_tag = real_tag
        if real_tag and not self.is_conjugate_symmetric():
            raise ValueError("real tag set but coefficients are not conjugate-symmetric")

    # -- basic structure ------------------------------------------------------

    def support(self) -> list[Mode]:
        return sorted(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, FourierSeries2D):
            return NotImplemented
        return (
            self.coeffs == other.coeffs
            and self.two_pi_i_pow == other.two_pi_i_pow
            and self.divisor_pow == other.divisor_pow
            and (self.divisor_pow == 0 or self.slope == other.slope)
        )

    def __repr__(self):
        bits = [f"{len(self.coeffs)} modes"]
        if self.two_pi_i_pow:
            bits.append(f"(2*pi*i)^{self.two_pi_i_pow}")
        if self.divisor_pow:
            bits.append(f"divisor^{self.divisor_pow}")
        return f"<FourierSeries2D {' '.join(bits)}>"

    def _compatible(self, other: "FourierSeries2D"):
        if (
            self.two_pi_i_pow != other.two_pi_i_pow
            or self.divisor_pow != other.divisor_pow
            or (self.divisor_pow != 0 and self.slope != other.slope)
        ):
            raise ValueError("cannot combine series with different symbolic prefactors")

    def __add__(self, other: "FourierSeries2D") -> "FourierSeries2D":
        self._compatible(other)
        out = dict(self.coeffs)
        for mode, (re, im) in other.coeffs.items():
            r0, i0 = out.get(mode, (Fraction(0), Fraction(0)))
            out[mode] = (r0 + re, i0 + im)
        return FourierSeries2D(
            out,
            two_pi_i_pow=self.two_pi_i_pow,
            divisor_pow=self.divisor_pow,
            slope=self.slope,
        )

    def scale(self, value) -> "FourierSeries2D":
        """Multiply every coefficient by an exact rational-complex scalar."""
        sre, sim = _as_complex_rat(value)
        out = {}
        for mode, (re, im) in self.coeffs.items():
            out[mode] = (re * sre - im * sim, re * sim + im * sre)
        return FourierSeries2D(
            out,
            two_pi_i_pow=self.two_pi_i_pow,
            divisor_pow=self.divisor_pow,
            slope=self.slope,
        )

    def times_two_pi_i(self, power: int = 1) -> "FourierSeries2D":
        """Shift the formal 2*pi*i exponent (used to normalize conventions)."""
        return FourierSeries2D(
            dict(self.coeffs),
            two_pi_i_pow=self.two_pi_i_pow + power,
            divisor_pow=self.divisor_pow,
            slope=self.slope,
        )

    def is_conjugate_symmetric(self) -> bool:
        """Exact check of c(-m,-n) == conj(c(m,n)) on the stored rationals.

        With equal 2*pi*i and divisor exponents modulo 2 the prefactor
        contributes (-1)^(e+f) to the relation; both factor patterns used
        here have e == f, so the bare-rational check is the right one.
        """
        sign = -1 if (self.two_pi_i_pow + self.divisor_pow) % 2 else 1
        for (m, n), (re, im) in self.coeffs.items():
            mirror = self.coeffs.get((-m, -n))
            if mirror is None:
                return False
            if mirror != (sign * re, -sign * im):
                return False
        return True

    # -- numeric rendering -----------------------------------------------------

    def numeric_coefficient(self, mode: Mode, digits: int = 50) -> tuple[Fraction, Fraction]:
        """The (re, im) value of one coefficient with prefactors rendered.

        Divisor enclosures are collapsed to their midpoint at rendering time;
        the algebra itself never does this.
        """
        re, im = self.coeffs[mode]
        if self.divisor_pow != 0:
            div = self.slope.divisor(*mode)
            mid = div.enclosure(digits + 10).midpoint
            factor = mid**self.divisor_pow
            re, im = re * factor, im * factor
        if self.two_pi_i_pow != 0:
            with mpmath.workdps(digits + 15):
                two_pi = (2 * mpmath.pi) ** self.two_pi_i_pow
                scale = Fraction(mpmath.nstr(two_pi, digits + 10, strip_zeros=False))
            re, im = re * scale, im * scale
            for _ in range(self.two_pi_i_pow % 4):  # nonneg residue also for e < 0
                re, im = -im, re  # multiply by i
        return (re, im)

    def to_json_dict(self, digits: int = 50) -> dict:
        rows = []
        for mode in self.support():
            re, im = self.numeric_coefficient(mode, digits)
            rows.append(
                {
                    "m": mode[0],
                    "n": mode[1],
                    "re": render_fraction(re, digits),
                    "im": render_fraction(im, digits),
                }
            )
        return {"coeffs": rows}


def series_from_json(data: dict | str) -> FourierSeries2D:
    """Load a plain series from the exchange format.

    Decimal strings parse to exact rationals, so reading back a file written
    with enough digits is lossless for decimally-representable coefficients.
    """
    if isinstance(data, str):
        data = json.loads(data)
    coeffs: dict[Mode, ComplexRat] = {}
    for row in data["coeffs"]:
        coeffs[(int(row["m"]), int(row["n"]))] = (
            Fraction(str(row["re"])),
            Fraction(str(row["im"])),
        )
    return FourierSeries2D(coeffs)


def series_to_json(series: FourierSeries2D, digits: int = 50) -> str:
    return json.dumps(series.to_json_dict(digits), sort_keys=True, indent=2)


# ---------------------------------------------------------------------------
# operations


def evaluate(series: FourierSeries2D, point: TorusPoint, digits: int = 50):
    """Value of the finite sum at a rational point, rounded at ``digits``.

    Returns a pair of Decimals (re, im).  The trigonometric factors are
    computed with 15 guard digits and the final digit rounded half-even; for
    the rational-only parts the rounding is exact.
    """
    with mpmath.workdps(digits + 15):
        total = mpmath.mpc(0)
        for (m, n), _ in sorted(series.coeffs.items()):
            re, im = series.numeric_coefficient((m, n), digits + 10)
            theta = 2 * (m * point.x + n * point.y)  # in units of pi
            c = mpmath.cospi(mpmath.mpf(theta.numerator) / theta.denominator)
            s = mpmath.sinpi(mpmath.mpf(theta.numerator) / theta.denominator)
            coeff = mpmath.mpc(
                mpmath.mpf(re.numerator) / re.denominator,
                mpmath.mpf(im.numerator) / im.denominator,
            )
            total += coeff * mpmath.mpc(c, s)
        re_str = mpmath.nstr(total.real, digits + 10, strip_zeros=False)
        im_str = mpmath.nstr(total.imag, digits + 10, strip_zeros=False)
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        ctx.rounding = decimal.ROUND_HALF_EVEN
        return (+decimal.Decimal(re_str), +decimal.Decimal(im_str))


def apply_X(series: FourierSeries2D, slope: Slope) -> FourierSeries2D:
    """Leafwise derivative: multiply mode (m, n) by 2*pi*i*(m + alpha*n).

    Resonant modes (divisor exactly zero) drop out of the support; both the
    2*pi*i factor and the divisor stay symbolic, so a subsequent coefficient
    division undoes this map exactly.
    """
    if series.divisor_pow != 0 and series.slope != slope:
        raise ValueError("series already carries divisors of a different slope")
    out = {}
    for mode, value in series.coeffs.items():
        if slope.divisor(*mode).is_zero():  # may raise PrecisionExhausted
            continue
        out[mode] = value
    return FourierSeries2D(
        out,
        two_pi_i_pow=series.two_pi_i_pow + 1,
        divisor_pow=series.divisor_pow + 1,
        slope=slope,
    )


@dataclass(frozen=True)
class DecayProfile:
    """sup over the support of |c(m,n)| * (|m|+|n|)^j for one order j.

    ``value_sq`` is the exact square of the sup; ``value`` is its exact
    square root when one exists, else a half-even rendering at 50 digits.
    """

    order: int
    value: Fraction
    value_sq: Fraction
    exact: bool


def _sqrt_or_round(x: Fraction, digits: int = 50) -> tuple[Fraction, bool]:
    if x == 0:
        return Fraction(0), True
    num_r = math.isqrt(x.numerator)
    den_r = math.isqrt(x.denominator)
    if num_r * num_r == x.numerator and den_r * den_r == x.denominator:
        return Fraction(num_r, den_r), True
    scale = 10**digits
    approx = Fraction(math.isqrt((x * scale * scale).__floor__()), scale)
    return approx, False


def decay_profile(series: FourierSeries2D, orders: list[int]) -> list[DecayProfile]:
    """Exact weighted sups of the coefficients; only for plain series.

    The constant mode (0, 0) carries weight 1 at order 0 and is excluded for
    orders >= 1 (the weight (|m|+|n|)^j has no meaning at the origin and the
    decay statement quantifies over nonzero modes).
    """
    if series.two_pi_i_pow or series.divisor_pow:
        raise ValueError("decay profiles are defined for plain series")
    out = []
    for j in orders:
        if j < 0:
            raise ValueError("orders must be nonnegative")
        best = Fraction(0)
        for (m, n), (re, im) in series.coeffs.items():
            if (m, n) == (0, 0) and j >= 1:
                continue
            weight = (abs(m) + abs(n)) ** j
            best = max(best, (re * re + im * im) * weight * weight)
        value, exact = _sqrt_or_round(best)
        out.append(DecayProfile(order=j, value=value, value_sq=best, exact=exact))
    return out
