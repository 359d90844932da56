"""Cohomological equation in Fourier space and truncated cohomology reports.

Solving Xg = f reduces mode-wise to dividing by 2*pi*i*(m + alpha*n).  The
mean value f(0,0) is the obstruction: it must vanish, and it is exactly the
class of f in the Hausdorff quotient of the first cohomology.  On a finite
mode ball the operator is diagonal, so truncation is exact: kernel and
cokernel are spanned by the resonant modes.

Truncated dimensions cannot distinguish a well-approximable irrational slope
from a badly approximable one (both give dims (1, 1) at every radius).  The
reports therefore attach a declared heuristic: the small-divisor gap decay
across nested radii, flagged when it jumps superpolynomially.  That flag is
a proxy for the failure of the image to be closed, never a theorem.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .diophantine import (
    Slope,
    SmallDivisorGap,
    estimate_exponent,
    gap,
)
from .errors import Obstructed, PrecisionExhausted, Resonant
from .exact import Interval, QuadSurd
from .fourier import FourierSeries2D

FLAG_PROXY_HAUSDORFF = "proxy-Hausdorff"
FLAG_PROXY_NON_HAUSDORFF = "proxy-non-Hausdorff"
FLAG_RESONANT = "resonant"


def obstruction(f: FourierSeries2D) -> tuple[Fraction, Fraction]:
    """The coefficient at (0, 0): the mean value of f.

    This is the only obstruction to solving Xg = f mode-wise, and the class
    of the corresponding 1-form in the Hausdorff quotient of degree-one
    cohomology.
    """
    if f.two_pi_i_pow or f.divisor_pow:
        raise ValueError("obstruction is defined for plain series")
    return f.coeffs.get((0, 0), (Fraction(0), Fraction(0)))


@dataclass(frozen=True)
class PrimitiveSolution:
    """A primitive g with Xg = f, plus conditioning data.

    ``amplification_sq`` is the exact square of max|g| / (max|f| / 2*pi),
    i.e. the 2*pi-free part of the amplification ratio; ``amplification``
    renders the full ratio (including the 1/(2*pi)) as a decimal string.
    """

    g: FourierSeries2D
    min_divisor_used: Interval
    amplification: str
    amplification_sq: Interval  # exact interval for (2*pi*amplification)^2

    def round_trip_exact(self, f: FourierSeries2D, slope: Slope) -> bool:
        from .fourier import apply_X

        return apply_X(self.g, slope) == f


def _abs_sq(value: tuple[Fraction, Fraction]) -> Fraction:
    re, im = value
    return re * re + im * im


def solve_primitive(f: FourierSeries2D, slope: Slope, digits: int = 50) -> PrimitiveSolution:
    """Divide coefficient-wise by the symbolic 2*pi*i*(m + alpha*n).

    Requires a vanishing mean value and no nonzero coefficient on a resonant
    mode; raises `Obstructed` / `Resonant` otherwise (the resonance error
    reports the lexicographically first offending mode).  The returned g
    carries the inverse factors symbolically, so apply_X(g) == f exactly.
    """
    if f.two_pi_i_pow or f.divisor_pow:
        raise ValueError("solve_primitive expects a plain series")
    mean = obstruction(f)
    if mean != (Fraction(0), Fraction(0)):
        raise Obstructed(mean)
    divisors = {}
    for mode in sorted(f.coeffs):
        div = slope.divisor(*mode)
        if div.is_zero():
            raise Resonant(*mode)
        divisors[mode] = div
    g = FourierSeries2D(
        dict(f.coeffs),
        two_pi_i_pow=-1,
        divisor_pow=-1,
        slope=slope,
    )
    min_div = None
    for mode, div in divisors.items():
        if min_div is None or div.cmp_abs(min_div) < 0:
            min_div = div
    # amplification: the max-|coefficient| ratio; 2*pi cancels out of the
    # mode-wise ratios, which are compared as exact squares.  The max of
    # values enclosed in intervals is enclosed by the endpoint-wise max.
    max_f_sq = max(_abs_sq(v) for v in f.coeffs.values())
    best_ratio_sq: Interval | None = None
    for mode, value in f.coeffs.items():
        d_abs = divisors[mode].abs_bounds()
        if d_abs.lo <= 0:
            raise PrecisionExhausted(f"divisor enclosure at {mode} touches zero")
        num = _abs_sq(value)
        ratio = Interval(num / (d_abs.hi * d_abs.hi), num / (d_abs.lo * d_abs.lo))
        best_ratio_sq = ratio if best_ratio_sq is None else _interval_max(ratio, best_ratio_sq)
    amp_sq = Interval(best_ratio_sq.lo / max_f_sq, best_ratio_sq.hi / max_f_sq)
    with mpmath.workdps(digits + 15):
        mid = amp_sq.midpoint
        amp_val = mpmath.sqrt(mpmath.mpf(mid.numerator) / mid.denominator) / (2 * mpmath.pi)
        amp_str = mpmath.nstr(amp_val, digits, strip_zeros=False)
    return PrimitiveSolution(
        g=g,
        min_divisor_used=abs(min_div.enclosure(digits)),
        amplification=amp_str,
        amplification_sq=amp_sq,
    )


def _interval_max(a: Interval, b: Interval) -> Interval:
    return Interval(max(a.lo, b.lo), max(a.hi, b.hi))


# ---------------------------------------------------------------------------
# resonant modes and truncated dimensions


def resonant_count(slope: Slope, N: int) -> int:
    """Number of modes with m + alpha*n = 0 in the ball |m|+|n| <= N.

    Exact: 2*floor(N/(|p|+q)) + 1 for a reduced rational p/q (the mode
    lattice line through (-p, q), including the origin), and 1 for a
    certified-irrational slope.  Enclosure slopes are scanned mode by mode;
    an enclosure that cannot decide a resonance raises `PrecisionExhausted`.
    """
    if N < 0:
        raise ValueError("radius must be nonnegative")
    if slope.certified_irrational():
        return 1
    if slope.is_rational():
        value = slope.exact_value()
        if isinstance(value, QuadSurd):
            value = value.rational_value()
        p, q = value.numerator, value.denominator
        return 2 * (N // (abs(p) + q)) + 1
    count = 1  # the origin
    iv = slope.enclosure()
    for n in range(1, N + 1):
        lo = (iv.lo * n).__ceil__()
        hi = (iv.hi * n).__floor__()
        for m_res in range(lo, hi + 1):
            if abs(m_res) + n <= N:
                d = slope.divisor(-m_res, n)
                d.is_zero()  # raises PrecisionExhausted unless a true point zero
                count += 2  # (m, n) and (-m, -n)
    return count


@dataclass(frozen=True)
class CohomologyReport:
    """Truncated dimensions plus the gap-decay Hausdorffness proxy."""

    slope_literal: str
    radius: int
    dim_h0: int
    dim_h1: int
    gap: SmallDivisorGap
    hausdorff_flag: str


def truncated_cohomology(slope: Slope, N: int, threshold: float = 2.0) -> CohomologyReport:
    """Dimensions of kernel and cokernel on the mode ball |m|+|n| <= N.

    The multiplication operator is diagonal, so both dimensions equal the
    resonant-mode count exactly.  The flag is 'resonant' for rational slopes;
    otherwise the gap-decay exponent over radii {N/4, N/2, N} decides between
    'proxy-Hausdorff' and 'proxy-non-Hausdorff'.
    """
    if N < 1:
        raise ValueError("radius must be >= 1")
    dims = resonant_count(slope, N)
    if slope.is_rational():
        flag = FLAG_RESONANT
        g = gap(slope, N)
    else:
        g = gap(slope, N)
        radii = sorted({max(1, N // 4), max(1, N // 2), N})
        if len(radii) >= 2:
            fit = estimate_exponent(slope, radii, threshold=threshold)
            flag = FLAG_PROXY_NON_HAUSDORFF if fit.superpolynomial else FLAG_PROXY_HAUSDORFF
        else:
            flag = FLAG_PROXY_HAUSDORFF  # radius too small for a two-point fit
    return CohomologyReport(
        slope_literal=slope.literal(),
        radius=N,
        dim_h0=dims,
        dim_h1=dims,
        gap=g,
        hausdorff_flag=flag,
    )
