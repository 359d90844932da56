"""Slopes, continued fractions, approximation witnesses and small-divisor gaps.

A slope is the direction of a linear flow on the 2-torus.  Four exact
representations are supported:

* ``RationalSlope``      -- p/q in lowest terms (resonant lines, closed leaves);
* ``QuadraticSlope``     -- (a + b*sqrt(d))/c, exact field arithmetic, the
                            badly-approximable regime;
* ``LiouvilleSlope``     -- the base-10 factorial series sum(10^-k!) truncated
                            at a cap, enclosed together with a rigorous tail
                            bound, the well-approximable regime;
* ``EnclosureSlope``     -- a decimal center with an explicit radius.

Every derived quantity (divisor m + alpha*n, convergent error, gap) is either
exact or a rigorous rational interval; comparisons that an enclosure cannot
decide raise `PrecisionExhausted` rather than rounding.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import IrrationalRequired, NotFound, PrecisionExhausted, ResonantSlope
from .exact import (
    ExactReal,
    Interval,
    QuadSurd,
    exact_abs,
    exact_enclosure,
    exact_floor,
    exact_sign,
    render_fraction,
)

DEFAULT_DEPTH = 40
DEFAULT_LIOUVILLE_CAP = 5


# ---------------------------------------------------------------------------
# slope variants


class Slope:
    """Common surface of the slope variants."""

    def exact_value(self) -> ExactReal | None:
        """The exact value when one exists, else None."""
        return None

    def enclosure(self, digits: int = 60) -> Interval:
        raise NotImplementedError

    def is_rational(self) -> bool:
        """True only when the slope is exactly rational."""
        return False

    def certified_irrational(self) -> bool:
        """True only when irrationality is provable from the representation."""
        return False

    def literal(self) -> str:
        raise NotImplementedError

    def divisor(self, m: int, n: int) -> "Divisor":
        """The quantity m + alpha*n with exactness carried along."""
        value = self.exact_value()
        if value is not None:
            v = m + value * n
            return Divisor(m=m, n=n, exact=v, bounds=exact_enclosure(v))
        iv = self.enclosure()
        return Divisor(m=m, n=n, exact=None, bounds=iv * n + m)

    def __str__(self):
        return self.literal()


@dataclass(frozen=True)
class RationalSlope(Slope):
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))

    def exact_value(self):
        return self.value

    def enclosure(self, digits: int = 60) -> Interval:
        return Interval.point(self.value)

    def is_rational(self):
        return True

    def literal(self):
        return f"rational:{self.value.numerator}/{self.value.denominator}"


@dataclass(frozen=True)
class QuadraticSlope(Slope):
    """(a + b*sqrt(d)) / c with integer a, b, c and non-square d; b, c != 0."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.c == 0:
            raise ValueError("zero denominator")
        if self.b == 0:
            raise ValueError("use rational: for slopes without a radical part")
        if self.c < 0:
            object.__setattr__(self, "a", -self.a)
            object.__setattr__(self, "b", -self.b)
            object.__setattr__(self, "c", -self.c)
        QuadSurd(Fraction(self.a), Fraction(self.b), self.d)  # validates d

    @property
    def surd(self) -> QuadSurd:
        return QuadSurd(Fraction(self.a, self.c), Fraction(self.b, self.c), self.d)

    def exact_value(self):
        return self.surd

    def enclosure(self, digits: int = 60) -> Interval:
        return self.surd.enclosure(digits)

    def certified_irrational(self):
        return True  # b != 0 and d is not a perfect square

    def literal(self):
        sign = "+" if self.b >= 0 else "-"
        return f"quadratic:({self.a}{sign}{abs(self.b)}*sqrt{self.d})/{self.c}"


@lru_cache(maxsize=None)
def _liouville_truncation(cap: int) -> Fraction:
    return sum((Fraction(1, 10 ** math.factorial(k)) for k in range(1, cap + 1)), Fraction(0))


@dataclass(frozen=True)
class LiouvilleSlope(Slope):
    """sum_{k>=1} 10^-k! enclosed by its truncation at level ``cap``.

    The discarded tail lies strictly between 10^-(cap+1)! and 2*10^-(cap+1)!,
    so the constant is enclosed in [T + 10^-(cap+1)!, T + 2*10^-(cap+1)!].
    """

    cap: int

    def __post_init__(self):
        if self.cap < 1:
            raise ValueError("cap must be a positive integer")
        if self.cap > 8:
            raise ValueError("cap > 8 exceeds desk scale (exponent 9! = 362880)")

    def enclosure(self, digits: int = 60) -> Interval:
        t = _liouville_truncation(self.cap)
        unit = Fraction(1, 10 ** math.factorial(self.cap + 1))
        return Interval(t + unit, t + 2 * unit)

    def certified_irrational(self):
        # the represented constant is classically irrational, and no rational
        # lies in every enclosure as the cap grows; the enclosure at the
        # stored cap excludes all rationals of height up to ~10^(cap!)
        return True

    def literal(self):
        return f"liouville10:cap={self.cap}"


@dataclass(frozen=True)
class EnclosureSlope(Slope):
    center: Fraction
    radius: Fraction

    def __post_init__(self):
        object.__setattr__(self, "center", Fraction(self.center))
        object.__setattr__(self, "radius", Fraction(self.radius))
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")

    def exact_value(self):
        return self.center if self.radius == 0 else None

    def enclosure(self, digits: int = 60) -> Interval:
        return Interval(self.center - self.radius, self.center + self.radius)

    def is_rational(self):
        return self.radius == 0

    def excludes_rationals_of_height(self, height: int) -> bool:
        """True when no p/q with q <= height lies inside the enclosure."""
        if self.radius == 0:
            return False
        iv = self.enclosure()
        for q in range(1, height + 1):
            if (iv.lo * q).__ceil__() <= (iv.hi * q).__floor__():
                return False
        return True

    def literal(self):
        c = render_fraction(self.center, 50)
        r = render_fraction(self.radius, 10)
        return f"decimal:{c}:r={r}"


_QUAD_RE = re.compile(
    r"^\(\s*(-?\d+)\s*([+-])\s*(\d+)\s*\*\s*sqrt\s*(\d+)\s*\)\s*/\s*(-?\d+)$"
)


def parse_slope(text: str, default_cap: int = DEFAULT_LIOUVILLE_CAP) -> Slope:
    """Parse a slope literal.

    Grammar: ``rational:22/7``, ``quadratic:(1+1*sqrt5)/2``,
    ``liouville10:cap=5`` (or bare ``liouville10``),
    ``decimal:0.1100010000:r=1e-12``.
    """
    kind, _, rest = text.partition(":")
    kind = kind.strip()
    rest = rest.strip()
    if kind == "rational":
        return RationalSlope(Fraction(rest))
    if kind == "quadratic":
        m = _QUAD_RE.match(rest)
        if not m:
            raise ValueError(f"malformed quadratic literal: {text!r}")
        a, sgn, b, d, c = m.groups()
        b_val = int(b) if sgn == "+" else -int(b)
        return QuadraticSlope(a=int(a), b=b_val, c=int(c), d=int(d))
    if kind == "liouville10":
        if not rest:
            return LiouvilleSlope(default_cap)
        key, _, val = rest.partition("=")
        if key.strip() != "cap":
            raise ValueError(f"malformed liouville literal: {text!r}")
        return LiouvilleSlope(int(val))
    if kind == "decimal":
        center_text, _, radius_part = rest.partition(":")
        radius = Fraction(0)
        if radius_part:
            key, _, val = radius_part.partition("=")
            if key.strip() != "r":
                raise ValueError(f"malformed decimal literal: {text!r}")
            radius = Fraction(val)
        return EnclosureSlope(Fraction(center_text), radius)
    raise ValueError(f"unknown slope kind {kind!r} in {text!r}")


GOLDEN = QuadraticSlope(a=1, b=1, c=2, d=5)


# ---------------------------------------------------------------------------
# divisors


@dataclass(frozen=True)
class Divisor:
    """m + alpha*n with a rigorous enclosure and, when possible, an exact value."""

    m: int
    n: int
    exact: ExactReal | None
    bounds: Interval

    def is_zero(self) -> bool:
        if self.exact is not None:
            return exact_sign(self.exact) == 0
        return self.bounds.sign() == 0  # may raise PrecisionExhausted

    def abs_bounds(self) -> Interval:
        return abs(self.bounds)

    def abs_exact(self) -> ExactReal | None:
        return None if self.exact is None else exact_abs(self.exact)

    def enclosure(self, digits: int = 60) -> Interval:
        if self.exact is not None:
            return exact_enclosure(self.exact, digits)
        return self.bounds

    def cmp_abs(self, other: "Divisor") -> int:
        """Exact -1/0/+1 ordering of |self| against |other|."""
        a, b = self.abs_exact(), other.abs_exact()
        if a is not None and b is not None:
            if isinstance(a, QuadSurd) or isinstance(b, QuadSurd):
                diff = a - b
                return exact_sign(diff)
            return (a > b) - (a < b)
        return self.abs_bounds().cmp(other.abs_bounds())


def divisor(slope: Slope, m: int, n: int) -> Divisor:
    """Rigorous enclosure of m + alpha*n; exact for rational and quadratic slopes."""
    return slope.divisor(m, n)


# ---------------------------------------------------------------------------
# continued fractions

# Internally the Gauss map runs on one of three exact number states: Fraction
# (terminates), QuadSurd (eventually periodic, never exhausts) or Interval
# (resolves floors until the enclosure is spent).


def _gauss_steps(slope: Slope, depth: int):
    """Yield (partial_quotient, terminated_rational) pairs, at most ``depth``."""
    state = slope.exact_value()
    if state is None:
        state = slope.enclosure()
    for _ in range(depth):
        if isinstance(state, Interval):
            a = state.floor()  # raises PrecisionExhausted when spent
        else:
            a = exact_floor(state)
        frac_part = state - a
        if isinstance(frac_part, Interval):
            if frac_part.hi == 0:
                yield a, True
                return
            if frac_part.contains(0) and not frac_part.is_point:
                # cannot decide termination against continuation
                yield a, False
                raise PrecisionExhausted("fractional part straddles zero")
            yield a, False
            state = frac_part.reciprocal()
        else:
            if exact_sign(frac_part) == 0:
                yield a, True
                return
            yield a, False
            state = 1 / frac_part


def cf_expand(slope: Slope, depth: int) -> list[int]:
    """First ``depth`` partial quotients of the slope's continued fraction.

    Terminates early (shorter list) for rational slopes.  Raises
    `PrecisionExhausted` when an enclosure cannot resolve a floor within the
    requested depth.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    out = []
    for a, _terminated in _gauss_steps(slope, depth):
        out.append(a)
    return out


@dataclass(frozen=True)
class Convergent:
    """A continued-fraction truncation m/n with a rigorous error enclosure."""

    level: int
    m: int
    n: int
    error: Interval  # encloses |alpha - m/n|

    def __str__(self):
        return f"c{self.level}={self.m}/{self.n}"


def _convergent_error(slope: Slope, m: int, n: int, digits: int = 60) -> Interval:
    value = slope.exact_value()
    if value is not None:
        return exact_enclosure(exact_abs(value - Fraction(m, n)), digits)
    return abs(slope.enclosure() - Fraction(m, n))


def _iter_convergents(slope: Slope, depth: int, digits: int = 60):
    """Yield certified convergents; swallow enclosure exhaustion silently."""
    p0, q0 = 0, 1  # virtual c_{-2} = 0/1 keeps the recurrence uniform
    p1, q1 = 1, 0
    level = 0
    try:
        for a, _terminated in _gauss_steps(slope, depth):
            p0, p1 = p1, a * p1 + p0
            q0, q1 = q1, a * q1 + q0
            yield Convergent(level=level, m=p1, n=q1, error=_convergent_error(slope, p1, q1, digits))
            level += 1
    except PrecisionExhausted:
        return


def convergents(slope: Slope, depth: int) -> list[Convergent]:
    """Convergents from the standard recurrence, each with a certified error.

    Unlike the internal search iterator this propagates `PrecisionExhausted`:
    asking for more levels than the enclosure supports is a caller error.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    out = []
    p0, q0 = 0, 1
    p1, q1 = 1, 0
    for level, (a, _terminated) in enumerate(_gauss_steps(slope, depth)):
        p0, p1 = p1, a * p1 + p0
        q0, q1 = q1, a * q1 + q0
        out.append(Convergent(level=level, m=p1, n=q1, error=_convergent_error(slope, p1, q1)))
    return out


# ---------------------------------------------------------------------------
# approximation witnesses

BOUND_DEFINITION = "definition"  # |alpha - m/n| < 1/n^p
BOUND_FAMILY = "family"  # |m + alpha*n| <= (|m|+|n|)^-p


@dataclass(frozen=True)
class ApproximationWitness:
    """A pair (m, n) certifying a small divisor at exponent p.

    ``bound_form`` records which inequality was certified; the two forms are
    deliberately not interchangeable (a pair can satisfy one and fail the
    other, see the family search).
    """

    p: int
    m: int
    n: int
    divisor: Interval  # family form: |m + alpha*n|; definition form: |alpha - m/n|
    bound_form: str
    level: int  # convergent level the pair was drawn from

    def __post_init__(self):
        if self.bound_form not in (BOUND_DEFINITION, BOUND_FAMILY):
            raise ValueError(f"unknown bound form {self.bound_form!r}")
        if self.bound_form == BOUND_FAMILY and self.n < self.p:
            raise ValueError(f"family witness needs n >= p, got n={self.n}, p={self.p}")
        if self.divisor.lo < 0:
            raise ValueError("divisor enclosure must be nonnegative")
        if self.bound_form == BOUND_DEFINITION:
            certified = self.divisor.hi < self.bound  # strict, as in the definition
        else:
            certified = self.divisor.hi <= self.bound
        if not certified:
            raise ValueError(
                f"witness not certified: |divisor| up to {self.divisor.hi} vs bound {self.bound}"
            )

    @property
    def bound(self) -> Fraction:
        if self.bound_form == BOUND_DEFINITION:
            return Fraction(1, self.n**self.p)
        return Fraction(1, (abs(self.m) + abs(self.n)) ** self.p)


def find_witness_definition(slope: Slope, p: int, depth: int = DEFAULT_DEPTH):
    """Search convergents for |alpha - m/n| < 1/n^p with n > 1.

    The scan starts at convergent level p: early convergents satisfy the
    inequality trivially for small p and the deeper levels are the ones whose
    certificates carry information.  Returns an `ApproximationWitness` or a
    `NotFound` report (returned, not raised: absence within a finite search
    never proves the slope is not well-approximable).
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    if slope.is_rational():
        raise IrrationalRequired(f"definition witness needs an irrational slope, got {slope.literal()}")
    searched = 0
    for conv in _iter_convergents(slope, depth):
        searched = conv.level + 1
        if conv.level < p or conv.n <= 1:
            continue
        bound = Fraction(1, conv.n**p)
        if conv.error.hi < bound:
            return ApproximationWitness(
                p=p,
                m=conv.m,
                n=conv.n,
                divisor=conv.error,
                bound_form=BOUND_DEFINITION,
                level=conv.level,
            )
    return NotFound(p=p, depth_searched=searched)


def find_family_pairs(slope: Slope, P: int, depth: int = DEFAULT_DEPTH) -> list[ApproximationWitness]:
    """One certified pair per p = 2..P with |m + alpha*n| <= (|m|+|n|)^-p.

    For each p the scan runs over convergent levels >= p and takes the first
    unused level whose pair passes the family bound with n >= p; pairs are
    therefore pairwise distinct by construction.  The convergent level is
    recorded so callers can see how much extra depth each exponent needed.
    Raises `NotFound(p)` at the first exponent that exhausts the search.
    """
    if P < 2:
        raise ValueError("P must be >= 2")
    if not slope.certified_irrational():
        if isinstance(slope, EnclosureSlope) and slope.excludes_rationals_of_height(10**3):
            pass  # enclosure rules out all small-height rationals
        else:
            raise IrrationalRequired(
                f"family search needs a certified-irrational slope, got {slope.literal()}"
            )
    convs = list(_iter_convergents(slope, depth))
    used: set[int] = set()
    out = []
    for p in range(2, P + 1):
        hit = None
        for conv in convs:
            if conv.level < p or conv.level in used or conv.n < p:
                continue
            div = slope.divisor(-conv.m, conv.n)
            bound = Fraction(1, (abs(conv.m) + abs(conv.n)) ** p)
            if div.abs_bounds().hi <= bound:
                hit = ApproximationWitness(
                    p=p,
                    m=-conv.m,
                    n=conv.n,
                    divisor=div.abs_bounds(),
                    bound_form=BOUND_FAMILY,
                    level=conv.level,
                )
                used.add(conv.level)
                break
        if hit is None:
            raise NotFound(p=p, depth_searched=len(convs))
        out.append(hit)
    return out


# ---------------------------------------------------------------------------
# small-divisor gaps

GAP_METHODS = ("auto", "scan", "convergents")


@dataclass(frozen=True)
class SmallDivisorGap:
    """min |m + alpha*n| over the denominator ball 0 < |n| <= N (plus (1, 0)).

    For n != 0 only the nearest integer m matters (any other m gives at least
    1 - 1/2 >= the nearest candidate), so the scan is finite; the mode (1, 0)
    caps the gap at 1.  The argmin is reported canonically with n > 0, or
    (1, 0) when the cap wins, ties broken by lexicographic smallest (n, m).
    """

    radius: int
    gap: Interval
    argmin: tuple[int, int]
    exact: ExactReal | None = None
    method: str = "scan"


def _nearest_candidate(slope: Slope, n: int) -> Divisor:
    """Divisor at the integer m minimizing |m + alpha*n| for fixed n > 0."""
    value = slope.exact_value()
    if value is not None:
        target = value * n
        m = -exact_floor(target + Fraction(1, 2))
    else:
        m = -(slope.enclosure() * n + Fraction(1, 2)).floor()
    return slope.divisor(m, n)


def _better(challenger: Divisor, incumbent: Divisor | None) -> bool:
    if incumbent is None:
        return True
    c = challenger.cmp_abs(incumbent)
    if c != 0:
        return c < 0
    # equal magnitudes: lexicographic smallest (n, m) wins
    return (challenger.n, challenger.m) < (incumbent.n, incumbent.m)


def _gap_scan(slope: Slope, N: int) -> Divisor:
    best = slope.divisor(1, 0)
    for n in range(1, N + 1):
        cand = _nearest_candidate(slope, n)
        if _better(cand, best):
            best = cand
    return best


def _gap_convergents(slope: Slope, N: int) -> Divisor:
    """Largest convergent denominator <= N realizes the minimum.

    Relies on the best-approximation property of convergents; to certify that
    no deeper denominator fits, the iteration must produce a convergent with
    denominator > N (or terminate rationally) before the enclosure is spent.
    """
    best = slope.divisor(1, 0)
    certified_past_radius = False
    depth = DEFAULT_DEPTH
    while True:
        last_level = -1
        for conv in _iter_convergents(slope, depth):
            last_level = conv.level
            if conv.n > N:
                certified_past_radius = True
                break
            if conv.n >= 1:
                cand = slope.divisor(-conv.m, conv.n)
                if _better(cand, best):
                    best = cand
        else:
            if slope.is_rational() and last_level >= 0:
                certified_past_radius = True  # expansion terminated
        if certified_past_radius:
            return best
        if last_level + 1 < depth:
            raise PrecisionExhausted(
                f"convergents exhausted at level {last_level} before denominator {N}"
            )
        depth *= 2


def gap(slope: Slope, N: int, method: str = "auto") -> SmallDivisorGap:
    """Exact minimization of |m + alpha*n| over 0 < |n| <= N (and (1, 0)).

    ``method='scan'`` walks every denominator; ``method='convergents'`` jumps
    through best approximations (irrational slopes only).  ``auto`` scans for
    rational slopes and small N, else uses convergents.  Both methods return
    identical values and argmins for irrational slopes.
    """
    if N < 1:
        raise ValueError("radius must be >= 1")
    if method not in GAP_METHODS:
        raise ValueError(f"unknown method {method!r}")
    if method == "auto":
        method = "scan" if (slope.is_rational() or N <= 300) else "convergents"
    if method == "convergents" and slope.is_rational():
        method = "scan"  # rational ties make the convergent shortcut ambiguous
    best = _gap_scan(slope, N) if method == "scan" else _gap_convergents(slope, N)
    m, n = best.m, best.n
    if n < 0 or (n == 0 and m < 0):
        m, n = -m, -n
    return SmallDivisorGap(
        radius=N,
        gap=abs(best.enclosure()),
        argmin=(m, n),
        exact=best.abs_exact(),
        method=method,
    )


# ---------------------------------------------------------------------------
# decay-exponent estimate


@dataclass(frozen=True)
class ExponentFit:
    """Least-squares decay exponent of the gap against the radius.

    ``tau`` is the OLS slope of -log gap(N) on log N.  The superpolynomial
    flag is a declared heuristic: the sequence of two-point slopes (prefixed
    with a baseline slope 0, so a single steep segment can trigger) must jump
    by at least ``threshold`` between consecutive entries.
    """

    radii: tuple[int, ...]
    gaps: tuple[SmallDivisorGap, ...]
    tau: float
    residuals: tuple[float, ...]
    two_point_slopes: tuple[float, ...]
    superpolynomial: bool
    threshold: float


def _log_fraction(x: Fraction) -> float:
    return math.log(x.numerator) - math.log(x.denominator)


def estimate_exponent(
    slope: Slope,
    radii: list[int],
    threshold: float = 2.0,
    method: str = "auto",
) -> ExponentFit:
    """Fit -log gap(N) ~ tau * log N over the given radii.

    Raises `ResonantSlope` as soon as any radius sees a zero gap; the fit
    itself needs at least two radii.
    """
    if any(r < 1 for r in radii):
        raise ValueError("radii must be positive")
    if list(radii) != sorted(set(radii)):
        raise ValueError("radii must be strictly increasing")
    gaps = []
    for r in radii:
        g = gap(slope, r, method=method)
        if g.gap.hi == 0 or (g.exact is not None and exact_sign(g.exact) == 0):
            raise ResonantSlope(f"gap({r}) = 0 at mode {g.argmin} for {slope.literal()}")
        gaps.append(g)
    if len(radii) < 2:
        raise ValueError("need at least two radii for a fit")
    xs = [math.log(r) for r in radii]
    ys = [-_log_fraction(g.gap.midpoint) for g in gaps]
    xbar = sum(xs) / len(xs)
    ybar = sum(ys) / len(ys)
    sxx = sum((x - xbar) ** 2 for x in xs)
    sxy = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
    tau = sxy / sxx
    intercept = ybar - tau * xbar
    residuals = tuple(y - (intercept + tau * x) for x, y in zip(xs, ys))
    two_point = tuple(
        (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]) for i in range(len(xs) - 1)
    )
    increments = [two_point[0] - 0.0]
    increments += [two_point[i + 1] - two_point[i] for i in range(len(two_point) - 1)]
    flagged = any(inc >= threshold for inc in increments)
    return ExponentFit(
        radii=tuple(radii),
        gaps=tuple(gaps),
        tau=tau,
        residuals=residuals,
        two_point_slopes=two_point,
        superpolynomial=flagged,
        threshold=threshold,
    )
