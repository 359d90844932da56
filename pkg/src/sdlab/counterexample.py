"""A time family of exactly solvable coefficients with unbounded primitives.

The construction: pick, for each exponent p = 2..P, a certified pair
(m_p, n_p) with |m_p + alpha*n_p| <= (|m_p| + |n_p|)^-p and n_p >= p, and
place on that single mode the coefficient

    f_t(m_p, n_p) = (m_p + alpha*n_p) * (|m_p| + |n_p|) * rho(2*s_p*(t - 1/p)),

where rho is the canonical even bump exp(1 - 1/(1 - u^2)) on (-1, 1) and
s_p = p*(p + 1).  The factor 2 in the argument pins the support at exponent
p to exactly [1/p - 1/(2*s_p), 1/p + 1/(2*s_p)]: these windows are pairwise
disjoint, whereas the un-rescaled argument would double their width and make
consecutive windows overlap.  At every time at most one mode is active, so
each time slice is solvable outright -- the primitive has the single
coefficient (|m_p| + |n_p|) * rho(...) -- but the primitives' sup grows like
|m_p| + |n_p| as t walks down toward 0, so no bounded (let alone continuous)
family of primitives exists on any window around 0.

Division by m + alpha*n here follows the bare-divisor convention, without
the 2*pi*i of the derivative's coefficient law; the missing constant scales
every primitive uniformly and changes nothing about (un)boundedness.  Report
payloads state the convention, and the round-trip checks reconcile the two
via a formal 2*pi*i shift.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

from .diophantine import (
    ApproximationWitness,
    BOUND_FAMILY,
    DEFAULT_DEPTH,
    Slope,
    find_family_pairs,
    parse_slope,
)
from .errors import BoundViolated, NotFound, NotLiouvilleEvidence
from .exact import Interval, render_fraction
from .fourier import FourierSeries2D

CANONICAL_BUMP = "exp-reciprocal-even"


# ---------------------------------------------------------------------------
# the canonical bump and its derivatives

# rho(u) = exp(1 - 1/(1 - u^2)) for |u| < 1, 0 outside.  Derivatives factor
# as rho^(a)(u) = S_a(u) / (1 - u^2)^(2a) * rho(u) with integer-coefficient
# polynomials S_a, generated once per order.


@lru_cache(maxsize=None)
def _bump_poly_coeffs(a: int) -> tuple[int, ...]:
    """Coefficients (ascending) of S_a in rho^(a) = S_a/(1-u^2)^(2a) * rho."""
    import sympy

    u = sympy.Symbol("u")
    w_prime = sympy. diff(1 - 1 / (1 - u**2), u)
    r = sympy.Integer(1)
    for _ in range(a):
        r = sympy.diff(r, u) + r * w_prime
        r = sympy.cancel(r)
    s = sympy.expand(sympy.cancel(r * (1 - u**2) ** (2 * a)))
    poly = sympy.Poly(s, u)
    coeffs = [int(c) for c in reversed(poly.all_coeffs())] if a else [1]
    return tuple(coeffs)


def _poly_eval(coeffs: tuple[int, ...], u: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * u + c
    return acc


@lru_cache(maxsize=None)
def _bump_value_cached(u: Fraction, digits: int) -> Fraction:
    # exp(1 - 1/(1-u^2)) rendered to a rational at the working precision
    v = Fraction(1) / (1 - u * u) - 1  # positive for 0 < |u| < 1
    with mpmath.workdps(digits + 15):
        val = mpmath.exp(-mpmath.mpf(v.numerator) / v.denominator)
        return Fraction(mpmath.nstr(val, digits + 5, strip_zeros=False))


@dataclass(frozen=True)
class BumpSpec:
    """The canonical even bump: support [-1, 1], maximum 1 at 0.

    Values at rational arguments are exact at 0 and outside the open support;
    elsewhere they are half-even renderings at the working precision, used
    consistently so algebraic round-trips cancel exactly.
    """

    kind: str = CANONICAL_BUMP

    def __post_init__(self):
        if self.kind != CANONICAL_BUMP:
            raise ValueError(f"unknown bump kind {self.kind!r}")

    def value(self, u: Fraction, digits: int = 60) -> Fraction:
        u = Fraction(u)
        if abs(u) >= 1:
            return Fraction(0)
        if u == 0:
            return Fraction(1)
        return _bump_value_cached(abs(u), digits)

    def derivative(self, a: int, u: Fraction, digits: int = 60) -> Fraction:
        """Value of the a-th derivative at a rational point."""
        if a < 0:
            raise ValueError("derivative order must be nonnegative")
        u = Fraction(u)
        if abs(u) >= 1:
            return Fraction(0)
        if a == 0:
            return self.value(u, digits)
        prefactor = _poly_eval(_bump_poly_coeffs(a), u) / (1 - u * u) ** (2 * a)
        return prefactor * self.value(u, digits)

    def derivative_sup_bound(self, a: int) -> Fraction:
        """A rigorous rational upper bound for sup |rho^(a)| on [-1, 1].

        With z = 1/(1 - u^2) >= 1 the derivative is S_a(u) * z^(2a) *
        exp(1 - z); |S_a| is bounded by its coefficient-magnitude sum on
        [-1, 1] and sup_z z^(2a) e^(1-z) = (2a)^(2a) e^(1-2a), which is
        over-approximated using e > 5/2.
        """
        if a == 0:
            return Fraction(1)
        coeff_sum = sum(abs(c) for c in _bump_poly_coeffs(a))
        z_part = Fraction((2 * a) ** (2 * a)) * 3 * Fraction(2, 5) ** (2 * a)
        return Fraction(coeff_sum) * z_part


# ---------------------------------------------------------------------------
# the family


def _time_scale(p: int) -> int:
    return p * (p + 1)


def _support_window(p: int) -> tuple[Fraction, Fraction]:
    half = Fraction(1, 2 * _time_scale(p))
    center = Fraction(1, p)
    return (center - half, center + half)


@dataclass(frozen=True)
class FamilySpec:
    """The certified data of one family: slope, pairs, bump.

    Invariants re-checked by ``validate``: each pair passes its family bound
    with n_p >= p, pairs are pairwise distinct, and the closed support
    windows are pairwise disjoint up to shared endpoints where the bump
    vanishes (consecutive windows [1/p +- 1/(2p(p+1))] touch only in the
    degenerate sense 1/p + ... <= 1/(p-1) - ...).
    """

    slope: Slope
    pairs: tuple[ApproximationWitness, ...]
    bump: BumpSpec

    def __post_init__(self):
        self.validate()

    @property
    def exponents(self) -> list[int]:
        return [w.p for w in self.pairs]

    def pair(self, p: int) -> ApproximationWitness:
        for w in self.pairs:
            if w.p == p:
                return w
        raise KeyError(f"no pair at exponent {p}")

    def validate(self):
        seen = set()
        for w in self.pairs:
            if w.bound_form != BOUND_FAMILY:
                raise BoundViolated(p=w.p, detail=f"pair at p={w.p} not in family form")
            if (w.m, w.n) in seen:
                raise BoundViolated(p=w.p, detail=f"pair ({w.m}, {w.n}) repeated")
            seen.add((w.m, w.n))
            if w.n < w.p:
                raise BoundViolated(p=w.p, detail=f"n_p = {w.n} < p = {w.p}")
            div = self.slope.divisor(w.m, w.n)
            bound = Fraction(1, (abs(w.m) + abs(w.n)) ** w.p)
            if not div.abs_bounds().hi <= bound:
                raise BoundViolated(
                    p=w.p,
                    detail=f"|{w.m} + alpha*{w.n}| up to {div.abs_bounds().hi} exceeds {bound}",
                )
        windows = sorted(_support_window(p) for p in self.exponents)
        for (lo1, hi1), (lo2, hi2) in zip(windows, windows[1:]):
            if hi1 > lo2:
                raise BoundViolated(detail=f"support windows overlap: {hi1} > {lo2}")

    def weight(self, p: int) -> int:
        w = self.pair(p)
        return abs(w.m) + abs(w.n)

    def active_exponent(self, t: Fraction) -> int | None:
        """The unique p whose open support window contains t, if any."""
        t = Fraction(t)
        for p in self.exponents:
            lo, hi = _support_window(p)
            if lo < t < hi:
                return p
        return None

    def to_json_dict(self) -> dict:
        return {
            "slope": self.slope.literal(),
            "bump": self.bump.kind,
            "pairs": [
                {"p": w.p, "m": str(w.m), "n": str(w.n), "level": w.level}
                for w in self.pairs
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict, depth: int = DEFAULT_DEPTH) -> "FamilySpec":
        slope = parse_slope(data["slope"])
        pairs = []
        for row in data["pairs"]:
            p, m, n = int(row["p"]), int(row["m"]), int(row["n"])
            div = slope.divisor(m, n)
            bound = Fraction(1, (abs(m) + abs(n)) ** p)
            if div.abs_bounds().hi > bound or n < p:
                raise BoundViolated(p=p, detail=f"stored pair ({m}, {n}) fails certification")
            pairs.append(
                ApproximationWitness(
                    p=p,
                    m=m,
                    n=n,
                    divisor=div.abs_bounds(),
                    bound_form=BOUND_FAMILY,
                    level=int(row.get("level", -1)),
                )
            )
        return cls(slope=slope, pairs=tuple(pairs), bump=BumpSpec(data.get("bump", CANONICAL_BUMP)))


def family_to_json(spec: FamilySpec) -> str:
    return json.dumps(spec.to_json_dict(), sort_keys=True, indent=2)


def family_from_json(text: str) -> FamilySpec:
    return FamilySpec.from_json_dict(json.loads(text))


def build_family(slope: Slope, P: int, depth: int = DEFAULT_DEPTH) -> FamilySpec:
    """Search certified pairs for p = 2..P and assemble the family.

    Propagates the failing exponent inside `NotLiouvilleEvidence` when the
    convergent search comes up empty (expected for badly approximable
    slopes: absence of a pair is evidence, not proof).
    """
    try:
        pairs = find_family_pairs(slope, P, depth=depth)
    except NotFound as missing:
        raise NotLiouvilleEvidence(p=missing.p, depth_searched=missing.depth_searched) from missing
    return FamilySpec(slope=slope, pairs=tuple(pairs), bump=BumpSpec())


# ---------------------------------------------------------------------------
# coefficients, slices, primitives


def family_series(spec: FamilySpec, t: Fraction, digits: int = 60) -> FourierSeries2D:
    """The time slice f_t as a series carrying one formal divisor factor.

    The stored rational at (m_p, n_p) is (|m_p|+|n_p|) * rho(s_p*(t - 1/p));
    the amplitude's divisor factor stays symbolic so exactness survives the
    solve / re-derive round trip.
    """
    t = Fraction(t)
    coeffs = {}
    for w in spec.pairs:
        u = 2 * _time_scale(w.p) * (t - Fraction(1, w.p))
        rho = spec.bump.value(u, digits)
        if rho:
            coeffs[(w.m, w.n)] = (Fraction(abs(w.m) + abs(w.n)) * rho, Fraction(0))
    return FourierSeries2D(coeffs, divisor_pow=1, slope=spec.slope)


def family_coefficient(
    spec: FamilySpec, p: int, t: Fraction, a: int = 0, digits: int = 60, max_order: int = 8
) -> Interval:
    """Enclosure of the a-th time derivative of the coefficient at (m_p, n_p).

    Closed form: (m_p + alpha*n_p) * (|m_p|+|n_p|) * (2*s_p)^a * rho^(a)(u)
    at u = 2*s_p*(t - 1/p); exactly zero outside the support window.
    """
    if a > max_order:
        raise ValueError(f"derivative order {a} exceeds the configured maximum {max_order}")
    w = spec.pair(p)
    t = Fraction(t)
    s = _time_scale(p)
    u = 2 * s * (t - Fraction(1, p))
    rho_a = spec.bump.derivative(a, u, digits)
    if rho_a == 0 and abs(u) >= 1:
        return Interval.point(0)
    scalar = Fraction(abs(w.m) + abs(w.n)) * Fraction(2 * s) ** a * rho_a
    return spec.slope.divisor(w.m, w.n).bounds * scalar


@dataclass(frozen=True)
class FamilySample:
    """One time slice of the primitives g_t (bare-divisor convention)."""

    t: Fraction
    series: FourierSeries2D
    active_p: int | None


def solve_family(spec: FamilySpec, t: Fraction, digits: int = 60) -> FamilySample:
    """The primitive's coefficients at time t: (|m_p|+|n_p|) * rho(s_p*(t-1/p)).

    The divisor cancels against the amplitude, so the result is a plain
    series; disjoint support windows force at most one nonzero coefficient,
    which is asserted.
    """
    t = Fraction(t)
    coeffs = {}
    for w in spec.pairs:
        u = 2 * _time_scale(w.p) * (t - Fraction(1, w.p))
        rho = spec.bump.value(u, digits)
        if rho:
            coeffs[(w.m, w.n)] = (Fraction(abs(w.m) + abs(w.n)) * rho, Fraction(0))
    assert len(coeffs) <= 1, "support windows are disjoint, at most one active mode"
    return FamilySample(t=t, series=FourierSeries2D(coeffs), active_p=spec.active_exponent(t))


# ---------------------------------------------------------------------------
# smoothness certificate

_SAMPLED_SUP_SLACK = Fraction(1, 8)  # headroom so denser resampling stays below


@dataclass(frozen=True)
class SmoothnessEntry:
    a: int
    j: int
    sampled_sup: Fraction
    tail_bound: Fraction
    constant: Fraction  # max(sampled*(1+slack), tail)


@dataclass(frozen=True)
class SmoothnessCertificate:
    interval: tuple[Fraction, Fraction]
    samples: int
    entries: tuple[SmoothnessEntry, ...]
    rho_sup_bounds: dict

    def constant(self, a: int, j: int) -> Fraction:
        for e in self.entries:
            if (e.a, e.j) == (a, j):
                return e.constant
        raise KeyError((a, j))


def _sample_grid(spec: FamilySpec, lo: Fraction, hi: Fraction, samples: int) -> list[Fraction]:
    if samples < 2:
        raise ValueError("need at least two samples")
    step = (hi - lo) / (samples - 1)
    grid = [lo + k * step for k in range(samples)]
    # pin the analytically known extrema: window centers and edges
    for p in spec.exponents:
        wlo, whi = _support_window(p)
        for t in (Fraction(1, p), wlo, whi):
            if lo <= t <= hi:
                grid.append(t)
    return sorted(set(grid))


def _tail_envelope(a: int, j: int, P: int, rho_bound: Fraction) -> Fraction:
    """Rigorous sup over all uninstantiated exponents p > P.

    Any valid family pair at exponent p has |coefficient| <=
    (|m|+|n|)^(1-p), |m|+|n| >= n >= p and time scale p(p+1), so the
    j-weighted a-th derivative is at most rho_bound * (p(p+1))^a * p^(1+j-p).
    Finiteness needs every uninstantiated exponent to exceed j, hence P >= j.
    """
    if P < j:
        raise ValueError(
            f"family instantiates p <= {P} but the tail at weight j={j} "
            "needs every uninstantiated exponent to exceed j"
        )
    best = Fraction(0)
    p = P + 1
    while True:
        term = rho_bound * Fraction(2 * p * (p + 1)) ** a * Fraction(p) ** (1 + j - p)
        best = max(best, term)
        # terms decay once p is past the polynomial factors; stop when the
        # next term provably stays below the running max
        nxt = rho_bound * Fraction(2 * (p + 1) * (p + 2)) ** a * Fraction(p + 1) ** (1 + j - p - 1)
        if nxt < best and p > max(2 * a + j + 4, P + 4):
            return best
        p += 1


def verify_smoothness(
    spec: FamilySpec,
    a_max: int,
    j_max: int,
    interval: tuple[Fraction, Fraction],
    samples: int = 256,
    digits: int = 60,
) -> SmoothnessCertificate:
    """Certify finite constants c(I, a, j) bounding the weighted derivatives.

    For each a <= a_max, j <= j_max the certificate combines a sampled sup
    over the instantiated pairs (with slack 1/8 so a denser grid cannot
    overtake it) with a rigorous analytic envelope covering every exponent
    beyond those instantiated.  Raises `BoundViolated` if a pair fails its
    re-verified divisor bound or two windows overlap a sampled time.
    """
    lo, hi = Fraction(interval[0]), Fraction(interval[1])
    if lo >= hi:
        raise ValueError("interval must be nondegenerate with rational endpoints")
    spec.validate()  # BoundViolated on tampered specs
    P = max(spec.exponents)
    grid = _sample_grid(spec, lo, hi, samples)
    # supports of all exponents (instantiated or not) live in (0, 7/12]
    tail_reachable = hi > 0 and lo <= _support_window(P + 1)[1]
    entries = []
    rho_bounds = {a: spec.bump.derivative_sup_bound(a) for a in range(a_max + 1)}
    for a in range(a_max + 1):
        # weighted sampled values, reused across j
        per_pair: dict[int, list[tuple[Fraction, Fraction]]] = {}
        for t in grid:
            active = [p for p in spec.exponents if _support_window(p)[0] < t < _support_window(p)[1]]
            if len(active) > 1:
                raise BoundViolated(p=active[0], t=t, a=a, detail="two windows active at once")
            for p in active:
                val = abs(family_coefficient(spec, p, t, a, digits)).hi
                per_pair.setdefault(p, []).append((t, val))
        for j in range(j_max + 1):
            sampled = Fraction(0)
            for p, values in per_pair.items():
                weight = Fraction(spec.weight(p)) ** j
                for _t, val in values:
                    sampled = max(sampled, val * weight)
            tail = _tail_envelope(a, j, P, rho_bounds[a]) if tail_reachable else Fraction(0)
            constant = max(sampled * (1 + _SAMPLED_SUP_SLACK), tail)
            entries.append(
                SmoothnessEntry(a=a, j=j, sampled_sup=sampled, tail_bound=tail, constant=constant)
            )
    return SmoothnessCertificate(
        interval=(lo, hi),
        samples=samples,
        entries=tuple(entries),
        rho_sup_bounds={a: str(b) for a, b in rho_bounds.items()},
    )


# ---------------------------------------------------------------------------
# blow-up profile


@dataclass(frozen=True)
class BlowupEntry:
    p: int
    m: int
    n: int
    weight: int  # |m| + |n|
    sup: Fraction  # sup over t in I of |g_t| at the pair's mode
    sup_is_weight: bool  # the sup is attained exactly (1/p inside I)


@dataclass(frozen=True)
class BlowupReport:
    """Per-exponent suprema of the primitives over a time window.

    When the window contains 1/p the supremum is exactly |m_p| + |n_p| (the
    bump attains 1); the entries are then strictly increasing in p, and a
    window containing 0 would keep collecting such exponents indefinitely --
    recorded as the unboundedness verdict.  Values use the bare-divisor
    convention; dividing by 2*pi gives the derivative-normalized variant.
    """

    interval: tuple[Fraction, Fraction]
    entries: tuple[BlowupEntry, ...]
    contains_zero: bool
    strictly_increasing: bool
    unbounded_verdict: bool


def blowup_profile(spec: FamilySpec, interval: tuple[Fraction, Fraction], digits: int = 60) -> BlowupReport:
    lo, hi = Fraction(interval[0]), Fraction(interval[1])
    if lo > hi:
        raise ValueError("empty interval")
    entries = []
    for w in spec.pairs:
        weight = abs(w.m) + abs(w.n)
        wlo, whi = _support_window(w.p)
        center = Fraction(1, w.p)
        if lo <= center <= hi:
            sup, exact_hit = Fraction(weight), True
        elif hi < wlo or lo > whi:
            sup, exact_hit = Fraction(0), False
        else:
            # overlap on one side: the bump is monotone toward the center,
            # so the sup sits at the window endpoint nearest 1/p
            t_star = hi if hi < center else lo
            u = 2 * _time_scale(w.p) * (t_star - center)
            sup, exact_hit = weight * spec.bump.value(u, digits), False
        entries.append(
            BlowupEntry(p=w.p, m=w.m, n=w.n, weight=weight, sup=sup, sup_is_weight=exact_hit)
        )
    nonzero = [e.sup for e in entries if e.sup > 0]
    increasing = all(b > a for a, b in zip(nonzero, nonzero[1:]))
    contains_zero = lo <= 0 <= hi
    return BlowupReport(
        interval=(lo, hi),
        entries=tuple(entries),
        contains_zero=contains_zero,
        strictly_increasing=increasing,
        unbounded_verdict=contains_zero,
    )
