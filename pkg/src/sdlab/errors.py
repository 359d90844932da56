"""Exception types shared across the package.

Every error that can surface through the CLI carries a ``payload()`` giving
the error name verbatim plus its witness data, so reports can embed failures
without rewording them.
"""

from __future__ import annotations


class SmallDivisorError(Exception):
    """Base class for domain errors raised by this package."""

    def payload(self) -> dict:
        return {"error": type(self).__name__, "detail": str(self)}


class PrecisionExhausted(SmallDivisorError):
    """An enclosure was too wide to resolve a sign, floor or comparison.

    Raised instead of silently rounding: callers either retry at a higher
    truncation cap / tighter radius or report the failure.
    """


class IrrationalRequired(SmallDivisorError):
    """An operation defined only for irrational slopes got a rational one."""


class ResonantSlope(SmallDivisorError):
    """A gap scan hit an exact zero divisor, so a log-log fit is undefined."""


class Obstructed(SmallDivisorError):
    """The cohomological equation has a nonzero mean-value obstruction."""

    def __init__(self, value):
        self.value = value
        super().__init__(f"nonzero coefficient at (0, 0): {value[0]}+{value[1]}i")

    def payload(self) -> dict:
        return {
            "error": "Obstructed",
            "value": {"re": str(self.value[0]), "im": str(self.value[1])},
        }


class Resonant(SmallDivisorError):
    """A nonzero coefficient sits on an exactly-zero divisor."""

    def __init__(self, m: int, n: int):
        self.m = m
        self.n = n
        super().__init__(f"zero divisor at mode ({m}, {n})")

    def payload(self) -> dict:
        return {"error": "Resonant", "m": self.m, "n": self.n}


class NotFound(SmallDivisorError):
    """A witness search ran out of certified convergents.

    For the definition-form search this is a report, not a failure:
    ``find_witness_definition`` returns the instance instead of raising it.
    The family-form search raises it, tagged with the exponent that failed.
    """

    def __init__(self, p: int | None = None, depth_searched: int | None = None):
        self.p = p
        self.depth_searched = depth_searched
        where = f"p={p}" if p is not None else "witness"
        super().__init__(f"no certified pair for {where} within depth {depth_searched}")

    def payload(self) -> dict:
        out: dict = {"error": "NotFound"}
        if self.p is not None:
            out["p"] = self.p
        if self.depth_searched is not None:
            out["depth_searched"] = self.depth_searched
        return out


class NotLiouvilleEvidence(SmallDivisorError):
    """Family construction failed: the slope shows no fast approximations.

    Wraps the exponent at which the pair search gave up.  Absence of a pair
    never proves the slope non-Liouville; it only bounds the evidence found.
    """

    def __init__(self, p: int, depth_searched: int | None = None):
        self.p = p
        self.depth_searched = depth_searched
        super().__init__(f"no family pair for p={p} within depth {depth_searched}")

    def payload(self) -> dict:
        out: dict = {"error": "NotLiouvilleEvidence", "p": self.p}
        if self.depth_searched is not None:
            out["depth_searched"] = self.depth_searched
        return out


class BoundViolated(SmallDivisorError):
    """A family certificate check failed, with the offending witness."""

    def __init__(self, p=None, t=None, a=None, j=None, detail: str = ""):
        self.p = p
        self.t = t
        self.a = a
        self.j = j
        super().__init__(detail or f"bound violated at (p={p}, t={t}, a={a}, j={j})")

    def payload(self) -> dict:
        return {
            "error": "BoundViolated",
            "p": self.p,
            "t": None if self.t is None else str(self.t),
            "a": self.a,
            "j": self.j,
            "detail": str(self),
        }
