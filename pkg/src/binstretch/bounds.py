"""Closed-form convergence arithmetic around the two game values.

Given an upper-game value u_g or an inner lower-game value, these
evaluate the published correction formulas tying them to the optimal
stretching factor: the implied lower bound

    (u - (m*sqrt(g) + 2)/g) * g/g'

and the two-sided sandwich

    l  <=  optimum  <=  (l + (m*sqrt(g) + 2)/g') * g'/g.

All arithmetic runs at 40 significant digits (Decimal); human output
rounds half-even to 4 decimals via ``render_decimal``.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction

from binstretch.lifting import inner_granularity

_PRECISION = 40


def render_decimal(x: Decimal, places: int = 4) -> str:
    """Fixed-point rendering, rounded half-even."""
    with localcontext() as ctx:
        ctx.prec = _PRECISION
        return str(Decimal(x).quantize(Decimal(1).scaleb(-places),
                                       rounding=ROUND_HALF_EVEN))


def inner_granularity_real(g: int, m: int) -> Decimal:
    """Un-ceiled inner bin size h + sqrt(h), h = g + m*sqrt(g) + 1."""
    if g < 1 or m < 1:
        raise ValueError(f"need g, m >= 1, got g={g}, m={m}")
    with localcontext() as ctx:
        ctx.prec = _PRECISION
        h = Decimal(g) + m * Decimal(g).sqrt() + 1
        return +(h + h.sqrt())


def implied_lower_bound(u: Fraction, g: int, m: int, *,
                        ceil_g_prime: bool = False) -> Decimal:
    """Lower bound on the optimum implied by an upper-game value u_g.

    May be negative (a vacuous but valid bound). The un-ceiled inner
    bin size is the default; ``ceil_g_prime`` switches to the integer
    granularity a solver would actually run at, for comparison.
    """
    if u < 0:
        raise ValueError(f"need u >= 0, got {u}")
    with localcontext() as ctx:
        ctx.prec = _PRECISION
        gp = Decimal(inner_granularity(g, m)) if ceil_g_prime else inner_granularity_real(g, m)
        ud = Decimal(u.numerator) / Decimal(u.denominator)
        correction = (m * Decimal(g).sqrt() + 2) / Decimal(g)
        return +((ud - correction) * Decimal(g) / gp)


def sandwich_interval(l: Fraction, g: int, m: int) -> tuple:
    """Two-sided bracket on the optimum from an inner lower-game value.

    ``l`` must be the lower-game value at granularity
    ``inner_granularity(g, m)``; returns (lo, hi) Decimals with
    lo = l and hi = (l + (m*sqrt(g) + 2)/g') * g'/g, so lo <= hi
    always (g' >= g).
    """
    if l < 0:
        raise ValueError(f"need l >= 0, got {l}")
    gp = inner_granularity(g, m)
    with localcontext() as ctx:
        ctx.prec = _PRECISION
        ld = Decimal(l.numerator) / Decimal(l.denominator)
        lo = +ld
        hi = +((ld + (m * Decimal(g).sqrt() + 2) / Decimal(gp)) * Decimal(gp) / Decimal(g))
        return lo, hi


@dataclass
class BoundReport:
    """What a bounds computation saw and produced, for display."""

    m: int
    g: int
    input_bound: Fraction
    inner_real: Decimal
    derived_lo: Decimal
    derived_hi: Decimal | None = None


def report_implied(u: Fraction, g: int, m: int, *,
                   ceil_g_prime: bool = False) -> BoundReport:
    return BoundReport(
        m=m,
        g=g,
        input_bound=u,
        inner_real=inner_granularity_real(g, m),
        derived_lo=implied_lower_bound(u, g, m, ceil_g_prime=ceil_g_prime),
    )


def report_sandwich(l: Fraction, g: int, m: int) -> BoundReport:
    lo, hi = sandwich_interval(l, g, m)
    return BoundReport(
        m=m,
        g=g,
        input_bound=l,
        inner_real=inner_granularity_real(g, m),
        derived_lo=lo,
        derived_hi=hi,
    )
