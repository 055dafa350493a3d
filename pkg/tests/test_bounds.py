from decimal import Decimal
from fractions import Fraction

import pytest

from binstretch.bounds import (
    implied_lower_bound,
    inner_granularity_real,
    render_decimal,
    report_implied,
    report_sandwich,
    sandwich_interval,
)


def test_inner_granularity_real_examples():
    assert inner_granularity_real(4, 2) == Decimal(12)
    assert abs(inner_granularity_real(1, 1) - Decimal("4.7320508")) < Decimal("1e-6")
    assert abs(inner_granularity_real(22, 4) - Decimal("48.2240")) < Decimal("1e-3")


def test_inner_granularity_real_precision():
    # at least 12 significant digits: compare against a 60-digit rerun
    from decimal import localcontext

    with localcontext() as ctx:
        ctx.prec = 60
        h = Decimal(22) + 4 * Decimal(22).sqrt() + 1
        reference = h + h.sqrt()
    got = inner_granularity_real(22, 4)
    assert abs(got - reference) / reference < Decimal("1e-13")


def test_implied_lower_bound_reproduces_published_value():
    value = implied_lower_bound(Fraction(31, 22), 22, 4)
    assert Decimal("0.211") <= value <= Decimal("0.213")
    assert render_decimal(value, 3) == "0.212"


def test_implied_lower_bound_zero_numerator():
    # u equal to the correction term gives exactly zero
    from decimal import localcontext

    for g, m in [(4, 2), (9, 3)]:
        with localcontext() as ctx:
            ctx.prec = 40
            correction = (m * Decimal(g).sqrt() + 2) / Decimal(g)
        u = Fraction(int(correction * g), g)  # sqrt(g) integral here
        assert implied_lower_bound(u, g, m) == 0


def test_implied_lower_bound_may_go_negative():
    value = implied_lower_bound(Fraction(4, 3), 3, 2)
    assert abs(value - Decimal("-0.1436")) < Decimal("0.001")


def test_implied_lower_bound_ceiled_variant_differs():
    real = implied_lower_bound(Fraction(31, 22), 22, 4)
    ceiled = implied_lower_bound(Fraction(31, 22), 22, 4, ceil_g_prime=True)
    assert ceiled != real
    assert abs(ceiled - Decimal("0.2089")) < Decimal("0.001")


def test_implied_bound_never_exceeds_input():
    for num, den in [(0, 1), (1, 3), (4, 3), (31, 22), (2, 1)]:
        u = Fraction(num, den)
        for g in (1, 2, 5, 22):
            for m in (1, 2, 4):
                assert implied_lower_bound(u, g, m) <= Decimal(num) / Decimal(den)


def test_sandwich_interval_examples():
    lo, hi = sandwich_interval(Fraction(0), 4, 2)
    assert lo == 0 and hi == Decimal("1.5")  # (m*sqrt(g)+2)/g
    lo, hi = sandwich_interval(Fraction(1), 4, 2)
    assert lo == 1 and hi == Decimal("4.5")
    lo, hi = sandwich_interval(Fraction(4, 3), 4, 2)
    assert abs(hi - Decimal("5.5")) < Decimal("1e-20")
    assert abs(lo - Decimal(4) / Decimal(3)) < Decimal("1e-20")


def test_sandwich_interval_orders_and_shrinks():
    widths = []
    for g in (4, 16, 64, 256):
        lo, hi = sandwich_interval(Fraction(4, 3), g, 2)
        assert lo <= hi
        widths.append(hi - lo)
    assert widths == sorted(widths, reverse=True)
    assert all(a > b for a, b in zip(widths, widths[1:]))


def test_reports():
    rep = report_implied(Fraction(31, 22), 22, 4)
    assert rep.derived_hi is None
    assert render_decimal(rep.derived_lo, 3) == "0.212"
    rep = report_sandwich(Fraction(1), 4, 2)
    assert rep.derived_lo == 1 and rep.derived_hi == Decimal("4.5")
    assert rep.inner_real == 12


def test_render_decimal_half_even():
    assert render_decimal(Decimal("0.12345"), 4) == "0.1234"
    assert render_decimal(Decimal("0.12355"), 4) == "0.1236"
    assert render_decimal(Decimal("-0.14359"), 4) == "-0.1436"


def test_input_validation():
    with pytest.raises(ValueError):
        implied_lower_bound(Fraction(-1, 2), 4, 2)
    with pytest.raises(ValueError):
        sandwich_interval(Fraction(-1, 2), 4, 2)
    with pytest.raises(ValueError):
        inner_granularity_real(0, 2)
