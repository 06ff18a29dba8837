"""Exact rational series in one variable."""

from fractions import Fraction

from quartic_chow.series import RatSeries


def S(text: str) -> RatSeries:
    return RatSeries.parse(text)


def test_lowest_terms() -> None:
    assert S("(1-t^4)/(1-t^2)") == S("1+t^2")
    assert S("(1+t^2)/(1-t^4)") == S("1/(1-t^2)")


def test_expand() -> None:
    assert S("1/(1-t^2)").expand_int(6) == [1, 0, 1, 0, 1, 0, 1]
    assert S("(1-t^30)/((1-t^2)*(1-t^4)*(1-t^6))").expand_int(6) == [1, 0, 1, 0, 2, 0, 3]


def test_halve_and_double() -> None:
    p = S("1+2*t^2+4*t^4+5*t^6+4*t^8+2*t^10+t^12")
    assert p.halve() == S("1+2*t+4*t^2+5*t^3+4*t^4+2*t^5+t^6")
    assert p.halve().double() == p


def test_spread() -> None:
    assert S("1+t+t^2").substitute_power(2) == S("1+t^2+t^4")


def test_arithmetic_with_rational_coefficients() -> None:
    s = (S("1+t") + S("1-t")) / 4
    assert s.expand(0) == [Fraction(1, 2)]


def test_printing_parses_back() -> None:
    s = S("1+t^2+2*t^4+3*t^6+3*t^8+2*t^10+2*t^12+t^14/(1-t^2)")
    assert S(str(s)) == s
