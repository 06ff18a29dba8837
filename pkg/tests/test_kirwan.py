"""Unstable strata and Poincaré-series arithmetic."""

from quartic_chow.kirwan import (
    WeightSystem,
    binary_semistable_series,
    blowdown_series,
    blowup_correction,
    enumerate_strata,
    equivariant_series,
    ip_prime,
    semistable_series,
    strata_sum,
)
from quartic_chow.series import RatSeries


def S(text: str) -> RatSeries:
    return RatSeries.parse(text)


def test_ternary_quartics_have_eleven_strata() -> None:
    strata = enumerate_strata(WeightSystem.ternary(4))
    assert len(strata) == 11
    assert sorted(s.codim for s in strata) == [4, 5, 5, 6, 6, 7, 7, 8, 8, 10, 12]


def test_binary_octic_strata() -> None:
    strata = enumerate_strata(WeightSystem.binary(8))
    assert len(strata) == 4
    assert strata_sum(strata) == S("(t^8+t^10+t^12+t^14)/(1-t^2)")


def test_equivariant_series_of_projective_space() -> None:
    assert equivariant_series(WeightSystem.ternary(4)) == S("(1-t^30)/((1-t^2)*(1-t^4)*(1-t^6))")


def test_binary_quadrics() -> None:
    assert binary_semistable_series(2) == S("1/(1-t^4)")


def test_semistable_is_equivariant_minus_strata() -> None:
    W = WeightSystem.binary(6)
    assert semistable_series(W) == equivariant_series(W) - strata_sum(enumerate_strata(W))


def test_blowup_and_blowdown_are_inverse() -> None:
    base = S("1+t^2+t^4")
    center = S("1")
    blown = base + blowup_correction(center, 3)
    assert blown == S("1+2*t^2+2*t^4")
    assert blowdown_series(blown, center, 3) == base


def test_ip_prime_shifts_the_lower_half() -> None:
    assert ip_prime(S("1+t^2+2*t^4+t^6+t^8"), 4) == S("t^2+t^4+t^6+t^8")
    assert ip_prime(S("1+t^2+t^4"), 2) == S("t^2+t^4")
