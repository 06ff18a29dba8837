"""Buchberger, elimination and Hilbert series."""

import pytest

from quartic_chow.errors import ComputationError, GradingError
from quartic_chow.groebner import (
    BasisCache,
    IdealBasis,
    buchberger,
    eliminate,
    graded_dimensions,
    hilbert_series,
    ideal_contains,
    ideal_equal,
)
from quartic_chow.poly import GradedPoly, VarTable
from quartic_chow.series import RatSeries

T = VarTable.of("x:1 y:1 z:1")


def P(text: str, table: VarTable = T) -> GradedPoly:
    return GradedPoly.parse(text, table)


def I(*gens: str, table: VarTable = T, elim: tuple[str, ...] = ()) -> IdealBasis:
    return IdealBasis.of([P(g, table) for g in gens], table, elim)


def test_membership() -> None:
    ideal = I("x^2 - y*z", "y^2 - x*z")
    assert ideal_contains(ideal, P("x^2*y - y^2*z"))
    assert not ideal_contains(ideal, P("x*y"))


def test_reduced_basis_is_canonical() -> None:
    a = I("x^2 - y*z", "y^2 - x*z")
    b = I("x^2 - y*z + (y^2 - x*z)", "y^2 - x*z")
    assert buchberger(a).polys == buchberger(b).polys
    assert ideal_equal(a, b)


def test_hilbert_series_of_complete_intersection() -> None:
    hs = hilbert_series(I("x^2", "y^2", "z^2"))
    assert hs == RatSeries.parse("(1+t)^3")


def test_weighted_hilbert_series_matches_ranks() -> None:
    t = VarTable.of("H:1 c2:2 c3:3")
    ideal = I("H^3 - c3", "c2^2 - H*c3", table=t)
    hs = hilbert_series(ideal)
    assert hs.expand(10) == graded_dimensions(ideal, 10)


def test_elimination() -> None:
    w = VarTable.of("s:1 x:2 y:3")
    ideal = I("x - s^2", "y - s^3", table=w)
    out = eliminate(ideal, ["s"])
    assert ideal_equal(out, IdealBasis.of([P("x^3 - y^2", out.table)], out.table))


def test_cache_roundtrip(tmp_path) -> None:
    cache = BasisCache(tmp_path)
    ideal = I("x^2 - y*z", "y^3")
    gb = buchberger(ideal, cache=cache)
    assert len(cache.entries()) in (0, 1)  # memoized in-process bases are not rewritten
    cache.store(gb)
    assert cache.load(ideal).polys == gb.polys
    assert cache.clear() == 1


def test_input_guards() -> None:
    ideal = I("x^3 - y^2*z", "y^3 - x*z^2", "z^3 - x^2*y", "x*y*z")
    with pytest.raises(GradingError):
        I("x - y^2")
    with pytest.raises(ComputationError):
        buchberger(IdealBasis.of(list(ideal.generators) + [P("x^2*y^2")], T), budget=1)
