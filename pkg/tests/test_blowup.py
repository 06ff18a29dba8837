"""Blowup presentations, proper transforms and quadratic contraction."""

from quartic_chow.blowup import BlowupData, QuadraticExceptional, TransformData, blowup_presentation, proper_transform, q_class
from quartic_chow.groebner import IdealBasis, graded_dimensions, hilbert_series, ideal_equal
from quartic_chow.poly import GradedPoly, VarTable
from quartic_chow.series import RatSeries

BASE = VarTable.of("h:1")


def plane_at_point() -> BlowupData:
    table = BASE.extend("t:1", front=True)
    return BlowupData(
        BASE,
        (GradedPoly.parse("h^3", BASE),),
        (GradedPoly.parse("h", BASE),),
        GradedPoly.parse("t^2", table),
        GradedPoly.parse("h^2", BASE),
    )


def test_q_class() -> None:
    d = plane_at_point()
    assert q_class(d) == GradedPoly.parse("t^2 + h^2", d.blown_table)


def test_plane_blown_up_at_a_point() -> None:
    d = plane_at_point()
    pres = blowup_presentation(d)
    ideal = pres.ideal()
    table = d.blown_table
    expected = IdealBasis.of([GradedPoly.parse(g, table) for g in ("h^3", "t*h", "t^2 + h^2")], table)
    assert ideal_equal(ideal, expected)
    assert hilbert_series(ideal) == RatSeries.parse("1+2*t+t^2")
    assert graded_dimensions(ideal, 4) == [1, 2, 1, 0, 0]


def test_proper_transform_of_a_line() -> None:
    table = plane_at_point().blown_table
    line = proper_transform(TransformData(GradedPoly.parse("h", table), 1, GradedPoly.one(table)))
    assert line == GradedPoly.parse("h + t", table)


def test_quadratic_contraction() -> None:
    table = VarTable.of("eh:1 lam:1 del:1")
    rel = QuadraticExceptional("eh", GradedPoly.parse("8*eh^2 + 8*del*eh + lam*del + 2*del^2", table))
    eh = GradedPoly.var(table, "eh")
    assert rel.pushforward(eh).is_zero()
    assert rel.pushforward(eh**2) == GradedPoly.parse("-(lam*del + 2*del^2)/8", table)
    assert rel.pushforward(GradedPoly.parse("lam", table)) == GradedPoly.parse("lam", table)
