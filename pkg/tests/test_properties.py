"""Randomized identities: Whitney/Segre, projection formula, Gröbner
idempotence, Hilbert series by two routes and the blown-up plane."""

from __future__ import annotations

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from quartic_chow.chern import BundleSpec, RootSystemContext, segre, total_chern
from quartic_chow.groebner import IdealBasis, buchberger, graded_dimensions, hilbert_series, normal_form
from quartic_chow.poly import GradedPoly, VarTable
from quartic_chow.rings import ProjectiveBundleLayer, layer_pushforward

EXAMPLES = 60
SETTINGS = settings(max_examples=EXAMPLES, deadline=None, suppress_health_check=[HealthCheck.too_slow])

BASE = VarTable.of("a:1 b:1 c:2")
small = st.integers(min_value=-3, max_value=3)
fracs = st.fractions(min_value=-3, max_value=3, max_denominator=4)


def linear_form(coeffs: list[int], table: VarTable, names: tuple[str, ...]) -> GradedPoly:
    out = GradedPoly.zero(table)
    for c, n in zip(coeffs, names):
        out = out + GradedPoly.var(table, n).scale(c)
    return out


@st.composite
def homogeneous(draw: st.DrawFn, table: VarTable, degree: int) -> GradedPoly:
    from quartic_chow.groebner import monomials_of_degree

    monos = monomials_of_degree(table, degree)
    coeffs = draw(st.lists(fracs, min_size=len(monos), max_size=len(monos)))
    return GradedPoly(table, dict(zip(monos, coeffs)))


# ---- Whitney sum and Segre inverse ----------------------------------------------
@SETTINGS
@given(st.lists(st.lists(small, min_size=2, max_size=2), min_size=1, max_size=3),
       st.lists(st.lists(small, min_size=2, max_size=2), min_size=1, max_size=3))
def test_whitney_and_segre(e_roots: list[list[int]], f_roots: list[int]) -> None:
    ctx = RootSystemContext(BASE)
    E = BundleSpec.lines(ctx, [linear_form(r, BASE, ("a", "b")) for r in e_roots])
    F = BundleSpec.lines(ctx, [linear_form(r, BASE, ("a", "b")) for r in f_roots])
    top = 6
    sum_bundle = BundleSpec(ctx, E.roots + F.roots)
    assert total_chern(sum_bundle) == total_chern(E) * total_chern(F)
    assert total_chern(E, top).mul_truncated(segre(E, top), top) == GradedPoly.one(BASE)
    assert segre(sum_bundle, top) == segre(E, top).mul_truncated(segre(F, top), top)


# ---- projection formula -------------------------------------------------------------
@SETTINGS
@given(small, small, small, st.data())
def test_projection_formula(c1a: int, c1b: int, c2c: int, data: st.DataObject) -> None:
    c1 = linear_form([c1a, c1b], BASE, ("a", "b"))
    total = GradedPoly.one(BASE) + c1 + GradedPoly.var(BASE, "c").scale(c2c)
    layer = ProjectiveBundleLayer("z", 3, total)
    table = BASE.extend("z:1", front=True)
    x = data.draw(homogeneous(table, data.draw(st.integers(0, 4))))
    y = data.draw(homogeneous(BASE, data.draw(st.integers(0, 3))))
    assert layer_pushforward(y.embed(table) * x, layer) == y * layer_pushforward(x, layer)


# ---- Gröbner idempotence ---------------------------------------------------------------
QT = VarTable.of("x:1 y:1 z:2")


@SETTINGS
@given(st.data())
def test_groebner_idempotent(data: st.DataObject) -> None:
    gens = [data.draw(homogeneous(QT, d)) for d in data.draw(st.lists(st.integers(2, 3), min_size=1, max_size=3))]
    gens = [g for g in gens if g]
    if not gens:
        return
    gb = buchberger(IdealBasis.of(gens, QT))
    again = buchberger(IdealBasis.of(gb.polys, QT))
    assert again.polys == gb.polys
    p = data.draw(homogeneous(QT, 3))
    nf = normal_form(p, gb)
    assert normal_form(nf, gb) == nf
    for g in gens:
        assert normal_form(g, gb).is_zero()


# ---- Hilbert series by two routes ---------------------------------------------------------
@SETTINGS
@given(st.data())
def test_hilbert_series_two_routes(data: st.DataObject) -> None:
    gens = [data.draw(homogeneous(QT, d)) for d in data.draw(st.lists(st.integers(1, 3), min_size=1, max_size=3))]
    gens = [g for g in gens if g]
    if not gens:
        return
    ideal = IdealBasis.of(gens, QT)
    assert hilbert_series(ideal).expand(6) == graded_dimensions(ideal, 6)


# ---- toy blowup of the projective plane at a point -----------------------------------------------
TOY = VarTable.of("t:1 h:1")
TOY_IDEAL = IdealBasis.of([GradedPoly.parse(g, TOY) for g in ("h^3", "t*h", "t^2 + h^2")], TOY)


def test_toy_blowup_hilbert_series_by_ranks() -> None:
    assert graded_dimensions(TOY_IDEAL, 5) == [1, 2, 1, 0, 0, 0]
    assert hilbert_series(TOY_IDEAL).expand(5) == [1, 2, 1, 0, 0, 0]


@settings(max_examples=20, deadline=None)
@given(st.lists(small, min_size=4, max_size=4).filter(lambda m: m[0] * m[3] - m[1] * m[2] != 0))
def test_toy_blowup_invariant_under_coordinate_change(m: list[int]) -> None:
    """The Hilbert series is unchanged by an invertible linear change of t, h."""
    t, h = GradedPoly.var(TOY, "t"), GradedPoly.var(TOY, "h")
    sub = {"t": t.scale(m[0]) + h.scale(m[1]), "h": t.scale(m[2]) + h.scale(m[3])}
    moved = IdealBasis.of([g.substitute(sub) for g in TOY_IDEAL.generators], TOY)
    assert graded_dimensions(moved, 4) == [1, 2, 1, 0, 0]
    assert hilbert_series(moved).expand(4) == [1, 2, 1, 0, 0]


PROPERTY_CASES = 4 * EXAMPLES + 20 + 1
