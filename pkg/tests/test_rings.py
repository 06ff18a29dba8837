"""Projective-bundle pushforwards, the triangular solver and the flag variety."""

from fractions import Fraction

import pytest

from quartic_chow.errors import StructuralError
from quartic_chow.poly import GradedPoly, VarTable
from quartic_chow.rings import (
    FlagVariety,
    ProjectiveBundleLayer,
    RingPresentation,
    flag_diagonal,
    flag_structure_constant,
    layer_pushforward,
    solve_pushforward,
)

BASE = VarTable.of("c2:2 c3:3")


def P(text: str, table: VarTable) -> GradedPoly:
    return GradedPoly.parse(text, table)


def pv() -> tuple[ProjectiveBundleLayer, VarTable]:
    layer = ProjectiveBundleLayer("zeta", 3, P("1 + c2 + c3", BASE))
    return layer, BASE.extend("zeta:1", front=True)


def test_pushforward_of_powers_gives_segre_classes() -> None:
    layer, table = pv()
    z = GradedPoly.var(table, "zeta")
    assert layer_pushforward(z**1, layer).is_zero()
    assert layer_pushforward(z**2, layer) == P("1", BASE)
    assert layer_pushforward(z**3, layer).is_zero()
    assert layer_pushforward(z**4, layer) == P("-c2", BASE)
    assert layer_pushforward(z**5, layer) == P("-c3", BASE)


def test_pushforward_kills_the_relation() -> None:
    layer, table = pv()
    rel = layer.relation(table)
    z = GradedPoly.var(table, "zeta")
    for k in range(4):
        assert layer_pushforward(rel * z**k, layer).is_zero()


def test_layer_validation() -> None:
    with pytest.raises(StructuralError):
        ProjectiveBundleLayer("zeta", 3, P("2 + c2", BASE))


def test_solve_pushforward_of_identity() -> None:
    """Pushing 1 along the identity of P(E) recovers the fundamental class."""
    layer, table = pv()
    z = GradedPoly.var(table, "zeta")
    out = solve_pushforward(GradedPoly.one(table), z, lambda x: layer_pushforward(x, layer), layer, 2, 0)
    assert out.value == GradedPoly.one(out.value.table)


def flag() -> FlagVariety:
    table = VarTable.of("zeta:1 xi:1 c2:2 c3:3")
    zeta = ProjectiveBundleLayer("zeta", 3, P("1 + c2 + c3", BASE))
    xi = ProjectiveBundleLayer("xi", 2, P("1 + 3*zeta + 3*zeta^2 + c2", BASE.extend("zeta:1", front=True)))
    return FlagVariety(table, zeta, xi)


def test_flag_basis_and_top_integral() -> None:
    fl = flag()
    assert fl.dimension() == 3
    assert len(fl.basis()) == 6
    assert flag_structure_constant(fl, 0, 0).is_zero()
    assert not flag_structure_constant(fl, 2, 1).is_zero() or not flag_structure_constant(fl, 1, 2).is_zero()


def test_flag_diagonal_reproduces_basis() -> None:
    """Σ_b D_b ∫(a·b) = a for every basis monomial a, modulo the flag relations."""
    fl = flag()
    diag = flag_diagonal(fl)
    pres = RingPresentation(fl.table, tuple(fl.relations()), (), "Fl")
    for a in fl.basis():
        total = GradedPoly.zero(fl.table)
        for b in fl.basis():
            integral = flag_structure_constant(fl, a[0] + b[0], a[1] + b[1]).embed(fl.table)
            total = total + diag.dual_of(b) * integral
        assert pres.reduce(total - fl.monomial(*a)).is_zero()


def test_ring_presentation_reduce() -> None:
    layer, table = pv()
    pres = RingPresentation(table, (layer.relation(table),), (), "PV")
    z = GradedPoly.var(table, "zeta")
    assert pres.reduce(z**3 + GradedPoly.parse("c2*zeta + c3", table)).is_zero()
    assert pres.reduce(z**2).coefficient((2, 0, 0)) == Fraction(1)
