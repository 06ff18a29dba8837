"""Chern roots, Segre classes and symmetric powers."""

import pytest

from quartic_chow.chern import (
    BundleSpec,
    RootSystemContext,
    chern_class,
    normalized_dual_chern,
    segre,
    sym_power,
    total_chern,
    twist,
    weighted_chern_poly,
)
from quartic_chow.errors import GradingError, StructuralError
from quartic_chow.poly import GradedPoly, VarTable

BASE = VarTable.of("H:1 c2:2 c3:3")


def P(text: str, table: VarTable = BASE) -> GradedPoly:
    return GradedPoly.parse(text, table)


def vdual() -> BundleSpec:
    ctx = RootSystemContext(BASE, [(["b1", "b2", "b3"], [0, P("c2"), -P("c3")])])
    return BundleSpec.from_group(ctx)


def test_total_chern_of_roots() -> None:
    assert total_chern(vdual()) == P("1 + c2 - c3")


def test_segre_inverts_total_chern() -> None:
    E = vdual()
    prod = total_chern(E, top=6).mul_truncated(segre(E, 6), 6)
    assert prod == P("1")


def test_sym2_rank_and_first_class() -> None:
    E = sym_power(vdual(), 2)
    assert E.rank == 6
    assert chern_class(E, 1).is_zero()
    assert chern_class(E, 2) == P("5*c2")


def test_twist_by_hyperplane() -> None:
    E = twist(vdual(), P("H"))
    assert chern_class(E, 1) == P("3*H")


def test_twist_requires_linear_class() -> None:
    with pytest.raises(GradingError):
        twist(vdual(), P("c2"))


def test_weighted_chern_polynomial() -> None:
    ctx = RootSystemContext(BASE)
    E = BundleSpec.lines(ctx, [P("H"), P("H")], [2, 3])
    t_table = BASE.extend("t:1")
    assert weighted_chern_poly(E) == GradedPoly.parse("(2*t + H)*(3*t + H)", t_table)


def test_normalized_dual_of_traceless_bundle_flips_odd_classes() -> None:
    out = normalized_dual_chern(P("1 + c2 + c3"), 3)
    assert out == P("1 + c2 - c3")


def test_root_group_value_degrees_checked() -> None:
    with pytest.raises(GradingError):
        RootSystemContext(BASE, [(["a", "b"], [P("c2"), 0])])
    with pytest.raises(StructuralError):
        RootSystemContext(BASE, [(["a", "b"], [0])])
